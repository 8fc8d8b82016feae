#pragma once

// Subcommands of the muskat driver. Exit codes: 0 success, 1 invalid
// input, 2 clean solver abort.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace muskat::cli {

inline constexpr const char* kVersion = "0.1.0";

struct CommandOptions {
  std::optional<std::filesystem::path> output;  ///< overrides output.directory
  bool quiet = false;
};

int cmd_simulate(const std::filesystem::path& config, const CommandOptions& opts, std::ostream& out,
                 std::ostream& err);

int cmd_verify(const std::string& suite, const std::optional<std::filesystem::path>& config,
               const CommandOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace muskat::cli
