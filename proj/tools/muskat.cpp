#include <iostream>

#include <CLI11.hpp>

#include "muskat/cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral Muskat solver with an elastic interface"};
  app.set_version_flag("--version", muskat::cli::kVersion);
  app.require_subcommand(1);

  muskat::cli::CommandOptions opts;
  std::string output;
  app.add_option("--output", output, "Output directory (overrides the config)");
  app.add_flag("--quiet", opts.quiet, "Suppress progress output");

  std::string config;
  auto* simulate = app.add_subcommand("simulate", "Run a configured experiment");
  simulate->add_option("--config", config, "JSON run configuration")->required();
  simulate->add_option("--output", output, "Output directory (overrides the config)");
  simulate->add_flag("--quiet", opts.quiet, "Suppress progress output");

  std::string suite;
  auto* verify = app.add_subcommand("verify", "Run a verification suite and write report.csv");
  verify->add_option("suite", suite, "Suite name")->required();
  verify->add_option("--config", config, "JSON run configuration (output directory)");
  verify->add_option("--output", output, "Output directory");
  verify->add_flag("--quiet", opts.quiet, "Suppress progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  if (!output.empty()) opts.output = output;

  if (simulate->parsed()) return muskat::cli::cmd_simulate(config, opts, std::cout, std::cerr);
  std::optional<std::filesystem::path> cfg;
  if (!config.empty()) cfg = config;
  return muskat::cli::cmd_verify(suite, cfg, opts, std::cout, std::cerr);
}
