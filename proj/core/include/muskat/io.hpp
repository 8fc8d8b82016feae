#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "muskat/spectral.hpp"

namespace muskat {

/// Decimal rendering with 17 significant digits.
std::string format_number(double value);

/// CSV `x,value`, one row per node.
void write_field_csv(std::ostream& out, const Field& f);
void write_field_csv(const std::filesystem::path& path, const Field& f);

/// Reads a `x,value` CSV. The period is inferred from the node spacing unless
/// given explicitly.
Field read_field_csv(std::istream& in, std::optional<double> length = std::nullopt);
Field read_field_csv(const std::filesystem::path& path,
                     std::optional<double> length = std::nullopt);

/// CSV `k,re,im` over signed wavenumbers -n/2 .. n/2 - 1.
void write_spectrum_csv(std::ostream& out, const Spectrum& s);

}  // namespace muskat
