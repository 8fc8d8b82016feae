#include "muskat/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace muskat {

std::string format_number(double value) {
  std::ostringstream os;
  os << std::setprecision(17) << value;
  return os.str();
}

void write_field_csv(std::ostream& out, const Field& f) {
  out << "x,value\n";
  for (int j = 0; j < f.size(); ++j)
    out << format_number(f.grid().node(j)) << ',' << format_number(f[j]) << '\n';
}

void write_field_csv(const std::filesystem::path& path, const Field& f) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_field_csv(out, f);
}

Field read_field_csv(std::istream& in, std::optional<double> length) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("x,value", 0) != 0)
    throw std::runtime_error("field CSV must start with header 'x,value'");
  std::vector<double> xs, vs;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("line " + std::to_string(lineno) + ": expected 'x,value'");
    try {
      xs.push_back(std::stod(line.substr(0, comma)));
      vs.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw std::runtime_error("line " + std::to_string(lineno) + ": malformed number");
    }
  }
  if (xs.size() < 2) throw std::runtime_error("field CSV has fewer than two rows");
  const double period = length.value_or(xs.size() * (xs[1] - xs[0]));
  PeriodicGrid grid(static_cast<int>(xs.size()), period);
  return Field(grid, std::move(vs));
}

Field read_field_csv(const std::filesystem::path& path, std::optional<double> length) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_field_csv(in, length);
}

void write_spectrum_csv(std::ostream& out, const Spectrum& s) {
  const auto& g = s.grid();
  const int half = g.size() / 2;
  out << "k,re,im\n";
  for (int m = -half; m < half; ++m) {
    const Complex c = s.coeff(m);
    out << format_number(m * g.fundamental()) << ',' << format_number(c.real()) << ','
        << format_number(c.imag()) << '\n';
  }
}

}  // namespace muskat
