#include "muskat/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace muskat {

double dyadic_cutoff(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  return 0.5 * (1.0 + std::cos(std::numbers::pi * std::log2(r)));
}

DyadicPartition::DyadicPartition(const PeriodicGrid& grid) : grid_(grid) {
  // Smallest J with 2^J >= k_max: S_J is then the identity on the grid.
  const double kmax = grid.max_wavenumber();
  int top = 1;
  while (std::ldexp(1.0, top) < kmax) ++top;
  blocks_ = top + 1;
}

double DyadicPartition::low_weight(int j, int m) const {
  if (j < 0) return 0.0;
  if (j >= blocks_ - 1) return 1.0;
  return dyadic_cutoff(grid_.abs_wavenumber(m) / std::ldexp(1.0, j));
}

double DyadicPartition::weight(int j, int m) const {
  if (j < 0 || j >= blocks_) throw std::out_of_range("Littlewood-Paley block index out of range");
  return low_weight(j, m) - low_weight(j - 1, m);
}

void DyadicPartition::project(Spectrum& s, int j) const {
  for (int m = 0; m < grid_.mode_count(); ++m) s[m] *= weight(j, m);
}

void DyadicPartition::low_pass(Spectrum& s, int j) const {
  for (int m = 0; m < grid_.mode_count(); ++m) s[m] *= low_weight(j, m);
}

Field DyadicPartition::project(const Field& f, int j) const {
  auto s = to_spectrum(f);
  project(s, j);
  return to_field(s);
}

Field DyadicPartition::low_pass(const Field& f, int j) const {
  auto s = to_spectrum(f);
  low_pass(s, j);
  return to_field(s);
}

Field lp_project(const Field& f, int j) {
  const DyadicPartition lp(f.grid());
  if (j >= lp.block_count()) return Field(f.grid());
  return lp.project(f, j);
}

double zygmund_norm(const Field& f, double s) {
  const DyadicPartition lp(f.grid());
  double best = 0.0;
  for (int j = 0; j < lp.block_count(); ++j)
    best = std::max(best, std::pow(2.0, j * s) * sup_norm(lp.project(f, j)));
  return best;
}

LipschitzNorms lipschitz_norms(const Field& f, double eps) {
  const Field fx = derivative(f, 1);
  const DyadicPartition lp(f.grid());
  LipschitzNorms out;
  out.lipschitz = sup_norm(fx);
  double semi = 0.0;
  for (int j = 1; j < lp.block_count(); ++j)
    semi = std::max(semi, std::pow(2.0, j * eps) * sup_norm(lp.project(fx, j)));
  out.w1eps = out.lipschitz + semi;
  return out;
}

}  // namespace muskat
