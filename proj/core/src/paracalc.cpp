#include "muskat/paracalc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "muskat/littlewood_paley.hpp"

namespace muskat {
namespace {

// Block index -1 is the zero mode, block 0 the rest of P_0.
double refined_weight(const DyadicPartition& lp, int j, int m) {
  if (j == -1) return m == 0 ? 1.0 : 0.0;
  if (j == 0) return m == 0 ? 0.0 : lp.weight(0, m);
  return lp.weight(j, m);
}

// Cumulative weight of refined blocks -1 .. j.
double refined_low_weight(const DyadicPartition& lp, int j, int m) {
  if (j < -1) return 0.0;
  if (j == -1) return m == 0 ? 1.0 : 0.0;
  return lp.low_weight(j, m);
}

bool low_high(int j, int jp) { return jp >= 0 && j <= std::max(jp - 2, -1); }

Spectrum weighted(const Spectrum& s, auto&& weight) {
  Spectrum out(s.grid());
  for (int m = 0; m < s.grid().mode_count(); ++m) out[m] = s[m] * weight(m);
  return out;
}

bool is_zero(const Spectrum& s) {
  return std::all_of(s.slots().begin(), s.slots().end(),
                     [](Complex c) { return c == Complex(0.0); });
}

void accumulate_product(std::vector<double>& acc, const Spectrum& a, const Spectrum& b) {
  const auto av = padded_values(a);
  const auto bv = padded_values(b);
  for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += av[j] * bv[j];
}

}  // namespace

Field paraproduct(const Field& a, const Field& u) {
  if (!(a.grid() == u.grid())) throw std::invalid_argument("paraproduct: grid mismatch");
  const auto& grid = u.grid();
  const DyadicPartition lp(grid);
  const auto as = to_spectrum(a);
  const auto us = to_spectrum(u);
  std::vector<double> acc(2 * grid.size(), 0.0);
  for (int jp = 0; jp < lp.block_count(); ++jp) {
    const auto high = weighted(us, [&](int m) { return refined_weight(lp, jp, m); });
    if (is_zero(high)) continue;
    const int low_top = std::max(jp - 2, -1);
    const auto low = weighted(as, [&](int m) { return refined_low_weight(lp, low_top, m); });
    if (is_zero(low)) continue;
    accumulate_product(acc, low, high);
  }
  return to_field(truncate_padded(acc, grid));
}

Field bony_remainder(const Field& a, const Field& u) {
  if (!(a.grid() == u.grid())) throw std::invalid_argument("bony_remainder: grid mismatch");
  const auto& grid = u.grid();
  const DyadicPartition lp(grid);
  const auto as = to_spectrum(a);
  const auto us = to_spectrum(u);
  std::vector<double> acc(2 * grid.size(), 0.0);
  for (int j = -1; j < lp.block_count(); ++j) {
    const auto aj = weighted(as, [&](int m) { return refined_weight(lp, j, m); });
    if (is_zero(aj)) continue;
    for (int jp = -1; jp < lp.block_count(); ++jp) {
      if (low_high(j, jp) || low_high(jp, j)) continue;
      const auto uj = weighted(us, [&](int m) { return refined_weight(lp, jp, m); });
      if (is_zero(uj)) continue;
      accumulate_product(acc, aj, uj);
    }
  }
  return to_field(truncate_padded(acc, grid));
}

OrderedSymbol::OrderedSymbol(std::vector<SymbolTerm> terms) : terms_(std::move(terms)) {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto& t = terms_[i];
    if (t.power < 0 || t.power > 5) throw std::invalid_argument("symbol power must lie in 0..5");
    if (t.unit == SymbolUnit::Power && t.power % 2 != 0)
      throw std::invalid_argument("xi^p with odd p does not preserve real fields; use i xi^p");
    if (t.unit == SymbolUnit::ImaginaryPower && t.power % 2 != 1)
      throw std::invalid_argument("i xi^p with even p does not preserve real fields; use xi^p");
    if (!(t.coefficient.grid() == terms_.front().coefficient.grid()))
      throw std::invalid_argument("symbol coefficients must share one grid");
    for (std::size_t k = 0; k < i; ++k)
      if (terms_[k].power == t.power && terms_[k].unit == t.unit)
        throw std::invalid_argument("duplicate symbol term");
  }
}

const PeriodicGrid& OrderedSymbol::grid() const {
  if (terms_.empty()) throw std::logic_error("empty symbol has no grid");
  return terms_.front().coefficient.grid();
}

Field OrderedSymbol::coefficient(int power, SymbolUnit unit) const {
  for (const auto& t : terms_)
    if (t.power == power && t.unit == unit) return t.coefficient;
  return Field(grid());
}

Field apply_unit(const Field& u, int power, SymbolUnit unit) {
  auto s = to_spectrum(u);
  const auto& g = u.grid();
  const int half = g.size() / 2;
  for (int m = 0; m < g.mode_count(); ++m) {
    const double k = g.abs_wavenumber(m);
    const double kp = std::pow(k, power);
    switch (unit) {
      case SymbolUnit::Power: s[m] *= kp; break;
      case SymbolUnit::ImaginaryPower: s[m] *= (m == half) ? Complex(0.0) : Complex(0.0, kp); break;
      case SymbolUnit::AbsPower: s[m] *= (m == 0 && power != 0) ? 0.0 : kp; break;
    }
  }
  return to_field(s);
}

Field para_apply(const OrderedSymbol& symbol, const Field& u) {
  Field out(u.grid());
  for (const auto& t : symbol.terms()) out += paraproduct(t.coefficient, apply_unit(u, t.power, t.unit));
  return out;
}

Field paralin_remainder(const std::function<double(double)>& fn,
                        const std::function<double(double)>& dfn, const Field& u) {
  const double f0 = fn(0.0);
  const Field fu = pointwise_dealiased([&](double x) { return fn(x) - f0; }, u);
  const Field dfu = pointwise_dealiased([&](double x) { return dfn(x); }, u);
  return fu - paraproduct(dfu, u);
}

}  // namespace muskat
