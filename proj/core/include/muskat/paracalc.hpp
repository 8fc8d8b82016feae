#pragma once

// Bony paraproducts and paradifferential operators with symbols that are
// polynomial in the frequency variable.
//
// Blocks of the high-frequency factor are the dyadic blocks of
// DyadicPartition, with the zero mode split off block 0. For a block j' of
// u, the low-frequency factor is S_{j'-2}(a) when j' >= 2 and the mean of a
// for j' in {0, 1}:
//
//     T_a u = mean(a) (Delta_0 u - u_hat(0) + Delta_1 u) + sum_{j'>=2} S_{j'-2}(a) Delta_{j'} u.
//
// Only the zero mode of u is discarded, so T_1 u = u - mean(u).

#include <functional>
#include <vector>

#include "muskat/spectral.hpp"

namespace muskat {

/// Low-high paraproduct T_a u.
Field paraproduct(const Field& a, const Field& u);

/// Balanced remainder: the sum of block products Delta_j a Delta_j' u that
/// belong to neither T_a u nor T_u a. a u = T_a u + T_u a + R(a, u).
Field bony_remainder(const Field& a, const Field& u);

enum class SymbolUnit {
  Power,           ///< xi^p, p even
  ImaginaryPower,  ///< i xi^p, p odd
  AbsPower,        ///< |xi|^p
};

struct SymbolTerm {
  int power;
  Field coefficient;
  SymbolUnit unit;
};

/// a(x, xi) = sum_terms coefficient(x) * unit(xi). Only units that map real
/// fields to real fields are accepted.
class OrderedSymbol {
 public:
  explicit OrderedSymbol(std::vector<SymbolTerm> terms);

  const std::vector<SymbolTerm>& terms() const noexcept { return terms_; }
  const PeriodicGrid& grid() const;
  /// Coefficient field of (power, unit); zero field when absent.
  Field coefficient(int power, SymbolUnit unit) const;

 private:
  std::vector<SymbolTerm> terms_;
};

/// Applies unit(xi) as a Fourier multiplier.
Field apply_unit(const Field& u, int power, SymbolUnit unit);

/// T_a u = sum_terms paraproduct(coefficient, unit(D) u).
Field para_apply(const OrderedSymbol& symbol, const Field& u);

/// F(u) - F(0) - T_{F'(u)} u with F and F' evaluated pointwise.
Field paralin_remainder(const std::function<double(double)>& fn,
                        const std::function<double(double)>& dfn, const Field& u);

}  // namespace muskat
