#include "muskat/elastic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace muskat {
namespace {

// Relative cutoff of the noise filter applied before every derivative.
constexpr double kNoiseFilter = 1e-15;

Field dx(const Field& f, int order) {
  auto s = to_spectrum(f);
  noise_filter(s, kNoiseFilter);
  apply_derivative(s, order);
  return to_field(s);
}

struct Slopes {
  Field hx;
  Field hxx;
};

Slopes slopes(const Field& eta) {
  auto s = to_spectrum(eta);
  noise_filter(s, kNoiseFilter);
  apply_derivative(s, 1);
  Field hx = to_field(s);
  apply_derivative(s, 1);
  return {std::move(hx), to_field(s)};
}

// Coefficient fields shared by the symbol and the Gateaux derivative:
//   a4 = (1+h_x^2)^{-5/2}
//   c  = h_x h_xx (1+h_x^2)^{-7/2}
//   d  = h_xx^2 (1 - 6 h_x^2) (1+h_x^2)^{-9/2}
struct Coefficients {
  Field a4;
  Field c;
  Field d;
};

Coefficients coefficients(const Field& eta) {
  const auto [hx, hxx] = slopes(eta);
  return {
      pointwise_dealiased([](double p) { return std::pow(1.0 + p * p, -2.5); }, hx),
      pointwise_dealiased(
          [](double p, double q) { return p * q * std::pow(1.0 + p * p, -3.5); }, hx, hxx),
      pointwise_dealiased(
          [](double p, double q) { return q * q * (1.0 - 6.0 * p * p) * std::pow(1.0 + p * p, -4.5); },
          hx, hxx),
  };
}

bool identically_zero(const Field& f) {
  return std::all_of(f.values().begin(), f.values().end(), [](double v) { return v == 0.0; });
}

}  // namespace

Field curvature(const Field& eta) {
  const auto [hx, hxx] = slopes(eta);
  return pointwise_dealiased([](double p, double q) { return q * std::pow(1.0 + p * p, -1.5); },
                             hx, hxx);
}

Field elastic_E(const Field& eta, ElasticForm form) {
  const auto [hx, hxx] = slopes(eta);
  if (form == ElasticForm::Curvature) {
    const Field kappa = pointwise_dealiased(
        [](double p, double q) { return q * std::pow(1.0 + p * p, -1.5); }, hx, hxx);
    const Field inner = pointwise_dealiased(
        [](double p, double kx) { return kx / std::sqrt(1.0 + p * p); }, hx, dx(kappa, 1));
    return pointwise_dealiased(
        [](double p, double ix, double k) { return ix / std::sqrt(1.0 + p * p) + 0.5 * k * k * k; },
        hx, dx(inner, 1), kappa);
  }
  const Field tangent =
      pointwise_dealiased([](double p) { return p / std::sqrt(1.0 + p * p); }, hx);
  const Field bent = pointwise_dealiased([](double p, double tx) { return tx / (1.0 + p * p); }, hx,
                                         dx(tangent, 1));
  const Field cubic = pointwise_dealiased(
      [](double p, double q) { return p * q * q * std::pow(1.0 + p * p, -3.5); }, hx, hxx);
  return dx(bent, 2) + 2.5 * dx(cubic, 1);
}

OrderedSymbol symbol_ell(const Field& eta) {
  const auto [a4, c, d] = coefficients(eta);
  std::vector<SymbolTerm> terms;
  auto push = [&](int p, Field coeff, SymbolUnit unit) {
    if (p == 4 || !identically_zero(coeff)) terms.push_back({p, std::move(coeff), unit});
  };
  push(4, a4, SymbolUnit::Power);
  push(3, -2.0 * dx(a4, 1), SymbolUnit::ImaginaryPower);
  push(2, -(dx(a4, 2) - 5.0 * dx(c, 1) + 2.5 * d), SymbolUnit::Power);
  push(1, 2.5 * dx(d, 1) - 5.0 * dx(c, 2), SymbolUnit::ImaginaryPower);
  return OrderedSymbol(std::move(terms));
}

ElasticSplit elastic_split(const Field& eta) {
  Field total = elastic_E(eta, ElasticForm::Curvature);
  Field principal = para_apply(symbol_ell(eta), eta);
  Field remainder = total - principal;
  return {std::move(principal), std::move(remainder), std::move(total)};
}

Field gateaux_dE(const Field& eta, const Field& direction) {
  if (!(eta.grid() == direction.grid())) throw std::invalid_argument("gateaux_dE: grid mismatch");
  const auto [a4, c, d] = coefficients(eta);
  const Field second = dx(a4, 2) - 5.0 * dx(c, 1) + 2.5 * d;
  const Field first = 5.0 * dx(c, 2) - 2.5 * dx(d, 1);
  return multiply(a4, dx(direction, 4)) + 2.0 * multiply(dx(a4, 1), dx(direction, 3)) +
         multiply(second, dx(direction, 2)) - multiply(first, dx(direction, 1));
}

}  // namespace muskat
