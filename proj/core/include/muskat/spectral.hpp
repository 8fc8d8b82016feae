#pragma once

// Periodic grids, real grid functions, their Fourier coefficients and the
// Fourier multipliers used throughout the solver.
//
// Coefficient convention (used everywhere in the library):
//
//     f_hat(k) = (1/n) * sum_j f(x_j) exp(-i k x_j),   x_j = j L / n,
//
// the discrete counterpart of (1/L) * integral_0^L f(x) exp(-i k x) dx, so that
// f(x) = sum_k f_hat(k) exp(i k x) and cos(2 pi x / L) has coefficients 1/2 at
// k = +-2 pi / L. Wavenumbers are k_m = 2 pi m / L with m in [-n/2, n/2 - 1].
// The Nyquist slot m = -n/2 is zeroed by every odd-order multiplier.

#include <complex>
#include <cstddef>
#include <span>
#include <tuple>
#include <vector>

namespace muskat {

using Complex = std::complex<double>;

class PeriodicGrid {
 public:
  /// `n` must be a power of two with n >= 8; `length` must be positive.
  PeriodicGrid(int n, double length);

  int size() const noexcept { return n_; }
  double length() const noexcept { return length_; }
  double spacing() const noexcept { return length_ / n_; }
  double node(int j) const noexcept { return j * spacing(); }
  /// Smallest nonzero |k|.
  double fundamental() const noexcept;
  /// Number of stored coefficient slots of a real field (m = 0 .. n/2).
  int mode_count() const noexcept { return n_ / 2 + 1; }
  /// |k| for slot m in [0, n/2].
  double abs_wavenumber(int m) const noexcept { return m * fundamental(); }
  /// Largest |k| represented on the grid.
  double max_wavenumber() const noexcept { return abs_wavenumber(n_ / 2); }

  bool operator==(const PeriodicGrid& other) const noexcept {
    return n_ == other.n_ && length_ == other.length_;
  }

 private:
  int n_;
  double length_;
};

/// Real samples of a periodic function at the grid nodes.
class Field {
 public:
  explicit Field(PeriodicGrid grid);
  Field(PeriodicGrid grid, std::vector<double> values);

  template <class Fn>
  static Field from_function(const PeriodicGrid& grid, Fn&& fn) {
    std::vector<double> v(grid.size());
    for (int j = 0; j < grid.size(); ++j) v[j] = fn(grid.node(j));
    return Field(grid, std::move(v));
  }

  const PeriodicGrid& grid() const noexcept { return grid_; }
  int size() const noexcept { return grid_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](int j) const noexcept { return values_[j]; }
  double& operator[](int j) noexcept { return values_[j]; }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);

 private:
  PeriodicGrid grid_;
  std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator-(Field a);
Field operator*(double s, Field a);
Field operator*(Field a, double s);

/// Fourier coefficients of a real field, stored for slots m = 0 .. n/2. The
/// slot n/2 holds the coefficient of the Nyquist mode k = -n/2.
class Spectrum {
 public:
  explicit Spectrum(PeriodicGrid grid);
  Spectrum(PeriodicGrid grid, std::vector<Complex> coeffs);

  const PeriodicGrid& grid() const noexcept { return grid_; }
  std::span<const Complex> slots() const noexcept { return coeffs_; }
  std::span<Complex> slots() noexcept { return coeffs_; }
  Complex& operator[](int m) noexcept { return coeffs_[m]; }
  Complex operator[](int m) const noexcept { return coeffs_[m]; }

  /// Coefficient of exp(i k_m x) for any signed m in [-n/2, n/2 - 1].
  Complex coeff(int m) const;

 private:
  PeriodicGrid grid_;
  std::vector<Complex> coeffs_;
};

Spectrum to_spectrum(const Field& f);
Field to_field(const Spectrum& s);

/// Raw transforms on spans; `coeffs` has n/2 + 1 entries.
void forward_transform(std::span<const double> values, std::span<Complex> coeffs);
void inverse_transform(std::span<const Complex> coeffs, std::span<double> values);

enum class MultiplierKind {
  AbsPower,    ///< |D|^alpha
  Derivative,  ///< d^m/dx^m
  InverseAbs,  ///< |D|^{-1}, zero mode mapped to 0
};

Field fractional_multiplier(const Field& f, MultiplierKind kind, double order = 1.0);

/// |D|^alpha. The zero mode is kept only for alpha == 0.
Field abs_derivative(const Field& f, double alpha);
/// d^m/dx^m for m >= 0.
Field derivative(const Field& f, int order);
/// |D|^{-1} d/dx, the bounded multiplier i sign(k).
Field hilbert_derivative(const Field& f);

/// Zeroes every nonzero-mode coefficient with |c| < rel_tol * max|c| over
/// the nonzero modes (Krasny filter).
/// Keeps roundoff in unresolved modes from being amplified by high-order
/// multipliers.
void noise_filter(Spectrum& s, double rel_tol);

/// In-place multiplier actions on spectra.
void apply_abs_power(Spectrum& s, double alpha);
void apply_derivative(Spectrum& s, int order);
void apply_hilbert_derivative(Spectrum& s);

/// exp(-t (nu1 |k|^alpha1 + nu2 |k|^alpha2)) applied mode-by-mode; t >= 0.
Field semigroup_apply(const Field& f, double t, double nu1, double alpha1, double nu2,
                      double alpha2);

double mean(const Field& f);
double sup_norm(const Field& f);
/// L^2 inner product (integral over one period).
double inner_product(const Field& a, const Field& b);
/// (sum_k (1 + k^2)^s |f_hat(k)|^2)^{1/2}.
double sobolev_norm(const Field& f, double s);
double sobolev_norm(const Spectrum& s, double index);

/// Spectral interpolation (zero padding) or truncation onto `target`.
Field resample(const Field& f, const PeriodicGrid& target);

/// Samples of `s` on the 2x refined grid (zero padding).
std::vector<double> padded_values(const Spectrum& s);
/// Spectrum on `grid` of values sampled on its 2x refined grid (truncation).
Spectrum truncate_padded(std::span<const double> fine_values, const PeriodicGrid& grid);

/// Product evaluated on a 2x zero-padded grid and truncated back.
Field multiply(const Field& a, const Field& b);

/// Evaluates a pointwise nonlinearity of several fields on a 2x zero-padded
/// grid and truncates the result back to the fields' grid.
template <class Fn, class... Rest>
Field pointwise_dealiased(Fn&& fn, const Field& first, const Rest&... rest) {
  const PeriodicGrid fine(first.size() * 2, first.grid().length());
  const Field fine_first = resample(first, fine);
  const auto fine_rest = std::make_tuple(resample(rest, fine)...);
  Field out(fine);
  for (int j = 0; j < fine.size(); ++j) {
    out[j] = std::apply([&](const auto&... r) { return fn(fine_first[j], r[j]...); }, fine_rest);
  }
  return resample(out, first.grid());
}

/// Pointwise map on the grid itself, without padding.
template <class Fn>
Field pointwise(const Field& f, Fn&& fn) {
  Field out(f.grid());
  for (int j = 0; j < f.size(); ++j) out[j] = fn(f[j]);
  return out;
}

/// integral_0^d exp(-lambda s) s^j ds for j = 0, 1, 2, evaluated without
/// cancellation for all lambda >= 0.
double exp_moment(double lambda, double d, int j);

/// phi_1(z) = (1 - exp(-z)) / z with the series branch for |z| < 1e-3.
double phi1(double z);
/// phi_2(z) = (z - 1 + exp(-z)) / z^2 with a series branch for small |z|.
double phi2(double z);

}  // namespace muskat
