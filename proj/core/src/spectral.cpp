#include "muskat/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "muskat/errors.hpp"

namespace muskat {

std::string_view to_string(SolverErrorKind kind) {
  switch (kind) {
    case SolverErrorKind::NotContracting: return "NotContracting";
    case SolverErrorKind::DepthTruncationInsufficient: return "DepthTruncationInsufficient";
    case SolverErrorKind::DegenerateJacobian: return "DegenerateJacobian";
    case SolverErrorKind::SeparationLost: return "SeparationLost";
    case SolverErrorKind::SingularSystem: return "SingularSystem";
  }
  return "Unknown";
}

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// FFTW plans are created once per size and executed through the new-array
// interface, which is safe to call concurrently.
struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
  }

  const PlanPair& get(int n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    std::vector<double> real(n);
    std::vector<fftw_complex> cplx(n / 2 + 1);
    PlanPair p;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    p.forward = fftw_plan_dft_r2c_1d(n, real.data(), cplx.data(), flags);
    p.backward = fftw_plan_dft_c2r_1d(n, cplx.data(), real.data(), flags | FFTW_DESTROY_INPUT);
    return plans_.emplace(n, p).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<int, PlanPair> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

void require_same_grid(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("fields live on different grids");
}

}  // namespace

PeriodicGrid::PeriodicGrid(int n, double length) : n_(n), length_(length) {
  if (n < 8 || !is_power_of_two(n))
    throw std::invalid_argument("grid size must be a power of two >= 8, got " + std::to_string(n));
  if (!(length > 0.0) || !std::isfinite(length))
    throw std::invalid_argument("grid length must be positive and finite");
}

double PeriodicGrid::fundamental() const noexcept {
  return 2.0 * std::numbers::pi / length_;
}

Field::Field(PeriodicGrid grid) : grid_(grid), values_(grid.size(), 0.0) {}

Field::Field(PeriodicGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid_.size())
    throw std::invalid_argument("field size does not match grid");
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(*this, other);
  for (int j = 0; j < size(); ++j) values_[j] += other.values_[j];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(*this, other);
  for (int j = 0; j < size(); ++j) values_[j] -= other.values_[j];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator-(Field a) { return a *= -1.0; }
Field operator*(double s, Field a) { return a *= s; }
Field operator*(Field a, double s) { return a *= s; }

Spectrum::Spectrum(PeriodicGrid grid) : grid_(grid), coeffs_(grid.mode_count()) {}

Spectrum::Spectrum(PeriodicGrid grid, std::vector<Complex> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (static_cast<int>(coeffs_.size()) != grid_.mode_count())
    throw std::invalid_argument("spectrum size does not match grid");
}

Complex Spectrum::coeff(int m) const {
  const int half = grid_.size() / 2;
  if (m < -half || m >= half) throw std::out_of_range("wavenumber index out of range");
  if (m == -half) return coeffs_[half];
  if (m >= 0) return coeffs_[m];
  return std::conj(coeffs_[-m]);
}

void forward_transform(std::span<const double> values, std::span<Complex> coeffs) {
  const int n = static_cast<int>(values.size());
  if (static_cast<int>(coeffs.size()) != n / 2 + 1)
    throw std::invalid_argument("forward_transform: size mismatch");
  std::vector<double> in(values.begin(), values.end());
  const auto& plan = plan_cache().get(n);
  fftw_execute_dft_r2c(plan.forward, in.data(), reinterpret_cast<fftw_complex*>(coeffs.data()));
  const double scale = 1.0 / n;
  for (auto& c : coeffs) c *= scale;
}

void inverse_transform(std::span<const Complex> coeffs, std::span<double> values) {
  const int n = static_cast<int>(values.size());
  if (static_cast<int>(coeffs.size()) != n / 2 + 1)
    throw std::invalid_argument("inverse_transform: size mismatch");
  std::vector<Complex> in(coeffs.begin(), coeffs.end());
  // A real field cannot carry imaginary parts in the self-conjugate slots.
  in[0] = Complex(in[0].real(), 0.0);
  in[n / 2] = Complex(in[n / 2].real(), 0.0);
  const auto& plan = plan_cache().get(n);
  fftw_execute_dft_c2r(plan.backward, reinterpret_cast<fftw_complex*>(in.data()), values.data());
}

Spectrum to_spectrum(const Field& f) {
  Spectrum s(f.grid());
  forward_transform(f.values(), s.slots());
  return s;
}

Field to_field(const Spectrum& s) {
  Field f(s.grid());
  inverse_transform(s.slots(), f.values());
  return f;
}

void apply_abs_power(Spectrum& s, double alpha) {
  const auto& g = s.grid();
  s[0] = alpha == 0.0 ? s[0] : Complex(0.0);
  for (int m = 1; m < g.mode_count(); ++m) s[m] *= std::pow(g.abs_wavenumber(m), alpha);
}

void apply_derivative(Spectrum& s, int order) {
  if (order < 0) throw std::invalid_argument("derivative order must be non-negative");
  if (order == 0) return;
  const auto& g = s.grid();
  const int half = g.size() / 2;
  // (ik)^order = k^order * i^order
  static constexpr Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const Complex ip = kIPow[order % 4];
  s[0] = 0.0;
  for (int m = 1; m < half; ++m) s[m] *= ip * std::pow(g.abs_wavenumber(m), order);
  if (order % 2 == 1) {
    s[half] = 0.0;
  } else {
    // k = -n/2 for the Nyquist slot; even powers are sign-free.
    s[half] *= ip * std::pow(g.abs_wavenumber(half), order);
  }
}

void noise_filter(Spectrum& s, double rel_tol) {
  auto slots = s.slots();
  double peak = 0.0;
  for (std::size_t m = 1; m < slots.size(); ++m) peak = std::max(peak, std::abs(slots[m]));
  const double cut = rel_tol * peak;
  for (std::size_t m = 1; m < slots.size(); ++m)
    if (std::abs(slots[m]) < cut) slots[m] = 0.0;
}

void apply_hilbert_derivative(Spectrum& s) {
  const int half = s.grid().size() / 2;
  s[0] = 0.0;
  for (int m = 1; m < half; ++m) s[m] *= Complex(0.0, 1.0);
  s[half] = 0.0;
}

Field fractional_multiplier(const Field& f, MultiplierKind kind, double order) {
  switch (kind) {
    case MultiplierKind::AbsPower: return abs_derivative(f, order);
    case MultiplierKind::Derivative: {
      const int m = static_cast<int>(std::lround(order));
      if (std::abs(order - m) > 0.0) throw std::invalid_argument("derivative order must be integral");
      return derivative(f, m);
    }
    case MultiplierKind::InverseAbs: return abs_derivative(f, -1.0);
  }
  throw std::invalid_argument("unknown multiplier kind");
}

Field abs_derivative(const Field& f, double alpha) {
  auto s = to_spectrum(f);
  apply_abs_power(s, alpha);
  return to_field(s);
}

Field derivative(const Field& f, int order) {
  auto s = to_spectrum(f);
  apply_derivative(s, order);
  return to_field(s);
}

Field hilbert_derivative(const Field& f) {
  auto s = to_spectrum(f);
  apply_hilbert_derivative(s);
  return to_field(s);
}

Field semigroup_apply(const Field& f, double t, double nu1, double alpha1, double nu2,
                      double alpha2) {
  if (!(t >= 0.0)) throw std::invalid_argument("semigroup_apply: negative time is anti-diffusive");
  if (nu1 < 0.0 || nu2 < 0.0) throw std::invalid_argument("semigroup_apply: negative rate");
  auto s = to_spectrum(f);
  const auto& g = f.grid();
  for (int m = 1; m < g.mode_count(); ++m) {
    const double k = g.abs_wavenumber(m);
    s[m] *= std::exp(-t * (nu1 * std::pow(k, alpha1) + nu2 * std::pow(k, alpha2)));
  }
  return to_field(s);
}

double mean(const Field& f) {
  double sum = 0.0;
  for (double v : f.values()) sum += v;
  return sum / f.size();
}

double sup_norm(const Field& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double inner_product(const Field& a, const Field& b) {
  require_same_grid(a, b);
  double sum = 0.0;
  for (int j = 0; j < a.size(); ++j) sum += a[j] * b[j];
  return sum * a.grid().spacing();
}

double sobolev_norm(const Spectrum& s, double index) {
  const auto& g = s.grid();
  const int half = g.size() / 2;
  double sum = std::norm(s[0]);
  for (int m = 1; m < half; ++m) {
    const double k = g.abs_wavenumber(m);
    sum += 2.0 * std::pow(1.0 + k * k, index) * std::norm(s[m]);
  }
  const double kn = g.abs_wavenumber(half);
  sum += std::pow(1.0 + kn * kn, index) * std::norm(s[half]);
  return std::sqrt(sum);
}

double sobolev_norm(const Field& f, double s) { return sobolev_norm(to_spectrum(f), s); }

Field resample(const Field& f, const PeriodicGrid& target) {
  if (f.grid() == target) return f;
  if (f.grid().length() != target.length())
    throw std::invalid_argument("resample: grids have different periods");
  const auto src = to_spectrum(f);
  Spectrum dst(target);
  const int src_half = f.size() / 2;
  const int dst_half = target.size() / 2;
  const int common = std::min(src_half, dst_half);
  for (int m = 0; m < common; ++m) dst[m] = src[m];
  if (dst_half > src_half) {
    // The source Nyquist slot represents c cos(k x); split it over +-k.
    dst[src_half] = 0.5 * src[src_half].real();
  } else {
    // Truncation: only the cosine part of the new Nyquist mode survives.
    dst[dst_half] = 2.0 * src[dst_half].real();
  }
  return to_field(dst);
}

std::vector<double> padded_values(const Spectrum& s) {
  const int n = s.grid().size();
  const int half = n / 2;
  std::vector<Complex> fine(n + 1, Complex(0.0));
  for (int m = 0; m < half; ++m) fine[m] = s[m];
  fine[half] = 0.5 * s[half].real();
  std::vector<double> out(2 * n);
  inverse_transform(fine, out);
  return out;
}

Spectrum truncate_padded(std::span<const double> fine_values, const PeriodicGrid& grid) {
  const int n = grid.size();
  if (static_cast<int>(fine_values.size()) != 2 * n)
    throw std::invalid_argument("truncate_padded: expected values on the 2x grid");
  std::vector<Complex> fine(n + 1);
  forward_transform(fine_values, fine);
  Spectrum s(grid);
  for (int m = 0; m < n / 2; ++m) s[m] = fine[m];
  s[n / 2] = 2.0 * fine[n / 2].real();
  return s;
}

Field multiply(const Field& a, const Field& b) {
  require_same_grid(a, b);
  return pointwise_dealiased([](double x, double y) { return x * y; }, a, b);
}

double exp_moment(double lambda, double d, int j) {
  if (j < 0 || j > 2) throw std::invalid_argument("exp_moment: order must be 0, 1 or 2");
  if (d == 0.0) return 0.0;
  const double x = lambda * d;
  // I_j(x) = integral_0^1 exp(-x u) u^j du
  double ij = 0.0;
  if (std::abs(x) <= 2.0) {
    double term = 1.0;  // (-x)^m / m!
    for (int m = 0; m < 60; ++m) {
      const double add = term / (m + j + 1);
      ij += add;
      if (std::abs(add) < 1e-18 * std::abs(ij) && m > 3) break;
      term *= -x / (m + 1);
    }
  } else {
    const double ex = std::exp(-x);
    double i0 = -std::expm1(-x) / x;
    ij = i0;
    for (int q = 1; q <= j; ++q) {
      ij = (q * i0 - ex) / x;
      i0 = ij;
    }
  }
  return std::pow(d, j + 1) * ij;
}

double phi1(double z) {
  if (std::abs(z) < 1e-3) return 1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0;
  return -std::expm1(-z) / z;
}

double phi2(double z) {
  if (std::abs(z) < 0.5) {
    // sum_m (-z)^m / (m + 2)!
    double term = 0.5, sum = 0.0;
    for (int m = 0; m < 20; ++m) {
      sum += term;
      term *= -z / (m + 3);
    }
    return sum;
  }
  return (z + std::expm1(-z)) / (z * z);
}

}  // namespace muskat
