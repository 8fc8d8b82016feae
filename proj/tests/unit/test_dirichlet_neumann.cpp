#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "muskat/dirichlet_neumann.hpp"
#include "muskat/errors.hpp"

using namespace muskat;

namespace {

constexpr double kPi = std::numbers::pi;

Field wave(const PeriodicGrid& g, double amp, int k, bool sine = true) {
  return Field::from_function(g, [=](double x) { return amp * (sine ? std::sin(k * x) : std::cos(k * x)); });
}

double rel_h0(const Field& a, const Field& b) { return sobolev_norm(a - b, 0.0) / sobolev_norm(b, 0.0); }

// phi = e^{k y} cos(k x) is harmonic and decays downward, so with f its trace
// on y = eta the scaled normal derivative is phi_y - eta_x phi_x on y = eta.
struct ExactHarmonic {
  Field trace, normal;
};

ExactHarmonic decaying_mode(const Field& eta, int k) {
  const Field ex = derivative(eta, 1);
  Field f(eta.grid()), gn(eta.grid());
  for (int j = 0; j < eta.size(); ++j) {
    const double x = eta.grid().node(j), e = std::exp(k * eta[j]);
    f[j] = e * std::cos(k * x);
    gn[j] = k * e * std::cos(k * x) + ex[j] * k * e * std::sin(k * x);
  }
  return {f, gn};
}

// phi = cosh(k (y + h)) cos(k x) has zero normal derivative on y = -h.
ExactHarmonic strip_mode(const Field& eta, int k, double h) {
  const Field ex = derivative(eta, 1);
  Field f(eta.grid()), gn(eta.grid());
  for (int j = 0; j < eta.size(); ++j) {
    const double x = eta.grid().node(j), y = eta[j] + h;
    f[j] = std::cosh(k * y) * std::cos(k * x);
    gn[j] = k * std::sinh(k * y) * std::cos(k * x) + ex[j] * k * std::cosh(k * y) * std::sin(k * x);
  }
  return {f, gn};
}

}  // namespace

TEST(VerticalGrid, Shapes) {
  const auto geo = VerticalGrid::geometric(20.0, 16, 0.01);
  EXPECT_EQ(geo.size(), 33);
  EXPECT_EQ(geo.panels(), 16);
  EXPECT_NEAR(geo.depth(), 20.0, 1e-12);
  EXPECT_NEAR(geo.levels()[geo.size() - 1] - geo.levels()[geo.size() - 3], 0.01, 1e-12);
  const auto cos = VerticalGrid::cosine(1.5, 8);
  EXPECT_NEAR(cos.depth(), 1.5, 1e-14);
  EXPECT_DOUBLE_EQ(cos.levels().back(), 0.0);
  for (const auto* grid : {&geo, &cos}) {
    double sum = 0.0, cubic = 0.0;
    for (int i = 0; i < grid->size(); ++i) {
      const double z = grid->levels()[i];
      sum += grid->weights()[i];
      cubic += grid->weights()[i] * z * z * z;
    }
    const double d = grid->depth();
    EXPECT_NEAR(sum, d, 1e-12 * d);
    EXPECT_NEAR(cubic, -std::pow(d, 4) / 4, 1e-10 * std::pow(d, 4));
  }
}

TEST(DirichletNeumann, FlatInterfaceIsAbsD) {
  const PeriodicGrid g(64, 2 * kPi);
  const Field f = wave(g, 1.0, 3) + wave(g, 0.5, 7, false) + Field::from_function(g, [](double) { return 2.0; });
  const auto r = dn_fixed_point(Field(g), f, Geometry::infinite());
  EXPECT_TRUE(r.converged);
  EXPECT_LT(rel_h0(r.gf, 3.0 * wave(g, 1.0, 3) + 3.5 * wave(g, 1.0, 7, false)), 1e-12);
  EXPECT_LT(sup_norm(r.remainder), 1e-12);
}

TEST(DirichletNeumann, FlatStripIsTanh) {
  const PeriodicGrid g(64, 2 * kPi);
  for (double h : {0.3, 1.0, 2.5}) {
    for (int k : {1, 2, 5}) {
      const auto r = dn_fixed_point(Field(g), wave(g, 1.0, k, false), Geometry::strip(h));
      EXPECT_LT(rel_h0(r.gf, (k * std::tanh(h * k)) * wave(g, 1.0, k, false)), 1e-6) << "h=" << h << " k=" << k;
    }
  }
}

TEST(DirichletNeumann, ExactHarmonicInfiniteDepth) {
  const PeriodicGrid g(128, 2 * kPi);
  for (const Field& eta : {wave(g, 0.05, 1), wave(g, 0.1, 2, false), wave(g, 0.1, 1) + wave(g, 0.03, 3, false)}) {
    for (int k : {1, 2}) {
      const auto exact = decaying_mode(eta, k);
      const auto r = dn_fixed_point(eta, exact.trace);
      ASSERT_TRUE(r.converged);
      EXPECT_LT(rel_h0(r.gf, exact.normal), 1e-5) << "k=" << k;
    }
  }
}

TEST(DirichletNeumann, VerticalRefinement) {
  const PeriodicGrid g(128, 2 * kPi);
  const auto eta = wave(g, 0.1, 2, false);
  const auto exact = decaying_mode(eta, 1);
  DNConfig coarse, fine;
  fine.panels = 64;
  const double e1 = rel_h0(dn_fixed_point(eta, exact.trace, Geometry::infinite(), coarse).gf, exact.normal);
  const double e2 = rel_h0(dn_fixed_point(eta, exact.trace, Geometry::infinite(), fine).gf, exact.normal);
  EXPECT_GT(e1 / e2, 8.0);
}

TEST(DirichletNeumann, ExactHarmonicStrip) {
  const PeriodicGrid g(128, 2 * kPi);
  const double h = 1.0;
  for (const Field& eta : {wave(g, 0.05, 1), wave(g, 0.1, 2, false)}) {
    for (int k : {1, 3}) {
      const auto exact = strip_mode(eta, k, h);
      const auto r = dn_fixed_point(eta, exact.trace, Geometry::strip(h));
      ASSERT_TRUE(r.converged);
      EXPECT_LT(rel_h0(r.gf, exact.normal), 1e-6) << "k=" << k;
    }
  }
}

TEST(DirichletNeumann, AgreesWithFiniteDifferenceOracle) {
  const PeriodicGrid g(128, 2 * kPi);
  const auto eta = wave(g, 0.05, 1);
  const auto f = wave(g, 1.0, 1, false);
  const auto r = dn_fixed_point(eta, f);
  const auto fd = oracle_dn(eta, f, Geometry::infinite(), {128, 64, 1.0});
  EXPECT_LT(rel_h0(r.gf, fd), 1e-3);
}

TEST(DirichletNeumann, StructuralProperties) {
  const PeriodicGrid g(64, 2 * kPi);
  const auto eta = wave(g, 0.08, 1) + wave(g, 0.02, 2, false);
  const auto f1 = wave(g, 1.0, 1, false) + wave(g, 0.3, 4);
  const auto f2 = wave(g, 1.0, 2) + wave(g, 0.2, 3, false);
  const auto g1 = dn_fixed_point(eta, f1).gf, g2 = dn_fixed_point(eta, f2).gf;
  EXPECT_LT(std::abs(mean(g1)), 1e-14);
  const double a = inner_product(f1, g2), b = inner_product(f2, g1);
  const double scale = std::sqrt(inner_product(f1, f1) * inner_product(g2, g2));
  EXPECT_NEAR(a, b, 1e-6 * scale);
  EXPECT_GT(inner_product(f1, g1), 0.0);
  const auto sum = dn_fixed_point(eta, 2.0 * f1 - f2).gf;
  EXPECT_LT(rel_h0(sum, 2.0 * g1 - g2), 1e-9);
  // Vertical translation of an infinitely deep fluid changes nothing.
  const auto shifted = dn_fixed_point(eta + Field::from_function(g, [](double) { return 0.4; }), f1).gf;
  EXPECT_LT(rel_h0(shifted, g1), 1e-9);
}

TEST(DirichletNeumann, TranslationEquivariance) {
  const PeriodicGrid g(64, 2 * kPi);
  const int shift = 5;
  const auto eta = wave(g, 0.08, 1) + wave(g, 0.03, 3, false);
  const auto f = wave(g, 1.0, 2) + wave(g, 0.5, 1, false);
  Field eta_s(g), f_s(g);
  for (int j = 0; j < g.size(); ++j) {
    eta_s[j] = eta[(j + shift) % g.size()];
    f_s[j] = f[(j + shift) % g.size()];
  }
  const auto a = dn_fixed_point(eta, f).gf, b = dn_fixed_point(eta_s, f_s).gf;
  double err = 0.0;
  for (int j = 0; j < g.size(); ++j) err = std::max(err, std::abs(b[j] - a[(j + shift) % g.size()]));
  EXPECT_LT(err, 1e-10 * sup_norm(a));
}

TEST(DirichletNeumann, UpperPhase) {
  const PeriodicGrid g(64, 2 * kPi);
  const auto f = wave(g, 1.0, 2);
  const auto flat = dn_upper(Field(g), f);
  EXPECT_LT(rel_h0(flat.gf, -2.0 * f), 1e-12);
  EXPECT_LT(sup_norm(flat.remainder), 1e-12);
  // phi = e^{-y} cos x decays upward.
  const auto eta = wave(g, 0.05, 1, false);
  const Field ex = derivative(eta, 1);
  Field trace(g), normal(g);
  for (int j = 0; j < g.size(); ++j) {
    const double x = g.node(j), e = std::exp(-eta[j]);
    trace[j] = e * std::cos(x);
    normal[j] = -e * std::cos(x) + ex[j] * e * std::sin(x);
  }
  EXPECT_LT(rel_h0(dn_upper(eta, trace).gf, normal), 1e-6);
}

TEST(DirichletNeumann, ShapeDifference) {
  const PeriodicGrid g(64, 2 * kPi);
  const auto eta = wave(g, 0.05, 1);
  const auto f = wave(g, 1.0, 1, false);
  const auto same = dn_shape_difference(eta, eta, f);
  EXPECT_EQ(same.ratio, 0.0);
  const auto small = dn_shape_difference(eta, eta + wave(g, 1e-4, 2), f);
  const auto smaller = dn_shape_difference(eta, eta + wave(g, 1e-5, 2), f);
  EXPECT_GT(small.ratio, 0.0);
  EXPECT_NEAR(small.ratio, smaller.ratio, 0.01 * small.ratio);
}

TEST(DirichletNeumann, ResidualsAndReport) {
  const PeriodicGrid g(64, 2 * kPi);
  const auto r = dn_fixed_point(wave(g, 0.1, 2, false), wave(g, 1.0, 1));
  ASSERT_TRUE(r.converged);
  EXPECT_EQ(static_cast<int>(r.residuals.size()), r.iterations);
  EXPECT_LT(r.residuals.back(), 1e-10);
  EXPECT_LT(r.tail_bound, 1e-9);
  const auto j = r.report();
  EXPECT_EQ(j.at("iterations").get<int>(), r.iterations);
}

TEST(DirichletNeumann, Failures) {
  const PeriodicGrid g(64, 2 * kPi);
  const auto f = wave(g, 1.0, 1);
  try {
    dn_fixed_point(wave(g, 1.0, 3), f);
    FAIL() << "expected NotContracting";
  } catch (const SolverError& e) {
    EXPECT_EQ(e.kind(), SolverErrorKind::NotContracting);
    EXPECT_EQ(e.subsystem(), "dirichlet_neumann");
  }
  DNConfig strict;
  strict.min_jacobian = 1.5;
  try {
    dn_fixed_point(wave(g, 0.05, 1), f, Geometry::infinite(), strict);
    FAIL() << "expected DegenerateJacobian";
  } catch (const SolverError& e) {
    EXPECT_EQ(e.kind(), SolverErrorKind::DegenerateJacobian);
  }
  DNConfig short_run;
  short_run.max_iter = 2;
  const auto r = dn_fixed_point(wave(g, 0.1, 2, false), f, Geometry::infinite(), short_run);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 2);
  EXPECT_THROW(Geometry::strip(-1.0), std::invalid_argument);
}

TEST(DirichletNeumann, ExtensionStateCsv) {
  const PeriodicGrid g(16, 2 * kPi);
  ExtensionState state;
  dn_fixed_point(wave(g, 0.05, 1), wave(g, 1.0, 1, false), Geometry::strip(1.0), {}, &state);
  EXPECT_EQ(static_cast<int>(state.v.size()), state.zgrid.size());
  std::ostringstream out;
  state.write_csv(out);
  const auto text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "x,z,v");
  const auto lines = std::count(text.begin(), text.end(), '\n');
  EXPECT_EQ(lines, 1 + 16 * state.zgrid.size());
}

TEST(FiniteDifferenceOracle, SecondOrder) {
  const PeriodicGrid g(64, 2 * kPi);
  const auto eta = wave(g, 0.1, 1);
  const auto exact = decaying_mode(eta, 1);
  const double e1 = rel_h0(oracle_dn(eta, exact.trace, Geometry::infinite(), {64, 16, 1.0}), exact.normal);
  const double e2 = rel_h0(oracle_dn(eta, exact.trace, Geometry::infinite(), {128, 32, 1.0}), exact.normal);
  EXPECT_NEAR(std::log2(e1 / e2), 2.0, 0.3);
}
