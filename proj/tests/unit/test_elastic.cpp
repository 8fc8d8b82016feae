#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "muskat/elastic.hpp"

using namespace muskat;

namespace {

constexpr double kPi = std::numbers::pi;

Field wave(const PeriodicGrid& g, double amp, int k, bool sine = true) {
  return Field::from_function(g, [=](double x) { return amp * (sine ? std::sin(k * x) : std::cos(k * x)); });
}

double rel_h0(const Field& a, const Field& b) { return sobolev_norm(a - b, 0.0) / sobolev_norm(b, 0.0); }

Field random_profile(const PeriodicGrid& g, std::mt19937& rng, double h2_target) {
  std::normal_distribution<double> dist;
  std::vector<double> a(6), b(6);
  for (int k = 1; k < 6; ++k) a[k] = dist(rng) / (k * k * k), b[k] = dist(rng) / (k * k * k);
  Field f = Field::from_function(g, [&](double x) {
    double v = 0.0;
    for (int k = 1; k < 6; ++k) v += a[k] * std::cos(k * x) + b[k] * std::sin(k * x);
    return v;
  });
  return (h2_target / sobolev_norm(f, 2.0)) * f;
}

}  // namespace

TEST(Curvature, Examples) {
  const PeriodicGrid g(64, 2 * kPi);
  EXPECT_EQ(sup_norm(curvature(Field(g))), 0.0);
  EXPECT_EQ(sup_norm(curvature(Field::from_function(g, [](double) { return 3.0; }))), 0.0);
  const double eps = 1e-4;
  EXPECT_LT(sup_norm(curvature(wave(g, eps, 1, false)) + wave(g, eps, 1, false)), 1e-11);
}

TEST(ElasticE, FlatInterfaceGivesZero) {
  const PeriodicGrid g(64, 2 * kPi);
  EXPECT_EQ(sup_norm(elastic_E(Field(g), ElasticForm::Curvature)), 0.0);
  EXPECT_EQ(sup_norm(elastic_E(Field(g), ElasticForm::Divergence)), 0.0);
}

TEST(ElasticE, FormsAgreeSpectrally) {
  for (int n : {256, 512}) {
    const PeriodicGrid g(n, 2 * kPi);
    const Field eta = wave(g, 0.3, 1);
    EXPECT_LT(rel_h0(elastic_E(eta, ElasticForm::Divergence), elastic_E(eta, ElasticForm::Curvature)), 1e-8);
  }
  // Below the roundoff floor the mismatch falls with n.
  double prev = 1.0;
  for (int n : {8, 16, 32}) {
    const PeriodicGrid g(n, 2 * kPi);
    const Field eta = wave(g, 0.3, 1);
    const double err = rel_h0(elastic_E(eta, ElasticForm::Divergence), elastic_E(eta, ElasticForm::Curvature));
    EXPECT_LT(err, prev / 100.0) << "n=" << n;
    prev = err;
  }
}

TEST(ElasticE, SmallAmplitudeIsTheFourthDerivative) {
  const PeriodicGrid g(64, 2 * kPi);
  const Field eta = wave(g, 1e-4, 1, false);
  EXPECT_LT(rel_h0(elastic_E(eta), derivative(eta, 4)), 1e-7);
}

TEST(ElasticE, TranslationEquivariance) {
  const PeriodicGrid g(128, 2 * kPi);
  const int shift = 9;
  const double a = shift * g.spacing();
  auto profile = [](double x) { return 0.2 * std::sin(x) + 0.1 * std::cos(3 * x + 0.4); };
  const Field e0 = elastic_E(Field::from_function(g, profile));
  const Field e1 = elastic_E(Field::from_function(g, [&](double x) { return profile(x - a); }));
  double worst = 0.0;
  for (int j = 0; j < g.size(); ++j) worst = std::max(worst, std::abs(e1[(j + shift) % g.size()] - e0[j]));
  EXPECT_LT(worst, 1e-11 * sup_norm(e0));
}

TEST(ElasticE, OddProfileGivesOddResult) {
  const PeriodicGrid g(128, 2 * kPi);
  const Field e = elastic_E(wave(g, 0.3, 1));
  for (int j = 1; j < g.size(); ++j) EXPECT_NEAR(e[j], -e[g.size() - j], 1e-12);
}

TEST(ElasticE, ConstantShiftInvariance) {
  const PeriodicGrid g(128, 2 * kPi);
  const Field eta = wave(g, 0.2, 2) + wave(g, 0.05, 5, false);
  const Field shifted = eta + Field::from_function(g, [](double) { return 1.75; });
  const Field e = elastic_E(eta);
  EXPECT_LT(sup_norm(elastic_E(shifted) - e), 1e-12 * sup_norm(e));
}

TEST(SymbolEll, FlatInterfaceLeavesOnlyXiFour) {
  const PeriodicGrid g(64, 2 * kPi);
  for (double c : {0.0, -0.8}) {
    const auto sym = symbol_ell(Field::from_function(g, [&](double) { return c; }));
    ASSERT_EQ(sym.terms().size(), 1u);
    EXPECT_EQ(sym.terms()[0].power, 4);
    EXPECT_EQ(sym.terms()[0].unit, SymbolUnit::Power);
    EXPECT_LT(sup_norm(sym.terms()[0].coefficient - Field::from_function(g, [](double) { return 1.0; })), 1e-15);
  }
}

TEST(SymbolEll, CubicCoefficientIsMinusTwiceTheDerivativeOfQuartic) {
  const PeriodicGrid g(128, 2 * kPi);
  const auto sym = symbol_ell(wave(g, 0.25, 1) + wave(g, 0.1, 2, false));
  const Field c4 = sym.coefficient(4, SymbolUnit::Power);
  const Field c3 = sym.coefficient(3, SymbolUnit::ImaginaryPower);
  EXPECT_LT(sup_norm(c3 + 2.0 * derivative(c4, 1)), 1e-12);
  EXPECT_GT(sup_norm(sym.coefficient(2, SymbolUnit::Power)), 0.0);
  EXPECT_GT(sup_norm(sym.coefficient(1, SymbolUnit::ImaginaryPower)), 0.0);
}

TEST(ElasticSplit, PartsSumToTotal) {
  const PeriodicGrid g(128, 2 * kPi);
  const auto zero = elastic_split(Field(g));
  EXPECT_EQ(sup_norm(zero.total), 0.0);
  EXPECT_EQ(sup_norm(zero.principal), 0.0);
  EXPECT_EQ(sup_norm(zero.remainder), 0.0);
  const auto s = elastic_split(wave(g, 0.2, 2));
  EXPECT_LT(sup_norm(s.principal + s.remainder - s.total), 1e-13 * sup_norm(s.total));
}

TEST(ElasticSplit, RemainderIsAtLeastQuadratic) {
  const PeriodicGrid g(128, 2 * kPi);
  const std::vector<double> eps{1e-1, 3e-2, 1e-2, 3e-3};
  std::vector<double> r;
  for (double e : eps) r.push_back(sobolev_norm(elastic_split(wave(g, e, 2)).remainder, 0.5) / e);
  for (std::size_t i = 1; i < eps.size(); ++i) {
    // Relative remainder drops at least linearly, i.e. the remainder itself at least quadratically.
    EXPECT_GE(std::log(r[i - 1] / r[i]) / std::log(eps[i - 1] / eps[i]), 1.0);
  }
}

TEST(ElasticSplit, PrincipalPartDeviatesBoundedlyFromFlatSymbol) {
  const PeriodicGrid g(128, 2 * kPi);
  const Field eta = wave(g, 0.05, 1);
  const auto sym = symbol_ell(eta);
  std::vector<double> c;
  for (int k : {4, 8, 16}) {
    const Field u = wave(g, 1.0, k, false);
    c.push_back(sobolev_norm(para_apply(sym, u) - derivative(u, 4), 0.0) / sobolev_norm(u, 4.0));
  }
  for (double v : c) {
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
  EXPECT_LT(*std::max_element(c.begin(), c.end()) / *std::min_element(c.begin(), c.end()), 4.0);
}

TEST(Gateaux, FlatInterfaceIsTheFourthDerivative) {
  const PeriodicGrid g(64, 2 * kPi);
  const Field d = wave(g, 1.0, 3, false) + wave(g, 0.5, 2);
  const Field d4 = wave(g, 81.0, 3, false) + wave(g, 8.0, 2);
  EXPECT_LT(sup_norm(gateaux_dE(Field(g), d) - d4), 1e-12 * sup_norm(d4));
}

TEST(Gateaux, MatchesCentralDifferences) {
  const PeriodicGrid g(128, 2 * kPi);
  const double eps = 1e-4;
  auto check = [&](const Field& eta, const Field& d) {
    const Field fd = (0.5 / eps) * (elastic_E(eta + eps * d) - elastic_E(eta - eps * d));
    return rel_h0(fd, gateaux_dE(eta, d));
  };
  EXPECT_LT(check(wave(g, 0.2, 1), wave(g, 1.0, 3, false)), 1e-6);
  std::mt19937 rng(2024);
  for (int i = 0; i < 5; ++i) {
    const Field eta = random_profile(g, rng, 0.3);
    const Field d = random_profile(g, rng, 1.0);
    EXPECT_LT(check(eta, d), 1e-6) << "pair " << i;
  }
}

TEST(Gateaux, SecondOrderInStep) {
  const PeriodicGrid g(64, 2 * kPi);
  const Field eta = wave(g, 0.2, 1), d = wave(g, 1.0, 2, false);
  auto err = [&](double eps) {
    const Field fd = (0.5 / eps) * (elastic_E(eta + eps * d) - elastic_E(eta - eps * d));
    return rel_h0(fd, gateaux_dE(eta, d));
  };
  const double e1 = err(1e-2), e2 = err(5e-3);
  EXPECT_NEAR(std::log2(e1 / e2), 2.0, 0.1);
}

TEST(Gateaux, LinearInDirection) {
  const PeriodicGrid g(64, 2 * kPi);
  const Field eta = wave(g, 0.2, 1);
  const Field a = wave(g, 1.0, 2), b = wave(g, 1.0, 5, false);
  const Field lhs = gateaux_dE(eta, 2.0 * a - b);
  EXPECT_LT(sup_norm(lhs - 2.0 * gateaux_dE(eta, a) + gateaux_dE(eta, b)), 1e-10 * sup_norm(lhs));
}
