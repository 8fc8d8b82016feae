#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "muskat/littlewood_paley.hpp"
#include "muskat/paracalc.hpp"

using namespace muskat;

namespace {

const PeriodicGrid kGrid(128, 2.0 * std::numbers::pi);

Field random_smooth(const PeriodicGrid& g, unsigned seed, int modes = 12) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist;
  std::vector<std::pair<double, double>> c(modes);
  for (auto& [a, b] : c) a = dist(rng), b = dist(rng);
  return Field::from_function(g, [&](double x) {
    double v = 0.0;
    for (int k = 0; k < modes; ++k) v += (c[k].first * std::cos(k * x) + c[k].second * std::sin(k * x)) / (1.0 + k * k);
    return v;
  });
}

Field constant(double c) { return Field::from_function(kGrid, [&](double) { return c; }); }

double slope(double e1, double r1, double e2, double r2) { return std::log(r1 / r2) / std::log(e1 / e2); }

}  // namespace

TEST(Paraproduct, UnitCoefficientDropsOnlyTheMean) {
  const Field u = random_smooth(kGrid, 1) + constant(0.7);
  EXPECT_LT(sup_norm(paraproduct(constant(1.0), u) - (u - constant(mean(u)))), 1e-13);
}

TEST(Paraproduct, ConstantHighFactorGivesZero) {
  EXPECT_LT(sup_norm(paraproduct(random_smooth(kGrid, 2), constant(3.0))), 1e-14);
}

TEST(Paraproduct, BonyDecompositionIsExact) {
  for (unsigned seed : {3u, 4u, 5u}) {
    const Field a = random_smooth(kGrid, seed, 40);
    const Field u = random_smooth(kGrid, seed + 100, 40);
    const Field sum = paraproduct(a, u) + paraproduct(u, a) + bony_remainder(a, u);
    EXPECT_LT(sup_norm(sum - multiply(a, u)), 1e-12 * sup_norm(multiply(a, u)));
  }
}

TEST(Paraproduct, BilinearToRoundoff) {
  const Field a = random_smooth(kGrid, 6), b = random_smooth(kGrid, 7);
  const Field u = random_smooth(kGrid, 8), v = random_smooth(kGrid, 9);
  EXPECT_LT(sup_norm(paraproduct(a, 2.0 * u - v) - (2.0 * paraproduct(a, u) - paraproduct(a, v))), 1e-13);
  EXPECT_LT(sup_norm(paraproduct(a + 3.0 * b, u) - (paraproduct(a, u) + 3.0 * paraproduct(b, u))), 1e-13);
}

TEST(Paraproduct, OutputStaysNearTheHighBlock) {
  const DyadicPartition lp(kGrid);
  const Field a = random_smooth(kGrid, 10, 64);
  for (int j = 2; j < lp.block_count(); ++j) {
    const double k = std::ldexp(1.0, j);
    const Field u = Field::from_function(kGrid, [&](double x) { return std::cos(k * x); });
    const Field out = paraproduct(a, u);
    for (int b = 0; b < lp.block_count(); ++b) {
      if (std::abs(b - j) <= 1) continue;
      EXPECT_LT(sup_norm(lp.project(out, b)), 1e-13) << "high block " << j << ", output block " << b;
    }
  }
}

TEST(Paraproduct, BoundedOnSingleModesUniformlyInFrequency) {
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const Field a = Field::from_function(kGrid, [&](double) { return unif(rng); });
  double lo = 1e300, hi = 0.0;
  for (int k = 4; k <= kGrid.size() / 4; k *= 2) {
    const Field u = Field::from_function(kGrid, [&](double x) { return std::sin(k * x); });
    const double ratio = sobolev_norm(paraproduct(a, u), 0.0) / (sup_norm(a) * sobolev_norm(u, 0.0));
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  EXPECT_LT(hi, 2.0);
  EXPECT_GT(lo, 0.0);
}

TEST(OrderedSymbol, RejectsInvalidTerms) {
  const Field one = constant(1.0);
  EXPECT_THROW(OrderedSymbol({{3, one, SymbolUnit::Power}}), std::invalid_argument);
  EXPECT_THROW(OrderedSymbol({{2, one, SymbolUnit::ImaginaryPower}}), std::invalid_argument);
  EXPECT_THROW(OrderedSymbol({{6, one, SymbolUnit::Power}}), std::invalid_argument);
  EXPECT_THROW(OrderedSymbol({{2, one, SymbolUnit::Power}, {2, one, SymbolUnit::Power}}), std::invalid_argument);
  const PeriodicGrid other(64, kGrid.length());
  EXPECT_THROW(OrderedSymbol({{2, one, SymbolUnit::Power}, {4, Field(other), SymbolUnit::Power}}),
               std::invalid_argument);
  EXPECT_NO_THROW(OrderedSymbol({{5, one, SymbolUnit::AbsPower}, {4, one, SymbolUnit::Power}}));
}

TEST(ParaApply, ConstantFourthOrderSymbolIsTheFourthDerivative) {
  const Field u = random_smooth(kGrid, 13) + constant(2.0);
  const OrderedSymbol sym({{4, constant(1.0), SymbolUnit::Power}});
  const Field d4 = derivative(u, 4);
  EXPECT_LT(sup_norm(para_apply(sym, u) - d4), 1e-12 * sup_norm(d4));
}

TEST(ParaApply, FlatElasticSymbolOnCos8x) {
  const OrderedSymbol sym({{4, constant(1.0), SymbolUnit::Power}});
  const Field u = Field::from_function(kGrid, [](double x) { return std::cos(8 * x); });
  EXPECT_LT(sup_norm(para_apply(sym, u) - 4096.0 * u), 1e-11 * 4096.0);
}

TEST(ParaApply, ImaginaryUnitIsADerivative) {
  const Field u = random_smooth(kGrid, 14);
  EXPECT_LT(sup_norm(apply_unit(u, 1, SymbolUnit::ImaginaryPower) - derivative(u, 1)), 1e-12);
  EXPECT_LT(sup_norm(apply_unit(u, 3, SymbolUnit::ImaginaryPower) + derivative(u, 3)), 1e-11);
  EXPECT_LT(sup_norm(apply_unit(u, 2, SymbolUnit::Power) + derivative(u, 2)), 1e-11);
}

TEST(ParaApply, LinearInTheField) {
  const OrderedSymbol sym({{4, random_smooth(kGrid, 15), SymbolUnit::Power},
                           {1, random_smooth(kGrid, 16), SymbolUnit::ImaginaryPower}});
  const Field u = random_smooth(kGrid, 17), v = random_smooth(kGrid, 18);
  const Field lhs = para_apply(sym, u + v);
  EXPECT_LT(sup_norm(lhs - para_apply(sym, u) - para_apply(sym, v)), 1e-11 * sup_norm(lhs));
}

TEST(ParalinRemainder, IdentityLeavesTheMean) {
  const Field u = random_smooth(kGrid, 19) + constant(0.4);
  const Field r = paralin_remainder([](double x) { return x; }, [](double) { return 1.0; }, u);
  EXPECT_LT(sup_norm(r - constant(mean(u))), 1e-13);
}

TEST(ParalinRemainder, VanishesAtZero) {
  auto F = [](double x) { return std::pow(1.0 + x * x, -1.5); };
  auto dF = [](double x) { return -3.0 * x * std::pow(1.0 + x * x, -2.5); };
  EXPECT_EQ(sup_norm(paralin_remainder(F, dF, Field(kGrid))), 0.0);
}

TEST(ParalinRemainder, QuadraticMapHasSlopeTwo) {
  std::vector<double> eps{1e-1, 1e-2, 1e-3}, rem;
  for (double e : eps) {
    const Field u = Field::from_function(kGrid, [&](double x) { return e * std::cos(3 * x); });
    rem.push_back(sup_norm(paralin_remainder([](double x) { return x * x; }, [](double x) { return 2 * x; }, u)));
  }
  for (std::size_t i = 1; i < eps.size(); ++i) EXPECT_NEAR(slope(eps[i - 1], rem[i - 1], eps[i], rem[i]), 2.0, 0.1);
}

TEST(ParalinRemainder, ElasticNonlinearitiesAreAtLeastQuadratic) {
  for (double p : {-0.5, -1.5, -2.5, -3.5}) {
    auto F = [p](double x) { return std::pow(1.0 + x * x, p); };
    auto dF = [p](double x) { return 2.0 * p * x * std::pow(1.0 + x * x, p - 1.0); };
    std::vector<double> eps{1e-1, 1e-2, 1e-3}, rem;
    for (double e : eps) {
      const Field u = Field::from_function(kGrid, [&](double x) { return e * std::sin(3 * x) + e * std::cos(7 * x); });
      rem.push_back(sobolev_norm(paralin_remainder(F, dF, u), 0.0));
    }
    for (std::size_t i = 1; i < eps.size(); ++i)
      EXPECT_GE(slope(eps[i - 1], rem[i - 1], eps[i], rem[i]), 2.0 - 0.05) << "power " << p;
  }
}
