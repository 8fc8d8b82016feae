#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "muskat/dirichlet_neumann.hpp"
#include "muskat/elastic.hpp"
#include "muskat/evolution.hpp"

using namespace muskat;

namespace {

Field profile(int n, double amp) {
  const PeriodicGrid g(n, 2 * std::numbers::pi);
  return Field::from_function(g, [=](double x) { return amp * (std::sin(x) + 0.3 * std::cos(3 * x)); });
}

void BM_Transform(benchmark::State& state) {
  const Field f = profile(static_cast<int>(state.range(0)), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(to_field(to_spectrum(f)));
}
BENCHMARK(BM_Transform)->RangeMultiplier(2)->Range(64, 1024);

void BM_ElasticE(benchmark::State& state) {
  const Field eta = profile(static_cast<int>(state.range(0)), 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(elastic_E(eta));
}
BENCHMARK(BM_ElasticE)->RangeMultiplier(2)->Range(64, 512);

void BM_DNFixedPoint(benchmark::State& state) {
  const Field eta = profile(static_cast<int>(state.range(0)), 0.05);
  const Field f = Field::from_function(eta.grid(), [](double x) { return std::cos(2 * x); });
  for (auto _ : state) benchmark::DoNotOptimize(dn_fixed_point(eta, f));
}
BENCHMARK(BM_DNFixedPoint)->RangeMultiplier(2)->Range(64, 256)->Unit(benchmark::kMillisecond);

void BM_EtdStep(benchmark::State& state) {
  const Field eta = profile(static_cast<int>(state.range(0)), 0.01);
  MuskatModel model(PhysicalParams{});
  for (auto _ : state) benchmark::DoNotOptimize(etd_step(eta, 1e-3, model));
}
BENCHMARK(BM_EtdStep)->RangeMultiplier(2)->Range(64, 256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
