#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>

#include "ibm/pointfields/dpp.hpp"
#include "ibm/pointfields/gibbs.hpp"
#include "ibm/pointfields/ginibre.hpp"
#include "ibm/pointfields/window.hpp"

namespace {

using namespace ibm;

void BM_DppSetupSine2(benchmark::State& state) {
  const double w = static_cast<double>(state.range(0));
  for (auto _ : state) {
    DppSampler dpp(ModelSpec::sine(2), Interval{-w, w});
    benchmark::DoNotOptimize(dpp.expected_count());
  }
}
BENCHMARK(BM_DppSetupSine2)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_DppSampleSine2(benchmark::State& state) {
  const double w = static_cast<double>(state.range(0));
  const DppSampler dpp(ModelSpec::sine(2), Interval{-w, w});
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(dpp.sample(seed++).size());
}
BENCHMARK(BM_DppSampleSine2)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_Ginibre(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(sample_ginibre(n, 0.8 * std::sqrt(n), seed++).size());
}
BENCHMARK(BM_Ginibre)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_GibbsBump(benchmark::State& state) {
  const auto pot = std::make_shared<BumpPotential>(2.0, 1.0);
  const ModelSpec model = ModelSpec::ruelle(pot, 1.0, 1.0, 2);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_gibbs(model, 4.0, Configuration(2), 40, seed++, {.sweeps = 100}).size());
  }
}
BENCHMARK(BM_GibbsBump)->Unit(benchmark::kMillisecond);

void BM_Poisson(benchmark::State& state) {
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(sample_poisson(1.0, Ball{20.0, 2}, seed++).size());
}
BENCHMARK(BM_Poisson);

}  // namespace

BENCHMARK_MAIN();
