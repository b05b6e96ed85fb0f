#include <benchmark/benchmark.h>

#include "ibm/drift/drift.hpp"
#include "ibm/dynamics/integrator.hpp"
#include "ibm/pointfields/dpp.hpp"
#include "ibm/pointfields/ginibre.hpp"

namespace {

using namespace ibm;

Configuration sine_sample(double half_width) {
  return DppSampler(ModelSpec::sine(2), Interval{-half_width, half_width}).sample(7);
}

void BM_DriftSineTruncated(benchmark::State& state) {
  const Configuration c = sine_sample(static_cast<double>(state.range(0)));
  DriftSpec spec;
  spec.radius = 16.0;
  const DriftField f(ModelSpec::sine(2), spec);
  for (auto _ : state) {
    const auto snap = f.prepare(c.points());
    Point total(0.0);
    for (std::size_t i = 0; i < c.size(); ++i) total += f.at(snap, i);
    benchmark::DoNotOptimize(total);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.size()));
}
BENCHMARK(BM_DriftSineTruncated)->Arg(20)->Arg(80);

void BM_DriftSineCutoff(benchmark::State& state) {
  const Configuration c = sine_sample(40.0);
  DriftSpec spec;
  spec.mode = DriftMode::kCutoff;
  spec.cutoff.r = 8.0;
  spec.cutoff.s = 12.0;
  spec.cutoff.p = 4.0;
  spec.cutoff.a = ShellBounds::for_level(0, 1.0, 1);
  const DriftField f(ModelSpec::sine(2), spec);
  for (auto _ : state) {
    const auto snap = f.prepare(c.points());
    Point total(0.0);
    for (std::size_t i = 0; i < c.size(); ++i) total += f.at(snap, i);
    benchmark::DoNotOptimize(total);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.size()));
}
BENCHMARK(BM_DriftSineCutoff);

void BM_DriftGinibre(benchmark::State& state) {
  const Configuration c = sample_ginibre(800, 20.0, 3);
  DriftSpec spec;
  spec.radius = static_cast<double>(state.range(0));
  const DriftField f(ModelSpec::ginibre(), spec);
  for (auto _ : state) {
    const auto snap = f.prepare(c.points());
    Point total(0.0, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) total += f.at(snap, i);
    benchmark::DoNotOptimize(total);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.size()));
}
BENCHMARK(BM_DriftGinibre)->Arg(4)->Arg(16);

void BM_LowerSchemeStep(benchmark::State& state) {
  const ModelSpec model = ModelSpec::sine(2);
  const Configuration init = sine_sample(40.0);
  SchemeParams p;
  p.R = 32.0;
  p.dt = 1e-3;
  p.t_end = 1.0;
  p.workers = 1;
  const Integrator integ(model, p, 11);
  SimState s = integ.init(init);
  PathRecord rec = integ.start(s);
  for (auto _ : state) {
    integ.step(s, rec);
    rec.frames.resize(1);
  }
}
BENCHMARK(BM_LowerSchemeStep);

}  // namespace

BENCHMARK_MAIN();
