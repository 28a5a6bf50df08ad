// Serial reference vs OpenMP kernels. Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include <random>

#include "mwarp/analysis.hpp"
#include "mwarp/geometry.hpp"
#include "mwarp/model.hpp"
#include "mwarp/registration.hpp"
#include "mwarp/stats.hpp"
#include "mwarp/synth.hpp"

namespace {

using namespace mwarp;

Execution exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

const Dataset& copies() {
  static const Dataset d = [] {
    const auto m = make_manifold(ManifoldKind::sphere);
    std::mt19937_64 rng(1);
    return warped_copies(random_trajectory(m, 100, rng), 16, WarpKind::smooth, 0.6, 2);
  }();
  return d;
}

void BM_AlignPair(benchmark::State& state) {
  const auto m = make_manifold(ManifoldKind::sphere);
  std::mt19937_64 rng(3);
  const auto T = static_cast<std::size_t>(state.range(0));
  const Tsrvf h1 = compute_tsrvf(random_trajectory(m, T, rng), m->default_reference());
  const Tsrvf h2 = compute_tsrvf(random_trajectory(m, T, rng), m->default_reference());
  for (auto _ : state) benchmark::DoNotOptimize(align_pair(h1, h2));
}
BENCHMARK(BM_AlignPair)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_DistanceMatrix(benchmark::State& state) {
  const Dataset& d = copies();
  const Point c = d.manifold->default_reference();
  for (auto _ : state) benchmark::DoNotOptimize(distance_matrix(d.trajectories, Metric::ds, c, exec_of(state)));
}
BENCHMARK(BM_DistanceMatrix)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_KarcherMean(benchmark::State& state) {
  const Dataset& d = copies();
  KarcherOptions opts;
  opts.exec = exec_of(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(karcher_mean_trajectories(d.trajectories, d.manifold->default_reference(), opts));
  }
}
BENCHMARK(BM_KarcherMean)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_PointwiseSummary(benchmark::State& state) {
  const Dataset& d = copies();
  for (auto _ : state) benchmark::DoNotOptimize(pointwise_summary(d.trajectories, exec_of(state)));
}
BENCHMARK(BM_PointwiseSummary)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_BootstrapDraws(benchmark::State& state) {
  static const GaussianModel model = [] {
    const Dataset& d = copies();
    return fit_model(karcher_mean_trajectories(d.trajectories, d.manifold->default_reference()));
  }();
  for (auto _ : state) benchmark::DoNotOptimize(sample_log_densities(model, 2000, 7, exec_of(state)));
}
BENCHMARK(BM_BootstrapDraws)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
