#include <benchmark/benchmark.h>

#include "edgelap/band.hpp"
#include "edgelap/decay.hpp"
#include "edgelap/lap.hpp"
#include "edgelap/modes.hpp"
#include "edgelap/parallel.hpp"

using namespace edgelap;

namespace {

const BandTablePtr& band1() {
  static const BandTablePtr b = build_band_atlas(1, default_k_grid()).front();
  return b;
}

ModeFunction mode(const std::string& text) {
  const auto d = ModeDescriptor::parse(text);
  return ModeFunction::from_descriptor(d, mode_k_grid(d, band1().get()), band1());
}

void BM_FiberSolve(benchmark::State& state) {
  const int n_max = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_fiber(0.5, n_max, {}));
}
BENCHMARK(BM_FiberSolve)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_BandBuild(benchmark::State& state) {
  set_parallelism(static_cast<unsigned>(state.range(0)));
  const auto grid = default_k_grid();
  for (auto _ : state) benchmark::DoNotOptimize(BandTable::build(1, grid));
  set_parallelism(0);
}
BENCHMARK(BM_BandBuild)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_RnOffAxis(benchmark::State& state) {
  const auto g = mode("gauss:n=1,k0=0.5,w=0.5");
  const cplx z(2.0, state.range(0) == 0 ? 0.5 : 1e-4);
  for (auto _ : state) benchmark::DoNotOptimize(rn_value(g, g, *band1(), z));
}
BENCHMARK(BM_RnOffAxis)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_RnBoundary(benchmark::State& state) {
  const auto b = mode("bump:n=1,k0=1.1,w=0.8");
  for (auto _ : state) benchmark::DoNotOptimize(rn_boundary(b, b, *band1(), 1.2, Side::plus));
}
BENCHMARK(BM_RnBoundary)->Unit(benchmark::kMillisecond);

void BM_OverlapKernel(benchmark::State& state) {
  const auto g = mode("gauss:n=1,k0=0.5,w=0.5");
  const auto fam = FiberFamily::solve(1, g.k_grid(), common_discretization({g}, {}));
  for (auto _ : state) benchmark::DoNotOptimize(OverlapKernel::build(fam));
  state.counters["nodes"] = static_cast<double>(g.k_grid().size());
}
BENCHMARK(BM_OverlapKernel)->Unit(benchmark::kMillisecond);

void BM_TailMass(benchmark::State& state) {
  const auto b = mode("bump:n=1,k0=0.5,w=0.5");
  const auto fam = FiberFamily::solve(1, b.k_grid(), common_discretization({b}, {}));
  for (auto _ : state) benchmark::DoNotOptimize(tail_mass(b, fam, 5.0));
}
BENCHMARK(BM_TailMass)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
