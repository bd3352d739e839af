#include <benchmark/benchmark.h>

#include "nhcurv/catalog.hpp"
#include "nhcurv/mechanics.hpp"
#include "nhcurv/wagner.hpp"

namespace {

using namespace nhcurv;

const char* const kIds[] = {"disc", "ball-sphere", "heisenberg"};

void BM_WagnerTensor(benchmark::State& state) {
  const auto sys = load_system(kIds[state.range(0)]);
  std::mt19937_64 rng(1);
  const Point q = sample_point(sys, rng);
  state.SetLabel(sys.id);
  for (auto _ : state) benchmark::DoNotOptimize(wagner_tensor(sys, q));
}
BENCHMARK(BM_WagnerTensor)->DenseRange(0, 2)->Unit(benchmark::kMicrosecond);

void BM_GeodesicRhs(benchmark::State& state) {
  const auto sys = load_system(kIds[state.range(0)]);
  std::mt19937_64 rng(1);
  State s{sample_point(sys, rng), std::vector<double>(sys.rank(), 0.3)};
  state.SetLabel(sys.id);
  for (auto _ : state) benchmark::DoNotOptimize(geodesic_rhs(sys, s));
}
BENCHMARK(BM_GeodesicRhs)->DenseRange(0, 2)->Unit(benchmark::kMicrosecond);

void BM_FlatnessScan(benchmark::State& state) {
  const auto sys = load_system("ball-sphere");
  const std::vector<double> ks{0.1, 1.0, 10.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(flatness_scan(sys, "k", ks, 10, 1, 1e-8, static_cast<unsigned>(state.range(0))));
  }
}
BENCHMARK(BM_FlatnessScan)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
BENCHMARK_MAIN();
