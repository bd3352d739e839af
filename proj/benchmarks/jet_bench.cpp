#include <benchmark/benchmark.h>

#include "nhcurv/catalog.hpp"
#include "nhcurv/expr.hpp"
#include "nhcurv/jet.hpp"

namespace {

using namespace nhcurv;

void BM_JetProduct(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  const Point p{0.1, 0.2, 0.3, 0.4, 0.5};
  JetSpace space(p, order);
  const Jet a = sin(space.variable(0)) + space.variable(4);
  const Jet b = cos(space.variable(3)) * space.variable(1);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_JetProduct)->DenseRange(1, 4);

void BM_JetReciprocal(benchmark::State& state) {
  const Point p{0.1, 0.2, 0.3, 0.4, 0.5};
  JetSpace space(p, static_cast<int>(state.range(0)));
  const Jet a = 2.0 + sin(space.variable(0)) * space.variable(4);
  for (auto _ : state) benchmark::DoNotOptimize(1.0 / a);
}
BENCHMARK(BM_JetReciprocal)->DenseRange(1, 4);

// Ball frame row 4 is the densest catalog expression.
void BM_EvalFrameEntry(benchmark::State& state) {
  const auto sys = load_system("ball-sphere");
  const auto& e = sys.frame[3][1];
  const auto params = sys.param_values();
  const Point q{0.3, 0.5, 1.1, 0.2, 1.0};
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(expr::eval_jet(e, q, params, order));
}
BENCHMARK(BM_EvalFrameEntry)->DenseRange(0, 4);

}  // namespace
