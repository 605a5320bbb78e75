#include "liouville/meanfield_pde.hpp"

#include <benchmark/benchmark.h>

#include <numbers>

using namespace liouville;

static void BM_GridLaplacian(benchmark::State& state) {
  TorusGrid g(static_cast<int>(state.range(0)));
  const Field u = g.sample([](const TorusPoint& x) { return std::sin(6.0 * x[0]) * std::cos(2 * std::numbers::pi * x[1]); });
  for (auto _ : state) benchmark::DoNotOptimize(g.laplacian(u));
}
BENCHMARK(BM_GridLaplacian)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMicrosecond);

static void BM_NewtonSmallData(benchmark::State& state) {
  const InteractionMatrix a(Matrix::Constant(1, 1, 1.0));
  MeanFieldSystem sys(a, {WeightFunction(TrigPolynomial{1.0, {{1, 0, 0.5, 0.0}, {0, 1, 0.5, 0.0}}}, false)},
                      static_cast<int>(state.range(0)));
  const Vector rho = Vector::Constant(1, 6 * std::numbers::pi);
  for (auto _ : state) benchmark::DoNotOptimize(sys.newton_solve(sys.zero_state(), rho));
}
BENCHMARK(BM_NewtonSmallData)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
