#include "liouville/torus_green.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace liouville;

static void BM_Green(benchmark::State& state) {
  const GreenEvaluator g(state.range(0) == 0 ? GreenMode::fourier : GreenMode::ewald);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  std::vector<TorusPoint> xs(256);
  for (auto& x : xs) x = TorusPoint(u(rng), u(rng));
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(g.green(xs[k % xs.size()], TorusPoint(0.0, 0.0)));
    ++k;
  }
  state.SetLabel(state.range(0) == 0 ? "fourier" : "ewald");
}
BENCHMARK(BM_Green)->Arg(0)->Arg(1);

static void BM_GreenGradient(benchmark::State& state) {
  const GreenEvaluator g;
  const TorusPoint x(0.3, 0.7), y(0.1, 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(g.grad1_green(x, y));
}
BENCHMARK(BM_GreenGradient);
