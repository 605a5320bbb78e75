#include "liouville/leading_terms.hpp"
#include "liouville/mass_map.hpp"
#include "liouville/radial_solver.hpp"

#include <benchmark/benchmark.h>

using namespace liouville;

static void BM_ScalarGlobalSolve(benchmark::State& state) {
  const InteractionMatrix a(Matrix::Constant(1, 1, 1.0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_global(a, HeightVector{Vector::Zero(1)}));
}
BENCHMARK(BM_ScalarGlobalSolve)->Unit(benchmark::kMillisecond);

static void BM_SystemGlobalSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Matrix m = Matrix::Ones(n, n);
  m.diagonal().setConstant(0.5);
  const InteractionMatrix a(m);
  Vector alpha = Vector::LinSpaced(n, 0.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_global(a, HeightVector{alpha}));
}
BENCHMARK(BM_SystemGlobalSolve)->Arg(2)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_MassMapJacobian(benchmark::State& state) {
  Matrix m(3, 3);
  m << 0.5, 1, 1, 1, 0.5, 1, 1, 1, 0.5;
  const InteractionMatrix a(m);
  const Vector ah = (Vector(2) << 0.5, 1.0).finished();
  for (auto _ : state) benchmark::DoNotOptimize(jacobian(a, ah));
}
BENCHMARK(BM_MassMapJacobian)->Unit(benchmark::kMillisecond);

static void BM_LeadingTerm(benchmark::State& state) {
  Matrix m(2, 2);
  m << 1, 2, 2, 1;
  const InteractionMatrix a(m);
  const auto s = solve_global(a, HeightVector{(Vector(2) << 0, 0.5).finished()});
  BlowupConfiguration cfg{{TorusPoint(0, 0)}, s.m,
                          {WeightFunction(TrigPolynomial{1.0, {{1, 0, 0.3, 0.0}}}, false), WeightFunction::constant(1.0)}};
  const GreenEvaluator g;
  for (auto _ : state) benchmark::DoNotOptimize(d_total(cfg, s, g));
}
BENCHMARK(BM_LeadingTerm)->Unit(benchmark::kMillisecond);
