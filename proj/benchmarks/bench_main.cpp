#include <benchmark/benchmark.h>

#include <cmath>

#include "interp_lab/kfun.hpp"
#include "interp_lab/lorentz.hpp"
#include "interp_lab/lp.hpp"
#include "interp_lab/rectangle.hpp"
#include "interp_lab_cli/generate.hpp"

namespace {

using namespace interp_lab;

KernelMatrix kernel(std::size_t n, cli::WeightKind weights) {
  cli::GenSpec spec;
  spec.seed = 17;
  spec.shape = {n, n};
  spec.weights = weights;
  return cli::gen_random(spec);
}

void RectEnumerate(benchmark::State& state) {
  const auto f = kernel(static_cast<std::size_t>(state.range(0)), cli::WeightKind::kCounting);
  const double alphas[2] = {0.5, 0.75};
  const double scales[2] = {1.0, 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(rect_sup(f, 1.0, alphas, scales, {RectMethod::kEnumerate}).value);
}
BENCHMARK(RectEnumerate)->DenseRange(4, 10, 2);

void RectFastPath(benchmark::State& state) {
  const auto f = kernel(static_cast<std::size_t>(state.range(0)), cli::WeightKind::kCounting);
  const double alphas[2] = {0.5, 0.75};
  const double scales[2] = {1.0, 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(rect_sup(f, 1.0, alphas, scales, {RectMethod::kSortedFastPath}).value);
}
BENCHMARK(RectFastPath)->DenseRange(4, 10, 2)->Arg(16);

void BracketSorted(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto mu = FiniteMeasureSpace::counting(n);
  cli::Rng rng(3);
  std::vector<double> f(n);
  for (auto& v : f) v = rng.uniform();
  for (auto _ : state) benchmark::DoNotOptimize(bracket_norm_sorted(mu, f, Exponent(2.0)));
}
BENCHMARK(BracketSorted)->Arg(8)->Arg(16)->Arg(20);

void BracketEnumerated(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto mu = FiniteMeasureSpace::counting(n);
  cli::Rng rng(3);
  std::vector<double> f(n);
  for (auto& v : f) v = rng.uniform();
  for (auto _ : state) benchmark::DoNotOptimize(bracket_norm_enumerated(mu, f, Exponent(2.0)));
}
BENCHMARK(BracketEnumerated)->Arg(8)->Arg(16)->Arg(20);

void KExactCuttingPlane(benchmark::State& state) {
  const auto f = kernel(static_cast<std::size_t>(state.range(0)), cli::WeightKind::kDirichlet);
  for (auto _ : state) benchmark::DoNotOptimize(k_exact(f, 1.0, Exponent(2.0), Exponent(4.0)).total);
}
BENCHMARK(KExactCuttingPlane)->DenseRange(3, 7, 1)->Unit(benchmark::kMicrosecond);

void KExactFullConstraints(benchmark::State& state) {
  const auto f = kernel(static_cast<std::size_t>(state.range(0)), cli::WeightKind::kDirichlet);
  CuttingPlaneOptions options;
  options.materialize_all = true;
  for (auto _ : state) benchmark::DoNotOptimize(k_exact(f, 1.0, Exponent(2.0), Exponent(4.0), options).total);
}
BENCHMARK(KExactFullConstraints)->DenseRange(3, 7, 1)->Unit(benchmark::kMicrosecond);

// Dense random programs of growing size: min c.x over a box with >= rows.
void SimplexDense(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  cli::Rng rng(5);
  LPModel model;
  for (std::size_t j = 0; j < n; ++j) model.add_variable(rng.uniform(0.5, 1.5), 0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(n);
    double half = 0.0;
    for (auto& a : row) half += 0.5 * (a = rng.uniform());
    model.add_constraint(std::move(row), Relation::kGreaterEqual, 0.9 * half);
  }
  for (auto _ : state) benchmark::DoNotOptimize(solve_lp(model).objective);
}
BENCHMARK(SimplexDense)->RangeMultiplier(2)->Range(8, 64)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
