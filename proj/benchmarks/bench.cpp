#include <benchmark/benchmark.h>

#include "manispline/harness.hpp"

using namespace manispline;

namespace {

SplineProblem sphere_problem(int n_points, int max_degree) {
  SplineProblem pr;
  pr.manifold = Manifold::sphere2();
  pr.smoothness = 2.0;
  pr.truncation = Truncation::degree(max_degree);
  GaussianStream g(1);
  auto f = random_band_limited(pr.manifold, 8, g);
  for (const auto& p : farthest_point_sample(pr.manifold, n_points, 3).points) {
    pr.functionals.push_back(Functional::dirac(pr.manifold, p));
    pr.values.push_back(pr.functionals.back().apply_to_series(f));
  }
  return pr;
}

void BM_AssembleGramSphere(benchmark::State& state) {
  auto pr = sphere_problem(static_cast<int>(state.range(0)),
                           static_cast<int>(state.range(1)));
  for (auto _ : state) {
    auto rep = assemble_gram(pr);
    benchmark::DoNotOptimize(rep.matrix);
  }
}
BENCHMARK(BM_AssembleGramSphere)
    ->Args({16, 64})
    ->Args({16, 256})
    ->Args({64, 64})
    ->Args({64, 256});

void BM_SolveSphere(benchmark::State& state) {
  auto pr = sphere_problem(static_cast<int>(state.range(0)), 128);
  for (auto _ : state) {
    auto s = solve_spline(pr);
    benchmark::DoNotOptimize(s.alpha());
  }
}
BENCHMARK(BM_SolveSphere)->Arg(8)->Arg(24)->Arg(64);

void BM_EvaluateSphere(benchmark::State& state) {
  auto pr = sphere_problem(24, static_cast<int>(state.range(0)));
  auto s = solve_spline(pr);
  auto grid = fibonacci_sphere(128);
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(s.evaluate(grid[k++ % grid.size()]));
  }
}
BENCHMARK(BM_EvaluateSphere)->Arg(64)->Arg(256);

void BM_SolveCircleCirculant(benchmark::State& state) {
  // uniform circle grids take the circulant fast path
  SplineProblem pr;
  pr.manifold = Manifold::circle();
  pr.smoothness = 4.0;
  int n = static_cast<int>(state.range(0));
  pr.truncation = Truncation::degree(4 * n);
  for (const auto& p : uniform_circle(n).points) {
    pr.functionals.push_back(Functional::dirac(pr.manifold, p));
    pr.values.push_back(std::sin(3.0 * p.theta()));
  }
  for (auto _ : state) {
    auto s = solve_spline(pr);
    benchmark::DoNotOptimize(s.alpha());
  }
}
BENCHMARK(BM_SolveCircleCirculant)->Arg(32)->Arg(256);

void BM_BasisEvalSphere(benchmark::State& state) {
  Point p = Point::vec(0.48, -0.6, 0.64);
  int J = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto v = evaluate_basis_all(Manifold::sphere2(), J, p);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_BasisEvalSphere)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
