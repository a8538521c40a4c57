#include <benchmark/benchmark.h>

#include <cmath>

#include "frechet/continuation.hpp"
#include "frechet/contraction.hpp"
#include "frechet/ode.hpp"
#include "frechet/operator.hpp"

using namespace frechet;

namespace {

Point shift_tanh(const Point& x) {
  Point y(x.size());
  for (std::size_t i = 1; i < x.size(); ++i) y[i] = std::tanh(x[i - 1]);
  return y;
}

Point random_point(std::size_t n, Rng& rng) {
  Point p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = rng.uniform(-2.0, 2.0);
  return p;
}

void BM_MetricNorm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const GradedSpace s = GradedSpace::geometric(n, 0.5);
  Rng rng(1);
  const Point x = random_point(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(s.norm(x));
}
BENCHMARK(BM_MetricNorm)->Arg(16)->Arg(64)->Arg(256);

void BM_SampledShiftNorm(benchmark::State& state) {
  const GradedSpace s = GradedSpace::geometric(static_cast<std::size_t>(state.range(0)), 0.5);
  const LinearOperator op = LinearOperator::shift(s);
  Rng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(operator_gauge_norm(op, SamplingBudget{64, 49, 1e-6, 1e6}, rng).value);
}
BENCHMARK(BM_SampledShiftNorm)->Arg(16)->Arg(64);

void BM_FixedPoint(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const GradedSpace s = GradedSpace::geometric(n, 0.5);
  Rng rng(3);
  const Point c = random_point(n, rng);
  const ContractionSpec spec{s, Map{[c](const Point& x) { return c + shift_tanh(x); }, {}}, Ball{}, 0.5};
  FixedPointOptions o;
  o.tol = 1e-14;
  o.keep_iterates = false;
  for (auto _ : state) benchmark::DoNotOptimize(fixed_point(spec, Point(n), o).iterations);
}
BENCHMARK(BM_FixedPoint)->Arg(16)->Arg(64);

void BM_OdeSolve(benchmark::State& state) {
  const std::size_t n = 12;
  const GradedSpace s = GradedSpace::geometric(n, 0.5);
  OdeRhs f;
  f.eval = [](double, const Point& x, const Point& p) { return shift_tanh(x) + p[0] * Point::basis(x.size(), 0); };
  const OdeProblem pr{s, f, 0.0, 1.0, Ball{}, 0.5, static_cast<std::size_t>(state.range(0))};
  Rng rng(4);
  const Point x1 = random_point(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(ode_solve(pr, 0.0, x1, Point{0.7}, {1.0}).states);
}
BENCHMARK(BM_OdeSolve)->Arg(128)->Arg(512);

void BM_GlobalInvert(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const GradedSpace s = GradedSpace::geometric(n, 0.5);
  const Map f{[](const Point& x) { return x - shift_tanh(x); }, {}};
  Rng rng(5);
  const Point z = random_point(n, rng);
  LiftOptions o;
  o.sigma = 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(global_invert(s, f, z, Point(n), 2.0, rng, o).endpoint);
}
BENCHMARK(BM_GlobalInvert)->Arg(8)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
