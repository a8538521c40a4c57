#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "frechet/error.hpp"
#include "frechet/inverse.hpp"
#include "frechet/oracles.hpp"

using namespace frechet;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Point shifted_tanh(const Point& x, double coef) {
  Point y(x.size());
  for (std::size_t i = 1; i < x.size(); ++i) y[i] = coef * std::tanh(x[i - 1]);
  return y;
}

Map id_minus_shift_tanh(double coef) {
  Map m;
  m.eval = [coef](const Point& x) { return x - shifted_tanh(x, coef); };
  m.jvp = [coef](const Point& x, const Point& v) {
    Point w = v;
    for (std::size_t i = 1; i < x.size(); ++i) w[i] -= coef * v[i - 1] / std::pow(std::cosh(x[i - 1]), 2);
    return w;
  };
  return m;
}

Point random_point(std::size_t n, double lo, double hi, Rng& rng) {
  Point p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = rng.uniform(lo, hi);
  return p;
}

InverseChart tanh_chart(const GradedSpace& s, Rng& rng) {
  const LinearOperator id = LinearOperator::identity(s);
  ChartOptions co;
  co.declared_sigma = 0.5;
  co.tol = 1e-14;
  return build_chart(s, id_minus_shift_tanh(1.0), id, id, Point(s.dim()), kInf, rng, co);
}

}  // namespace

TEST(Chart, ConstantsFromDeclaredSigma) {
  Rng rng(1);
  const GradedSpace s = GradedSpace::geometric(8, 0.5);
  const InverseChart c = tanh_chart(s, rng);
  EXPECT_TRUE(c.certified);
  EXPECT_DOUBLE_EQ(c.sigma, 0.5);
  EXPECT_DOUBLE_EQ(c.lower, 0.5);
  EXPECT_DOUBLE_EQ(c.upper, 1.5);
  EXPECT_DOUBLE_EQ(c.contraction(), 0.5);
  EXPECT_DOUBLE_EQ(c.inverse_lipschitz(), 2.0);
}

TEST(Chart, RejectsNonContractingRemainder) {
  Rng rng(2);
  const GradedSpace s = GradedSpace::geometric(4, 0.5);
  const LinearOperator id = LinearOperator::identity(s);
  ChartOptions co;
  co.declared_sigma = 1.0;
  try {
    build_chart(s, id_minus_shift_tanh(1.0), id, id, Point(4), kInf, rng, co);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kChartInvalid);
  }
}

TEST(Chart, InversionMatchesForwardSubstitution) {
  Rng rng(3);
  const GradedSpace s = GradedSpace::geometric(10, 0.5);
  const InverseChart chart = tanh_chart(s, rng);
  for (int k = 0; k < 20; ++k) {
    const Point c = random_point(10, -4, 4, rng);
    const InversionResult r = chart_invert(chart, c);
    EXPECT_TRUE(r.guaranteed);
    EXPECT_LE(r.residual, 1e-13);
    EXPECT_LT((r.preimage - oracle::shift_tanh_preimage(c, 1.0)).max_abs(), 1e-12);
    EXPECT_LE(r.max_contraction_ratio, chart.contraction() + 1e-9);
  }
}

TEST(Chart, InverseIsLipschitz) {
  Rng rng(4);
  const GradedSpace s = GradedSpace::geometric(8, 0.5);
  const InverseChart chart = tanh_chart(s, rng);
  for (int k = 0; k < 50; ++k) {
    const Point z = random_point(8, -3, 3, rng);
    const Point w = z + random_point(8, -0.5, 0.5, rng);
    const Point u = chart_invert(chart, z).preimage;
    const Point v = chart_invert(chart, w).preimage;
    EXPECT_LE(s.distance(u, v), chart.inverse_lipschitz() * s.distance(z, w) + 1e-12);
  }
}

TEST(Chart, EscapingTheBallIsAViolation) {
  Rng rng(5);
  const GradedSpace s = GradedSpace::geometric(4, 0.5);
  const LinearOperator id = LinearOperator::identity(s);
  ChartOptions co;
  co.declared_sigma = 0.5;
  const InverseChart chart = build_chart(s, id_minus_shift_tanh(1.0), id, id, Point(4), 0.05, rng, co);
  try {
    chart_invert(chart, Point::filled(4, 50.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kContractViolation);
  }
}

TEST(BallImage, InclusionsHoldAndInflatedConstantsAreRefuted) {
  Rng rng(6);
  const GradedSpace s = GradedSpace::geometric(6, 0.5);
  const InverseChart chart = tanh_chart(s, rng);
  const Point y = random_point(6, -1, 1, rng);
  for (double radius : {0.1, 0.3}) {
    const BallImageReport b = ball_image_bounds(chart, y, radius, 100, rng);
    EXPECT_TRUE(b.ok()) << b.witness;
  }
  const BallImageReport bad = ball_image_bounds(chart, y, 0.1, 100, rng, 1.05 * chart.upper, 0.95 * chart.lower);
  EXPECT_GT(bad.inner_failures, 0u);
  EXPECT_GT(bad.outer_failures, 0u);
}

TEST(Implicit, SolvesAlongGrid) {
  const GradedSpace s = GradedSpace::geometric(8, 0.5);
  const Point u{1, -1, 0.5, 0, 2, 0, -0.5, 1};
  ParamMap f;
  f.eval = [u](const Point& p, const Point& x) { return x - shifted_tanh(x, 1.0) - p[0] * u; };
  const Point p0{0.0};
  const Point y0(8);
  const Point z0 = f(p0, y0);
  std::vector<Point> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(Point{-1.0 + 0.2 * i});
  ImplicitOptions o;
  o.sigma = 0.5;
  o.tol = 1e-13;
  const ImplicitSolution sol = implicit_solve(s, f, p0, y0, z0, grid, o);
  EXPECT_EQ(sol.excluded(), 0u);
  EXPECT_LE(sol.max_residual(), 1e-12);
  for (const ImplicitRow& row : sol.rows) {
    EXPECT_LT((row.lambda - oracle::shift_tanh_preimage(z0 + row.parameter[0] * u, 1.0)).max_abs(), 1e-11);
  }
}

TEST(Implicit, RequiresBasePointOnLevelSet) {
  const GradedSpace s = GradedSpace::geometric(3, 0.5);
  ParamMap f;
  f.eval = [](const Point&, const Point& x) { return x; };
  EXPECT_THROW(implicit_solve(s, f, Point{0.0}, Point(3), Point{1, 0, 0}, {Point{0.0}}), Error);
}

TEST(Precondition, MismatchedPairsRejected) {
  const GradedSpace s = GradedSpace::geometric(3, 0.5);
  Preconditioner pre = Preconditioner::identity(s);
  pre.a = LinearOperator::diagonal(s, {2, 2, 2});
  ParamMap f;
  f.eval = [](const Point&, const Point& x) { return x; };
  EXPECT_THROW(precondition_transform(s, f, pre), Error);
  pre.a_inv = LinearOperator::diagonal(s, {0.5, 0.5, 0.5});
  EXPECT_NO_THROW(precondition_transform(s, f, pre));
}

TEST(Precondition, TransformRoundTrips) {
  const GradedSpace s = GradedSpace::geometric(3, 0.5);
  Preconditioner pre = Preconditioner::identity(s);
  pre.a = LinearOperator::diagonal(s, {2, 4, 8});
  pre.a_inv = LinearOperator::diagonal(s, {0.5, 0.25, 0.125});
  pre.t = LinearOperator::diagonal(s, {1, 3, 1});
  pre.t_inv = LinearOperator::diagonal(s, {1, 1.0 / 3.0, 1});
  ParamMap f;
  f.eval = [&pre](const Point&, const Point& x) { return pre.a.apply(x); };
  const TransformedMap tm = precondition_transform(s, f, pre);
  const Point x{0.3, -1.2, 2.0};
  EXPECT_LT((tm.to_original(tm.from_original(x)) - x).max_abs(), 1e-15);
  // h(p, y) = T^-1 A^-1 A T y = y
  const Point y{1, 2, 3};
  EXPECT_LT((tm.h(Point{0.0}, y) - y).max_abs(), 1e-14);
  EXPECT_LT((tm.transform_target(f(Point{0.0}, x)) - tm.from_original(x)).max_abs(), 1e-14);
}
