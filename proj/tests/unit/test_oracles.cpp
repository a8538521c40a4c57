#include <gtest/gtest.h>

#include <cmath>

#include "frechet/error.hpp"
#include "frechet/oracles.hpp"

using namespace frechet;

TEST(Oracle, DenseSolveAndInverse) {
  DenseMatrix a(2, 2);
  a(0, 0) = 2;
  a(0, 1) = 1;
  a(1, 0) = 1;
  a(1, 1) = 3;
  const Point x = oracle::dense_solve(a, Point{3.0, 5.0});
  EXPECT_NEAR(x[0], 0.8, 1e-15);
  EXPECT_NEAR(x[1], 1.4, 1e-15);
  EXPECT_LT(oracle::multiply(a, oracle::dense_inverse(a)).max_abs_diff(DenseMatrix::identity(2)), 1e-15);
}

TEST(Oracle, NilpotentExponential) {
  DenseMatrix n(3, 3);
  n(1, 0) = 1;
  n(2, 1) = 1;
  const DenseMatrix e = oracle::nilpotent_exponential(n, 2.0);
  EXPECT_DOUBLE_EQ(e(2, 0), 2.0);  // t^2 / 2
  EXPECT_DOUBLE_EQ(e(1, 0), 2.0);
  EXPECT_DOUBLE_EQ(e(0, 0), 1.0);
  const DenseMatrix i = oracle::nilpotent_exponential_integral(n, 2.0);
  EXPECT_DOUBLE_EQ(i(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(i(2, 0), 8.0 / 6.0);
  DenseMatrix full(2, 2);
  full(0, 0) = 1;
  EXPECT_THROW(oracle::nilpotent_exponential(full, 1.0), Error);
}

TEST(Oracle, Rk4ExponentialDecay) {
  const auto rhs = [](double, const Point& x) { return -1.0 * x; };
  const std::vector<Point> y = oracle::rk4(rhs, 0.0, Point{1.0}, {0.5, 1.0});
  EXPECT_NEAR(y[1][0], std::exp(-1.0), 1e-13);
}

TEST(Oracle, ShiftTanhPreimage) {
  const Point c{0.3, -1.0, 2.0};
  const Point x = oracle::shift_tanh_preimage(c, 0.5);
  EXPECT_DOUBLE_EQ(x[0], 0.3);
  EXPECT_DOUBLE_EQ(x[1], -1.0 + 0.5 * std::tanh(0.3));
  EXPECT_DOUBLE_EQ(x[2], 2.0 + 0.5 * std::tanh(x[1]));
}

TEST(Oracle, DampedNewtonSolvesNonlinearSystem) {
  const auto f = [](const Point& x) { return Point{x[0] + 0.1 * x[1] * x[1], x[1] - std::sin(x[0])}; };
  const Point c{1.0, 0.5};
  const Point x = oracle::damped_newton(f, c, Point{0.0, 0.0});
  EXPECT_LT((f(x) - c).max_abs(), 1e-12);
}
