#include <gtest/gtest.h>

#include <cmath>

#include "frechet/error.hpp"
#include "frechet/metric.hpp"
#include "frechet/rational.hpp"

using namespace frechet;

namespace {

Point random_point(std::size_t dim, double lo, double hi, Rng& rng) {
  Point p(dim);
  for (std::size_t i = 0; i < dim; ++i) p[i] = rng.uniform(lo, hi);
  return p;
}

}  // namespace

TEST(GradedSpace, GeometricWeights) {
  const GradedSpace s = GradedSpace::geometric(4, 0.5);
  EXPECT_DOUBLE_EQ(s.weight(0), 0.5);
  EXPECT_DOUBLE_EQ(s.weight(3), 0.0625);
  EXPECT_DOUBLE_EQ(s.tail_bound(), 0.03125);
  ASSERT_TRUE(s.geometric_ratio());
  EXPECT_DOUBLE_EQ(*s.geometric_ratio(), 0.5);
  EXPECT_FALSE(GradedSpace({0.9, 0.5, 0.1}).geometric_ratio());
}

TEST(GradedSpace, RejectsBadWeights) {
  EXPECT_THROW(GradedSpace({0.5, 0.5}), Error);
  EXPECT_THROW(GradedSpace({0.5, -0.1}), Error);
  EXPECT_THROW(GradedSpace(std::vector<double>{}), Error);
  EXPECT_THROW(GradedSpace::geometric(3, 1.5), Error);
}

TEST(GradedSpace, NormOfBasisVectors) {
  const GradedSpace s = GradedSpace::geometric(5, 0.5);
  EXPECT_DOUBLE_EQ(s.norm(Point::basis(5, 0)), 0.25);   // w_1 * 1/2
  EXPECT_DOUBLE_EQ(s.norm(Point::basis(5, 2)), 0.0625); // w_3 * 1/2
  EXPECT_EQ(s.norm(Point(5)), 0.0);
  EXPECT_DOUBLE_EQ(s.bound(), 0.5);
}

TEST(GradedSpace, CumulativeMaxSeminorms) {
  const GradedSpace s({0.5, 0.25}, SeminormMode::kCumulativeMax);
  const Point x{0.0, 3.0};
  EXPECT_DOUBLE_EQ(s.seminorm(1, x.coords()), 3.0);
  const Point y{3.0, 0.0};
  EXPECT_DOUBLE_EQ(s.norm(y), 0.5 * 0.75);
}

TEST(GradedSpace, DimensionMismatchThrows) {
  const GradedSpace s = GradedSpace::geometric(3, 0.5);
  try {
    s.norm(Point(4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kStructural);
  }
}

TEST(GradedSpace, MetricAxiomsOnSamples) {
  Rng rng(7);
  for (MetricMode mode : {MetricMode::kSupForm, MetricMode::kSumForm}) {
    for (SeminormMode sm : {SeminormMode::kCoordinateAbs, SeminormMode::kCumulativeMax}) {
      const GradedSpace s = GradedSpace::geometric(8, 0.5, sm, mode);
      for (int i = 0; i < 300; ++i) {
        const Point x = random_point(8, -5, 5, rng);
        const Point y = random_point(8, -5, 5, rng);
        const Point z = random_point(8, -5, 5, rng);
        EXPECT_LE(s.distance(x, z), s.distance(x, y) + s.distance(y, z) + 1e-15);
        EXPECT_DOUBLE_EQ(s.distance(x, y), s.distance(y, x));
        EXPECT_NEAR(s.distance(x + z, y + z), s.distance(x, y), 1e-14);
        EXPECT_LE(s.norm(x), s.bound());
      }
    }
  }
}

TEST(GradedSpace, SupFormBallsAreAbsolutelyConvex) {
  Rng rng(11);
  const GradedSpace s = GradedSpace::geometric(6, 0.5);
  for (int i = 0; i < 500; ++i) {
    const Point x = random_point(6, -20, 20, rng);
    const Point y = random_point(6, -20, 20, rng);
    const double t = rng.uniform(-1.0, 1.0);
    const double lambda = rng.uniform();
    EXPECT_LE(s.norm(t * x), s.norm(x) + 1e-16);
    EXPECT_LE(s.norm(lambda * x + (1 - lambda) * y), std::max(s.norm(x), s.norm(y)) + 1e-16);
  }
}

TEST(GradedSpace, WeightedSupDominatesNorm) {
  Rng rng(5);
  const GradedSpace s = GradedSpace::geometric(6, 0.3);
  for (int i = 0; i < 200; ++i) {
    const Point x = random_point(6, -3, 3, rng);
    EXPECT_GE(s.weighted_sup(x), s.norm(x));
  }
}

TEST(GradedSpace, RaySupremumAndScaleForNorm) {
  const GradedSpace s = GradedSpace::geometric(4, 0.5);
  const Point dir{0.0, 1.0, 2.0, 0.0};
  EXPECT_DOUBLE_EQ(s.ray_supremum(dir), 0.25);
  const double t = scale_for_norm(s, dir, 0.1);
  EXPECT_NEAR(s.norm(t * dir), 0.1, 1e-12);
  EXPECT_THROW(scale_for_norm(s, dir, 0.3), Error);
}

TEST(Sampling, PointsLandInsideAndOnSpheres) {
  Rng rng(3);
  const GradedSpace s = GradedSpace::geometric(6, 0.5);
  const Point c = random_point(6, -1, 1, rng);
  for (int i = 0; i < 200; ++i) {
    EXPECT_LT(s.distance(sample_in_ball(s, c, 0.2, rng), c), 0.2);
    EXPECT_NEAR(s.distance(sample_on_sphere(s, c, 0.1, rng), c), 0.1, 1e-10);
  }
}

TEST(Scaling, BoundHoldsOnSamples) {
  Rng rng(9);
  const GradedSpace s = GradedSpace::geometric(6, 0.5);
  for (int i = 0; i < 1000; ++i) {
    const Point x = std::pow(10.0, rng.uniform(-3, 3)) * random_direction(6, rng);
    const double t = rng.uniform(-50, 50);
    const ScalingReport r = scaling_bound_check(s, t, x);
    EXPECT_TRUE(r.ok) << "t = " << t;
  }
}

TEST(Scaling, HomogeneityFailsForLargeCoordinates) {
  const GradedSpace s = GradedSpace::geometric(2, 0.5);
  const Point v{10.0, 0.0};
  EXPECT_GT(s.norm(0.1 * v), 0.1 * s.norm(v) * 3.0);
}

TEST(RiemannIntegral, ConstantCurve) {
  const GradedSpace s = GradedSpace::geometric(3, 0.5);
  const Point c{1.0, -2.0, 3.0};
  const std::vector<Point> samples(9, c);
  const IntegralReport r = riemann_integral(s, samples);
  EXPECT_EQ(r.value, c);
  EXPECT_TRUE(r.bound_ok);
}

TEST(RiemannIntegral, NormBoundedByMaxSample) {
  Rng rng(17);
  const GradedSpace s = GradedSpace::geometric(5, 0.5);
  for (int k = 0; k < 50; ++k) {
    const Point a = random_point(5, -4, 4, rng);
    const Point b = random_point(5, -4, 4, rng);
    std::vector<Point> samples;
    for (int i = 0; i <= 64; ++i) samples.push_back(std::sin(3.0 * i / 64.0) * a + (i / 64.0) * b);
    const IntegralReport r = riemann_integral(s, samples);
    EXPECT_TRUE(r.bound_ok);
    EXPECT_LE(r.value_norm, r.max_sample_norm + r.quadrature_slack);
  }
}

TEST(RiemannIntegral, NeedsTwoSamples) {
  const GradedSpace s = GradedSpace::geometric(2, 0.5);
  const std::vector<Point> one{Point{1.0, 1.0}};
  EXPECT_THROW(riemann_integral(s, one), Error);
}

TEST(Rational, Arithmetic) {
  EXPECT_EQ(Rational(2, 4), Rational(1, 2));
  EXPECT_EQ(Rational(1, 3) + Rational(1, 6), Rational(1, 2));
  EXPECT_EQ(Rational(1, 2) * Rational(2, 3), Rational(1, 3));
  EXPECT_EQ(Rational(1, 2) / Rational(1, 4), Rational(2));
  EXPECT_LT(Rational(10, 22), Rational(1, 2));
  EXPECT_EQ(Rational(-3, -6), Rational(1, 2));
  EXPECT_EQ(Rational(5, 8).str(), "5/8");
  EXPECT_THROW(Rational(1, 0), Error);
}

TEST(Rational, OverflowThrows) {
  const Rational big(INT64_MAX / 2, 1);
  EXPECT_THROW(big * Rational(4), Error);
}

TEST(Rational, NonConvexSumFormBall) {
  const std::vector<Rational> w{Rational(1, 2), Rational(1, 4)};
  const auto norm = [&](std::vector<Rational> x) {
    return exact_gauge_norm(w, x, SeminormMode::kCoordinateAbs, MetricMode::kSumForm);
  };
  EXPECT_EQ(norm({Rational(10), Rational(0)}), Rational(10, 22));
  EXPECT_EQ(norm({Rational(0), Rational(10)}), Rational(10, 44));
  EXPECT_EQ(norm({Rational(5), Rational(5)}), Rational(5, 8));
  EXPECT_GT(norm({Rational(5), Rational(5)}), Rational(1, 2));
  EXPECT_EQ(exact_gauge_norm(w, {Rational(5), Rational(5)}, SeminormMode::kCoordinateAbs, MetricMode::kSupForm),
            Rational(5, 12));
}

TEST(Standardization, QuasiIsometryOnSamples) {
  Rng rng(23);
  const GradedSpace s = GradedSpace::geometric(8, 0.5);
  std::vector<Point> pts;
  for (int i = 0; i < 200; ++i) pts.push_back(std::pow(10.0, rng.uniform(-3, 3)) * random_direction(8, rng));
  const Standardization st = minkowski_standardize(s, 16, pts);
  EXPECT_TRUE(st.report.ok());
  EXPECT_DOUBLE_EQ(st.report.upper_factor, 4.0);
  EXPECT_EQ(st.metric.norm(Point(8)), 0.0);
}

TEST(Standardization, SeminormIsMinkowskiFunctional) {
  const GradedSpace s = GradedSpace::geometric(3, 0.5);
  const StandardizedMetric d(s, 4);
  const Point x{1.0, 0.0, 0.0};
  const double p = d.seminorm(1, x);  // ball radius 1/4
  EXPECT_NEAR(s.norm((1.0 / p) * x), 0.25, 1e-9);
}

TEST(Standardization, RejectsSumForm) {
  const GradedSpace s = GradedSpace::geometric(3, 0.5, SeminormMode::kCoordinateAbs, MetricMode::kSumForm);
  EXPECT_THROW(StandardizedMetric(s, 4), Error);
}

TEST(MeanValue, ShiftTanh) {
  Rng rng(31);
  const GradedSpace s = GradedSpace::geometric(6, 0.5);
  const auto f = [](const Point& x) {
    Point y(x.size());
    for (std::size_t i = 1; i < x.size(); ++i) y[i] = std::tanh(x[i - 1]);
    return y;
  };
  for (int i = 0; i < 100; ++i) {
    const Point x = random_point(6, -3, 3, rng);
    const Point y = random_point(6, -3, 3, rng);
    const MeanValueReport r = mean_value_check(s, f, [](const Point&) { return 0.5; }, x, y, 9);
    EXPECT_TRUE(r.ok);
  }
}
