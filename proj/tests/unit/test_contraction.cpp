#include <gtest/gtest.h>

#include <cmath>

#include "frechet/error.hpp"
#include "frechet/contraction.hpp"
#include "frechet/oracles.hpp"

using namespace frechet;

namespace {

Point shift_tanh(const Point& x) {
  Point y(x.size());
  for (std::size_t i = 1; i < x.size(); ++i) y[i] = std::tanh(x[i - 1]);
  return y;
}

Map affine_contraction(const Point& c) {
  return Map{[c](const Point& x) { return c + shift_tanh(x); }, {}};
}

ParamMap family(const Point& c, const Point& u) {
  ParamMap f;
  f.eval = [c, u](const Point& p, const Point& x) { return c + shift_tanh(x) + (p[0] * p[0]) * u; };
  f.jvp = [u](const Point& p, const Point& x, const Point& q, const Point& y) {
    Point w(x.size());
    for (std::size_t i = 1; i < x.size(); ++i) w[i] = y[i - 1] / std::pow(std::cosh(x[i - 1]), 2);
    return w + (2 * p[0] * q[0]) * u;
  };
  return f;
}

Point random_point(std::size_t n, double lo, double hi, Rng& rng) {
  Point p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = rng.uniform(lo, hi);
  return p;
}

}  // namespace

TEST(FixedPoint, ConstantMapConvergesInOneStep) {
  const GradedSpace s = GradedSpace::geometric(4, 0.5);
  const Point c{1, 2, 3, 4};
  const FixedPointReport r = fixed_point({s, Map{[c](const Point&) { return c; }, {}}, Ball{}, 0.0}, Point(4));
  EXPECT_EQ(r.fixed_point, c);
  EXPECT_LE(r.iterations, 2u);
}

TEST(FixedPoint, AprioriBoundDominatesErrors) {
  Rng rng(1);
  const GradedSpace s = GradedSpace::geometric(12, 0.5);
  for (int k = 0; k < 10; ++k) {
    const Point c = random_point(12, -3, 3, rng);
    const FixedPointReport r = fixed_point({s, affine_contraction(c), Ball{}, 0.5}, Point(12), {1e-15});
    const Point ref = oracle::shift_tanh_preimage(c, 1.0);
    const std::vector<double> err = r.errors_to(s, ref);
    for (std::size_t n = 0; n < err.size(); ++n) EXPECT_LE(err[n], r.apriori_bound(n));
    for (std::size_t n = 0; n + 1 < err.size(); ++n) {
      if (err[n] > 1e-14) {
        EXPECT_LE(err[n + 1] / err[n], 0.5 + 1e-12);
      }
    }
    EXPECT_LE(s.distance(r.fixed_point, ref), 1e-15);
  }
}

TEST(FixedPoint, EntryConditionEnforced) {
  const GradedSpace s = GradedSpace::geometric(4, 0.5);
  const Point c = Point::filled(4, 5.0);
  const Ball small{Point(4), 0.01, true};
  try {
    fixed_point({s, affine_contraction(c), small, 0.5}, Point(4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kPrecondition);
  }
  FixedPointOptions opt;
  opt.entry = EntryPolicy::kOptimistic;
  try {
    fixed_point({s, affine_contraction(c), small, 0.5}, Point(4), opt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kContractViolation);
  }
}

TEST(FixedPoint, OpenBallEntryIsStrict) {
  const GradedSpace s(std::vector<double>{1.0});
  // f(x) = 1, theta = 0: d(f(0), 0) = 1/2 equals (1 - 0)(r - 0) for r = 1/2.
  const Map f{[](const Point&) { return Point{1.0}; }, {}};
  EXPECT_NO_THROW(fixed_point({s, f, Ball{Point{0.0}, 0.5, true}, 0.0}, Point{0.0}));
  EXPECT_THROW(fixed_point({s, f, Ball{Point{0.0}, 0.5, false}, 0.0}, Point{0.0}), Error);
}

TEST(FixedPoint, RejectsThetaOutsideUnitInterval) {
  const GradedSpace s = GradedSpace::geometric(2, 0.5);
  EXPECT_THROW(fixed_point({s, affine_contraction(Point(2)), Ball{}, 1.0}, Point(2)), Error);
}

TEST(SpecialContraction, DeclaredThetaSurvivesAndUnderstatementFails) {
  Rng rng(2);
  const GradedSpace s = GradedSpace::geometric(8, 0.5);
  const Map f = affine_contraction(random_point(8, -1, 1, rng));
  CertificationOptions opts;
  opts.pairs = 300;
  EXPECT_TRUE(certify_special_contraction(s, f, Ball{}, 0.5, rng, opts).passed);
  const SpecialContractionReport low = certify_special_contraction(s, f, Ball{}, 0.3, rng, opts);
  EXPECT_FALSE(low.passed);
  EXPECT_GT(low.theta_hat, 0.3);
}

TEST(SpecialContraction, ScaledIdentityIsNotSpecial) {
  Rng rng(3);
  const GradedSpace line(std::vector<double>{1.0});
  const Map f{[](const Point& x) { return 0.1 * x; }, {}};
  CertificationOptions opts;
  opts.pairs = 100;
  opts.scales = log_scales(1e-3, 1e6, 19);
  const SpecialContractionReport r = certify_special_contraction(line, f, Ball{}, 0.5, rng, opts);
  EXPECT_FALSE(r.passed);
  EXPECT_GT(r.theta_hat, 0.99);
}

TEST(Parametric, ContinuityAlongGrid) {
  Rng rng(4);
  const GradedSpace s = GradedSpace::geometric(8, 0.5);
  const ParamMap f = family(random_point(8, -1, 1, rng), random_point(8, -1, 1, rng));
  std::vector<Point> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(Point{-1.0 + 0.1 * i});
  const ParametricTable t = parametric_fixed_points(s, f, grid, Point(8), Ball{}, 0.5, {1e-14});
  ASSERT_EQ(t.rows.size(), grid.size());
  EXPECT_EQ(t.exits(), 0u);
  for (const ParametricRow& row : t.rows) {
    EXPECT_TRUE(row.continuity_ok);
    EXPECT_LE(row.neighbour_distance, row.neighbour_bound + 1e-15);
  }
}

TEST(Derivative, ThreeRoutesAgree) {
  Rng rng(5);
  const GradedSpace s = GradedSpace::geometric(10, 0.5);
  const ParamMap f = family(random_point(10, -1, 1, rng), random_point(10, -1, 1, rng));
  const Point p{0.4};
  const Point q{1.0};
  const Point xp = fixed_point({s, f.at(p), Ball{}, 0.5}, Point(10), {1e-15}).fixed_point;
  DerivativeOptions o;
  o.theta = 0.5;
  const DerivativeReport lin = fixed_point_directional_derivative(s, f, p, xp, q, DerivativeMethod::kLinearFixedPoint, o);
  const DerivativeReport ser = fixed_point_directional_derivative(s, f, p, xp, q, DerivativeMethod::kHSeries, o);
  const DerivativeReport fd = fixed_point_directional_derivative(s, f, p, xp, q, DerivativeMethod::kFiniteDifference, o);
  EXPECT_LT((lin.value - ser.value).max_abs(), 1e-12);
  EXPECT_LT((lin.value - fd.value).max_abs(), 1e-7);
  // phi'(p).q = f'(p, phi(p)).(q, phi'(p).q)
  EXPECT_LT((lin.value - f.derivative(p, xp, q, lin.value)).max_abs(), 1e-14);
}

TEST(Derivative, ZeroDirectionGivesZero) {
  const GradedSpace s = GradedSpace::geometric(4, 0.5);
  const ParamMap f = family(Point(4), Point::filled(4, 1.0));
  DerivativeOptions o;
  o.theta = 0.5;
  for (DerivativeMethod m : {DerivativeMethod::kLinearFixedPoint, DerivativeMethod::kHSeries,
                             DerivativeMethod::kFiniteDifference}) {
    const DerivativeReport r = fixed_point_directional_derivative(s, f, Point{0.3}, Point(4), Point{0.0}, m, o);
    EXPECT_EQ(r.value.max_abs(), 0.0) << to_string(m);
  }
}

TEST(Derivative, SeriesTermsDecayGeometrically) {
  Rng rng(6);
  const GradedSpace s = GradedSpace::geometric(16, 0.5);
  const ParamMap f = family(random_point(16, -1, 1, rng), random_point(16, -1, 1, rng));
  const Point p{0.7};
  const Point xp = fixed_point({s, f.at(p), Ball{}, 0.5}, Point(16), {1e-15}).fixed_point;
  for (double t : {0.0, 0.05, 0.3}) {
    DerivativeOptions o;
    o.theta = 0.5;
    o.t = t;
    o.min_terms = 31;
    const DerivativeReport r = fixed_point_directional_derivative(s, f, p, xp, Point{1.0}, DerivativeMethod::kHSeries, o);
    ASSERT_GE(r.term_norms.size(), 31u);
    for (std::size_t k = 0; k <= 30; ++k) {
      EXPECT_LE(r.term_norms[k], std::pow(0.5, static_cast<double>(k)) * r.series_constant * (1 + 1e-12));
    }
  }
}

TEST(Derivative, DifferenceQuotientMatchesDerivativeAtSmallT) {
  const ParamMap f = family(Point{0.1, 0.2, 0.3}, Point{1.0, 0.0, -1.0});
  const Point p{0.5};
  const Point x{0.3, -0.4, 0.9};
  const Point q{1.0};
  const Point y{0.2, 0.1, 0.0};
  EXPECT_EQ(difference_quotient(f, p, x, q, y, 1e-9), f.derivative(p, x, q, y));
  const Point dq = difference_quotient(f, p, x, q, y, 1e-4);
  EXPECT_LT((dq - f.derivative(p, x, q, y)).max_abs(), 1e-3);
}
