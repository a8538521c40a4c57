#include <gtest/gtest.h>

#include <cmath>

#include "frechet/continuation.hpp"
#include "frechet/oracles.hpp"

using namespace frechet;

namespace {

Map id_minus_shift_tanh() {
  Map m;
  m.eval = [](const Point& x) {
    Point y = x;
    for (std::size_t i = 1; i < x.size(); ++i) y[i] -= std::tanh(x[i - 1]);
    return y;
  };
  m.jvp = [](const Point& x, const Point& v) {
    Point w = v;
    for (std::size_t i = 1; i < x.size(); ++i) w[i] -= v[i - 1] / std::pow(std::cosh(x[i - 1]), 2);
    return w;
  };
  return m;
}

}  // namespace

TEST(Lift, GlobalInversionReachesOraclePreimage) {
  Rng rng(1);
  const GradedSpace s = GradedSpace::geometric(6, 0.5);
  LiftOptions o;
  o.sigma = 0.5;
  const Point z{3.0, -2.0, 5.0, 0.5, -4.0, 1.0};
  const LiftResult r = global_invert(s, id_minus_shift_tanh(), z, Point(6), 2.0, rng, o);
  EXPECT_LT((r.endpoint - oracle::shift_tanh_preimage(z, 1.0)).max_abs(), 1e-9);
  EXPECT_LE(r.max_residual, 1e-11);
  EXPECT_EQ(r.increment_violations, 0u);
  ASSERT_FALSE(r.steps.empty());
  EXPECT_DOUBLE_EQ(r.steps.back().t, 1.0);
}

TEST(Lift, StepsIncreaseInTime) {
  Rng rng(2);
  const GradedSpace s = GradedSpace::geometric(4, 0.5);
  LiftOptions o;
  o.sigma = 0.5;
  const Point z{1.0, 1.0, 1.0, 1.0};
  const LiftResult r = global_invert(s, id_minus_shift_tanh(), z, Point(4), 2.0, rng, o);
  double prev = 0.0;
  for (const LiftStep& st : r.steps) {
    EXPECT_GT(st.t, prev);
    EXPECT_GE(st.step, o.steps.floor);
    prev = st.t;
  }
  EXPECT_EQ(r.preimages.size(), r.steps.size() + 1);
}

TEST(Lift, StallReportsLastState) {
  Rng rng(3);
  const GradedSpace s = GradedSpace::geometric(3, 0.5);
  // f = id + 5 S: the remainder is not a sigma = 0.5 contraction, so charts fail.
  Map f;
  f.eval = [](const Point& x) { return Point{x[0], x[1] + 5 * x[0], x[2] + 5 * x[1]}; };
  LiftOptions o;
  o.sigma = 0.5;
  o.steps.floor = 1.0 / 64.0;
  try {
    global_invert(s, f, Point{50.0, 0.0, 0.0}, Point(3), 2.0, rng, o);
    SUCCEED();
  } catch (const LiftStallError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kLiftStall);
    EXPECT_LT(e.last_state().t, 1.0);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kContractViolation);
  }
}

TEST(Homotopy, InjectiveMapDoesNotReturn) {
  Rng rng(4);
  const GradedSpace s = GradedSpace::geometric(4, 0.5);
  LiftOptions o;
  o.sigma = 0.5;
  const Point x0{0.1, -0.3, 0.2, 0.0};
  const Point y0{2.0, 1.0, -1.0, 3.0};
  const HomotopyReport h = homotopy_injectivity_probe(s, id_minus_shift_tanh(), x0, y0, 2.0, 5, 1e-9, rng, o);
  EXPECT_FALSE(h.inconclusive) << h.note;
  EXPECT_FALSE(h.returned);
  ASSERT_EQ(h.endpoints.size(), 5u);
  EXPECT_LE(s.distance(h.endpoints.front(), x0), 1e-9);
  EXPECT_LE(s.distance(h.endpoints.back(), y0), 1e-8);
}
