#include <gtest/gtest.h>

#include <cmath>

#include "frechet/error.hpp"
#include "frechet/operator.hpp"
#include "frechet/oracles.hpp"

using namespace frechet;

namespace {

LinearOperator random_lower(const GradedSpace& s, Rng& rng, int first = 1, int last = 3) {
  std::vector<Band> bands;
  for (int k = first; k <= last; ++k) {
    Band b{k, std::vector<double>(s.dim() - static_cast<std::size_t>(k))};
    for (double& v : b.values) v = rng.uniform(-1, 1);
    bands.push_back(b);
  }
  return LinearOperator::banded(s, bands);
}

}  // namespace

TEST(LinearOperator, ShiftMovesBasisVectors) {
  const GradedSpace s = GradedSpace::geometric(5, 0.5);
  const LinearOperator sh = LinearOperator::shift(s);
  EXPECT_EQ(sh(Point::basis(5, 0)), Point::basis(5, 1));
  EXPECT_EQ(sh(Point::basis(5, 4)), Point(5));
  const LinearOperator s2 = LinearOperator::shift(s, 2, -3.0);
  EXPECT_EQ(s2(Point::basis(5, 1)), -3.0 * Point::basis(5, 3));
}

TEST(LinearOperator, MaterializeMatchesApply) {
  Rng rng(1);
  const GradedSpace s = GradedSpace::geometric(7, 0.4);
  const LinearOperator a = add(compose(LinearOperator::shift(s, 1, 2.0), random_lower(s, rng)),
                               scale(0.5, LinearOperator::diagonal(s, {1, 2, 3, 4, 5, 6, 7})));
  const DenseMatrix m = a.materialize();
  for (int i = 0; i < 10; ++i) {
    Point x(7);
    for (std::size_t j = 0; j < 7; ++j) x[j] = rng.uniform(-1, 1);
    EXPECT_LT((m.apply(x) - a(x)).max_abs(), 1e-14);
  }
  EXPECT_EQ(a.kind(), LinearOperator::Kind::kSum);
  EXPECT_FALSE(a.describe().empty());
}

TEST(LinearOperator, StructureMismatchThrows) {
  const GradedSpace s3 = GradedSpace::geometric(3, 0.5);
  const GradedSpace s4 = GradedSpace::geometric(4, 0.5);
  EXPECT_THROW(add(LinearOperator::identity(s3), LinearOperator::identity(s4)), Error);
  EXPECT_THROW(LinearOperator::diagonal(s3, {1, 2}), Error);
  EXPECT_THROW(LinearOperator::identity(s3).apply(Point(4)), Error);
}

TEST(ClosedForm, WhitelistedStructures) {
  const GradedSpace s = GradedSpace::geometric(8, 0.5);
  EXPECT_DOUBLE_EQ(closed_form_norm(LinearOperator::shift(s))->value, 0.5);
  EXPECT_DOUBLE_EQ(closed_form_norm(LinearOperator::shift(s, 2, 3.0))->value, 0.75);
  EXPECT_DOUBLE_EQ(closed_form_norm(LinearOperator::shift(s, 3, 0.1))->value, 0.125);
  EXPECT_DOUBLE_EQ(closed_form_norm(LinearOperator::identity(s))->value, 1.0);
  EXPECT_DOUBLE_EQ(closed_form_norm(LinearOperator::zero(s))->value, 0.0);
  EXPECT_DOUBLE_EQ(closed_form_norm(LinearOperator::diagonal(s, {0.5, -2, 0, 0, 0, 0, 0, 0}))->value, 2.0);
  EXPECT_DOUBLE_EQ(closed_form_norm(scale(0.1, LinearOperator::identity(s)))->value, 1.0);
  EXPECT_FALSE(closed_form_norm(LinearOperator::dense(s, DenseMatrix::identity(8))));
  EXPECT_EQ(operator_gauge_norm(LinearOperator::shift(s)).kind, NormCertificate::Kind::kExact);
}

TEST(ClosedForm, SampledLowerApproachesShiftNorm) {
  Rng rng(2);
  for (double a : {0.3, 0.5, 0.7}) {
    const GradedSpace s = GradedSpace::geometric(10, a);
    const NormCertificate lo = operator_gauge_norm(LinearOperator::shift(s), SamplingBudget{}, rng);
    EXPECT_EQ(lo.kind, NormCertificate::Kind::kLower);
    EXPECT_GE(lo.value, a - 1e-3);
    EXPECT_LE(lo.value, a + 1e-12);
  }
}

TEST(ClosedForm, ScaledIdentityOnTheLine) {
  Rng rng(3);
  const GradedSpace line(std::vector<double>{1.0});
  const NormCertificate lo = operator_gauge_norm(scale(0.1, LinearOperator::identity(line)), SamplingBudget{}, rng);
  EXPECT_GE(lo.value, 0.999);
}

TEST(UpperCertificate, DominatesSampledLowerBound) {
  Rng rng(4);
  const GradedSpace s = GradedSpace::geometric(6, 0.5);
  for (int k = 0; k < 20; ++k) {
    const LinearOperator b = random_lower(s, rng);
    const LinearOperator a = add(compose(b, LinearOperator::shift(s)), scale(rng.uniform(-3, 3), b));
    const double up = upper_norm_certificate(a).value;
    const double lo = operator_gauge_norm(a, SamplingBudget{16, 25, 1e-4, 1e4}, rng).value;
    EXPECT_LE(lo, up + 1e-12);
  }
}

TEST(UpperCertificate, ChainRule) {
  Rng rng(5);
  const GradedSpace s = GradedSpace::geometric(6, 0.5);
  const LinearOperator a = random_lower(s, rng);
  const LinearOperator b = random_lower(s, rng);
  const double na = upper_norm_certificate(a).value;
  const double nb = upper_norm_certificate(b).value;
  EXPECT_LE(upper_norm_certificate(compose(a, b)).value, na * nb + 1e-15);
  EXPECT_LE(upper_norm_certificate(add(a, b)).value, na + nb + 1e-15);
  EXPECT_LE(upper_norm_certificate(scale(4.0, a)).value, 4.0 * na + 1e-15);
}

TEST(UpperCertificate, EntrywiseBoundForStrictlyLowerBands) {
  Rng rng(6);
  const GradedSpace s = GradedSpace::geometric(8, 0.3);
  const LinearOperator b = random_lower(s, rng, 1, 2);
  EXPECT_LE(upper_norm_certificate(b).value, 0.3 + 0.09 + 1e-15);
}

TEST(Neumann, ExactForNilpotentPerturbation) {
  Rng rng(7);
  const GradedSpace s = GradedSpace::geometric(12, 0.5);
  const LinearOperator a = subtract(LinearOperator::identity(s), LinearOperator::shift(s));
  const NeumannResult r = neumann_inverse(a, 12, 0.5, rng);
  EXPECT_EQ(r.inverse.materialize().max_abs_diff(oracle::dense_inverse(a.materialize())), 0.0);
  EXPECT_EQ(r.samples, 100u);
}

TEST(Neumann, ResidualWithinTail) {
  Rng rng(8);
  const GradedSpace s = GradedSpace::geometric(10, 0.3);
  const LinearOperator b = random_lower(s, rng);
  const double theta = upper_norm_certificate(b).value;
  const LinearOperator a = subtract(LinearOperator::identity(s), b);
  for (std::size_t k : {1u, 2u, 4u}) {
    const NeumannResult r = neumann_inverse(a, k, theta, rng);
    EXPECT_DOUBLE_EQ(r.tail_bound, std::pow(theta, static_cast<double>(k + 1)) / (1 - theta));
    EXPECT_LE(r.max_residual_ratio, r.tail_bound);
  }
}

TEST(Neumann, UnderstatedThetaIsCaught) {
  Rng rng(9);
  const GradedSpace s = GradedSpace::geometric(8, 0.5);
  const LinearOperator a = subtract(LinearOperator::identity(s), LinearOperator::shift(s));
  try {
    neumann_inverse(a, 1, 0.01, rng);
    FAIL() << "expected a contract violation";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kContractViolation);
  }
  EXPECT_THROW(neumann_inverse(a, 1, 1.0, rng), Error);
}

TEST(Filtration, ShiftPowers) {
  const GradedSpace s = GradedSpace::geometric(8, 0.5);
  EXPECT_TRUE(filtration_shift(LinearOperator::shift(s), 1));
  EXPECT_FALSE(filtration_shift(LinearOperator::shift(s), 2));
  EXPECT_TRUE(filtration_shift(LinearOperator::shift(s, 3), 3));
  EXPECT_FALSE(filtration_shift(LinearOperator::shift(s, 3), 4));
  EXPECT_TRUE(filtration_shift(LinearOperator::identity(s), 0));
  EXPECT_FALSE(filtration_shift(LinearOperator::identity(s), 1));
}

TEST(Filtration, BandedContraction) {
  Rng rng(10);
  const GradedSpace s = GradedSpace::geometric(12, 0.3);
  const LinearOperator b = random_lower(s, rng, 2, 4);
  EXPECT_TRUE(filtration_shift(b, 2));
  EXPECT_FALSE(filtration_shift(b, 3));
  EXPECT_LT(upper_norm_certificate(b).value, 0.3);
}
