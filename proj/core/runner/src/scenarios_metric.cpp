#include <algorithm>
#include <cmath>

#include "scenarios_internal.hpp"

namespace frechet::runner::detail {
namespace {

void shift_norm(ScenarioContext& ctx, RunReport& r) {
  const std::size_t dim = ctx.dimension(16);
  const SamplingBudget budget{static_cast<std::size_t>(ctx.get_int("rays", 64)),
                              static_cast<std::size_t>(ctx.get_int("scales", 49)), 1e-6, 1e6};
  Table& t = r.table("shift_norm", {"a", "exact", "sampled_lower", "upper"});
  for (double a : ctx.get_list("ratios", {0.3, 0.5})) {
    const GradedSpace space = GradedSpace::geometric(dim, a);
    const LinearOperator s = LinearOperator::shift(space);
    const NormCertificate exact = operator_gauge_norm(s);
    const NormCertificate lower = operator_gauge_norm(s, budget, ctx.rng);
    const NormCertificate upper = upper_norm_certificate(s);
    const std::string tag = "a=" + format_double(a);
    r.check_true(tag + " closed form is exact", exact.kind == NormCertificate::Kind::kExact);
    r.check_le(tag + " |exact - a|", std::abs(exact.value - a), 1e-15);
    r.check_ge(tag + " sampled lower", lower.value, a - 1e-3);
    r.check_le(tag + " sampled lower <= exact", lower.value, exact.value + 1e-12);
    r.metric(tag + " exact", exact.value);
    r.metric(tag + " sampled", lower.value);
    t.rows.push_back({a, exact.value, lower.value, upper.value});
  }
}

void scaled_identity(ScenarioContext& ctx, RunReport& r) {
  const GradedSpace line(std::vector<double>{1.0});
  const double lambda = ctx.get("lambda", 0.1);
  const LinearOperator op = scale(lambda, LinearOperator::identity(line));
  const NormCertificate lower = operator_gauge_norm(op, SamplingBudget{}, ctx.rng);
  const NormCertificate exact = operator_gauge_norm(op);
  r.metric("lambda", lambda);
  r.metric("sampled lower", lower.value);
  r.metric("closed form", exact.value);
  r.check_ge("sampled lower", lower.value, 0.999);
  r.check_eq("closed form max{1,|lambda|}", exact.value, std::max(1.0, std::abs(lambda)));
  Table& t = r.table("ratio_by_scale", {"s", "ratio"});
  for (double s : log_scales(1e-6, 1e6, 49)) {
    const Point x{s};
    t.rows.push_back({s, line.norm(op(x)) / line.norm(x)});
  }
}

void nonconvex(ScenarioContext&, RunReport& r) {
  const std::vector<Rational> w{Rational(1, 2), Rational(1, 4)};
  const std::vector<Rational> v1{Rational(10), Rational(0)};
  const std::vector<Rational> v2{Rational(0), Rational(10)};
  const std::vector<Rational> mid{Rational(5), Rational(5)};
  const auto norm = [&](const std::vector<Rational>& x) {
    return exact_gauge_norm(w, x, SeminormMode::kCoordinateAbs, MetricMode::kSumForm);
  };
  const Rational n1 = norm(v1);
  const Rational n2 = norm(v2);
  const Rational nm = norm(mid);
  const Rational half(1, 2);
  r.metric("norm v1", n1.to_double());
  r.metric("norm v2", n2.to_double());
  r.metric("norm midpoint", nm.to_double());
  r.check_true("norm v1 == 10/22 exactly", n1 == Rational(10, 22));
  r.check_true("norm v2 == 10/44 exactly", n2 == Rational(10, 44));
  r.check_true("generators in the closed 1/2-ball", n1 <= half && n2 <= half);
  r.check_true("midpoint norm == 5/8 exactly", nm == Rational(5, 8));
  r.check_true("midpoint outside the closed 1/2-ball", nm > half);
  r.check_eq("midpoint norm", nm.to_double(), 0.625);

  const GradedSpace sum_space({0.5, 0.25}, SeminormMode::kCoordinateAbs, MetricMode::kSumForm);
  r.check_le("floating-point cross-check", std::abs(sum_space.norm(Point{5.0, 5.0}) - 0.625), 1e-15);
  const GradedSpace sup_space({0.5, 0.25});
  r.metric("sup-form midpoint norm", sup_space.norm(Point{5.0, 5.0}));
  r.check_true("sup-form ball is convex here", sup_space.norm(Point{5.0, 5.0}) <=
                                                   std::max(sup_space.norm(Point{10.0, 0.0}), sup_space.norm(Point{0.0, 10.0})));
}

std::vector<Point> scattered_points(std::size_t dim, std::size_t n, Rng& rng) {
  std::vector<Point> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = std::pow(10.0, rng.uniform(-4.0, 4.0));
    pts.push_back(s * random_direction(dim, rng));
  }
  return pts;
}

void quasi_isometry(ScenarioContext& ctx, RunReport& r) {
  const GradedSpace space = ctx.space(GradedSpace::geometric(16, 0.5));
  const std::size_t n = static_cast<std::size_t>(ctx.get_int("samples", 1000));
  const std::size_t levels = static_cast<std::size_t>(ctx.get_int("levels", 24));
  const std::vector<Point> pts = scattered_points(space.dim(), n, ctx.rng);
  const Standardization st = minkowski_standardize(space, levels, pts);
  const QuasiIsometryReport& q = st.report;
  r.metric("M", q.bound_m);
  r.metric("max{4,4M}", q.upper_factor);
  r.metric("worst lower ratio", q.worst_lower_ratio);
  r.metric("worst upper ratio", q.worst_upper_ratio);
  r.check_eq("samples", static_cast<double>(q.samples), static_cast<double>(n));
  r.check_eq("lower inequality failures", static_cast<double>(q.lower_failures), 0.0);
  r.check_eq("upper inequality failures", static_cast<double>(q.upper_failures), 0.0);
  Table& t = r.table("standardization", {"d_norm", "D_norm"});
  for (std::size_t i = 0; i < std::min<std::size_t>(n, 200); ++i) t.rows.push_back({space.norm(pts[i]), st.metric.norm(pts[i])});
}

void scaling_bound(ScenarioContext& ctx, RunReport& r) {
  const GradedSpace space = ctx.space(GradedSpace::geometric(16, 0.5));
  const std::size_t n = static_cast<std::size_t>(ctx.get_int("samples", 2000));
  std::size_t failures = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point x = std::pow(10.0, ctx.rng.uniform(-3.0, 3.0)) * random_direction(space.dim(), ctx.rng);
    const double t = (ctx.rng.uniform() < 0.5 ? -1.0 : 1.0) * std::pow(10.0, ctx.rng.uniform(-3.0, 3.0));
    const ScalingReport s = scaling_bound_check(space, t, x);
    if (!s.ok) ++failures;
    if (s.rhs > 0.0) worst = std::max(worst, s.lhs / s.rhs);
  }
  r.metric("worst ||tx|| / (max{1,2|t|}||x||)", worst);
  r.check_eq("scaling bound failures", static_cast<double>(failures), 0.0);
}

void riemann(ScenarioContext& ctx, RunReport& r) {
  const GradedSpace space = ctx.space(GradedSpace::geometric(12, 0.5));
  const std::size_t g = ctx.grid_size(256);
  Table& t = r.table("riemann", {"curve", "integral_norm", "max_sample_norm", "quadrature_slack"});
  const std::size_t curves = static_cast<std::size_t>(ctx.get_int("curves", 20));
  std::size_t failures = 0;
  for (std::size_t c = 0; c < curves; ++c) {
    const Point u = random_point(space.dim(), -3.0, 3.0, ctx.rng);
    const Point v = random_point(space.dim(), -3.0, 3.0, ctx.rng);
    const double freq = ctx.rng.uniform(1.0, 6.0);
    std::vector<Point> samples;
    for (std::size_t k = 0; k <= g; ++k) {
      const double tau = static_cast<double>(k) / static_cast<double>(g);
      samples.push_back(std::sin(freq * tau) * u + (tau * tau) * v);
    }
    const IntegralReport rep = riemann_integral(space, samples);
    if (!rep.bound_ok) ++failures;
    t.rows.push_back({static_cast<double>(c), rep.value_norm, rep.max_sample_norm, rep.quadrature_slack});
  }
  r.check_eq("integral bound failures", static_cast<double>(failures), 0.0);
}

void mean_value(ScenarioContext& ctx, RunReport& r) {
  const GradedSpace space = ctx.space(GradedSpace::geometric(12, 0.5));
  const Map f = shift_tanh(1.0, Point(space.dim()));
  const auto jac_norm = [&](const Point& z) { return upper_norm_certificate(jacobian(f, space, z)).value; };
  const std::size_t pairs = static_cast<std::size_t>(ctx.get_int("pairs", 100));
  std::size_t failures = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < pairs; ++i) {
    const Point x = random_point(space.dim(), -4.0, 4.0, ctx.rng);
    const Point y = x + std::pow(10.0, ctx.rng.uniform(-3.0, 1.0)) * random_direction(space.dim(), ctx.rng);
    const MeanValueReport m = mean_value_check(space, f, jac_norm, x, y, 17);
    if (!m.ok) ++failures;
    if (m.rhs > 0.0) worst = std::max(worst, m.lhs / m.rhs);
  }
  r.metric("worst lhs / rhs", worst);
  r.check_eq("mean value failures (sup-form)", static_cast<double>(failures), 0.0);
}

}  // namespace

void register_metric_scenarios(Registry& r) {
  r.add({"shift-norm", "metric norm of the weighted shift: closed form vs sampled lower bound",
         {"metric_core", "operator_space"}, 1, shift_norm});
  r.add({"scaled-identity-pathology", "0.1 id on the line with r/(1+r) has metric norm >= 1",
         {"operator_space"}, 2, scaled_identity});
  r.add({"nonconvex-counterexample", "sum-form metric ball that is not convex, in exact arithmetic",
         {"metric_core"}, 3, nonconvex});
  r.add({"quasi-isometry", "Minkowski standardization and both quasi-isometry inequalities",
         {"metric_core"}, 12, quasi_isometry});
  r.add({"scaling-bound", "||t x|| <= max{1, 2|t|} ||x|| on sampled points", {"metric_core"}, 0, scaling_bound});
  r.add({"riemann-integral", "norm of the weak integral vs max norm of the curve", {"metric_core"}, 0, riemann});
  r.add({"mean-value", "mean value estimate with certified Jacobian norms", {"metric_core", "operator_space"}, 0,
         mean_value});
}

}  // namespace frechet::runner::detail
