#include <algorithm>
#include <cmath>
#include <limits>

#include "frechet/oracles.hpp"
#include "frechet/runner/operator_literal.hpp"
#include "scenarios_internal.hpp"

namespace frechet::runner::detail {
namespace {

LinearOperator random_lower_banded(const GradedSpace& space, int first_offset, int last_offset, Rng& rng) {
  std::vector<Band> bands;
  for (int k = first_offset; k <= last_offset; ++k) {
    if (static_cast<std::size_t>(k) >= space.dim()) break;
    Band b{k, std::vector<double>(space.dim() - static_cast<std::size_t>(k))};
    for (double& v : b.values) {
      v = rng.uniform(-1.0, 1.0);
      if (v == 0.0) v = 0.5;
    }
    bands.push_back(std::move(b));
  }
  return LinearOperator::banded(space, std::move(bands));
}

void neumann(ScenarioContext& ctx, RunReport& r) {
  const std::size_t samples = static_cast<std::size_t>(ctx.get_int("samples", 100));
  {
    const GradedSpace space = ctx.space(GradedSpace::geometric(16, 0.5));
    const LinearOperator s = LinearOperator::shift(space);
    const LinearOperator a = subtract(LinearOperator::identity(space), s);
    const double theta = operator_gauge_norm(s).value;
    const NeumannResult res = neumann_inverse(a, space.dim(), theta, ctx.rng, samples);
    const DenseMatrix dense = oracle::dense_inverse(a.materialize());
    const double diff = res.inverse.materialize().max_abs_diff(dense);
    r.metric("id-S theta", theta);
    r.metric("id-S max entry difference at K=dim", diff);
    r.check_eq("id-S: K=dim Neumann sum equals the dense inverse", diff, 0.0);
    r.check_le("id-S: residual ratio at K=dim", res.max_residual_ratio, res.tail_bound);
  }
  const GradedSpace space = GradedSpace::geometric(ctx.dimension(16), ctx.get("ratio", 0.3));
  const std::optional<std::string> literal = ctx.config.get(ctx.section, "perturbation");
  const LinearOperator b =
      literal ? parse_operator(*literal, space, ctx.config.base_dir()) : random_lower_banded(space, 1, 3, ctx.rng);
  const std::string tag = literal ? "perturbation" : "banded";
  const LinearOperator a = subtract(LinearOperator::identity(space), b);
  const NormCertificate cert = upper_norm_certificate(b);
  const double theta = cert.value;
  r.metric(tag + " theta (upper certificate)", theta);
  r.check_lt(tag + " theta < 1", theta, 1.0);
  const DenseMatrix dense = oracle::dense_inverse(a.materialize());
  Table& t = r.table("neumann", {"terms", "tail_bound", "max_residual_ratio", "max_entry_diff_vs_dense"});
  for (double kd : ctx.get_list("terms", {1, 2, 3, 4, 6, 8, 12, 16})) {
    const std::size_t k = static_cast<std::size_t>(kd);
    const NeumannResult res = neumann_inverse(a, k, theta, ctx.rng, samples);
    const double diff = res.inverse.materialize().max_abs_diff(dense);
    r.check_le(tag + " K=" + std::to_string(k) + " residual ratio", res.max_residual_ratio, res.tail_bound);
    r.check_eq(tag + " K=" + std::to_string(k) + " samples", static_cast<double>(res.samples),
               static_cast<double>(samples));
    t.rows.push_back({kd, res.tail_bound, res.max_residual_ratio, diff});
    if (k >= space.dim()) r.check_le(tag + " K=" + std::to_string(k) + " matches dense solve", diff, 1e-12);
  }
}

void filtration(ScenarioContext& ctx, RunReport& r) {
  const double a = ctx.get("ratio", 0.3);
  const GradedSpace space = GradedSpace::geometric(ctx.dimension(16), a);
  const auto exact_shift = [&](const std::string& name, const LinearOperator& op, std::size_t ell) {
    r.check_true(name + " maps E_k into F_{k+" + std::to_string(ell) + "}", filtration_shift(op, ell));
    r.check_true(name + " does not map E_k into F_{k+" + std::to_string(ell + 1) + "}", !filtration_shift(op, ell + 1));
  };
  exact_shift("S", LinearOperator::shift(space), 1);
  exact_shift("S^3", LinearOperator::shift(space, 3), 3);
  const long ell = ctx.get_int("ell", 2);
  const LinearOperator b = random_lower_banded(space, static_cast<int>(ell), static_cast<int>(ell) + 1, ctx.rng);
  exact_shift("banded", b, static_cast<std::size_t>(ell));
  const double cert = upper_norm_certificate(b).value;
  const double limit = std::pow(a, static_cast<double>(ell - 1));
  r.metric("banded certified norm", cert);
  r.metric("a^(l-1)", limit);
  r.check_lt("banded certified norm < a^(l-1)", cert, limit);
  r.check_lt("banded is a contraction", cert, 1.0);
  Table& t = r.table("filtration", {"operator", "shift", "holds"});
  for (std::size_t s = 0; s <= 5; ++s) {
    t.rows.push_back({1, static_cast<double>(s), filtration_shift(LinearOperator::shift(space), s) ? 1.0 : 0.0});
    t.rows.push_back({3, static_cast<double>(s), filtration_shift(LinearOperator::shift(space, 3), s) ? 1.0 : 0.0});
    t.rows.push_back({0, static_cast<double>(s), filtration_shift(b, s) ? 1.0 : 0.0});
  }
}

void operator_family(ScenarioContext& ctx, RunReport& r) {
  const GradedSpace space = ctx.space(GradedSpace::geometric(16, 0.5));
  const double a = space.geometric_ratio().value_or(space.weight(1) / space.weight(0));
  const LinearOperator id = LinearOperator::identity(space);
  const LinearOperator s = LinearOperator::shift(space);
  const DenseMatrix sm = s.materialize();
  const std::size_t n_t = static_cast<std::size_t>(ctx.get_int("t_points", 21));
  const std::size_t n_x = static_cast<std::size_t>(ctx.get_int("vectors", 5));
  const double step = ctx.get("fd_step", 1e-5);
  std::vector<Point> xs;
  for (std::size_t i = 0; i < n_x; ++i) xs.push_back(random_point(space.dim(), -1.0, 1.0, ctx.rng));

  const auto g = [&](double t) { return subtract(id, scale(t, s)); };
  const auto h = [&](double t) {
    const LinearOperator gt = g(t);
    return neumann_inverse(gt, space.dim(), upper_norm_certificate(subtract(id, gt)).value, ctx.rng, 20).inverse;
  };

  double worst_value = 0.0;
  double worst_value_metric = 0.0;
  double worst_derivative = 0.0;
  double min_distance_from_id = std::numeric_limits<double>::infinity();
  Table& t = r.table("operator_family", {"t", "value_error", "derivative_error", "sampled_distance_from_id"});
  for (double tv : uniform_grid(0.0, 1.0, n_t)) {
    const LinearOperator ht = h(tv);
    const LinearOperator hp = h(tv + step);
    const LinearOperator hm = h(tv - step);
    const DenseMatrix gd = g(tv).materialize();
    double ve = 0.0;
    double de = 0.0;
    for (const Point& x : xs) {
      const Point exact = oracle::dense_solve(gd, x);
      const Point value = ht(x);
      ve = std::max(ve, max_abs_diff(value, exact));
      worst_value_metric = std::max(worst_value_metric, space.distance(value, exact));
      const Point fd = (1.0 / (2.0 * step)) * (hp(x) - hm(x));
      const Point closed = oracle::dense_solve(gd, sm.apply(exact));
      de = std::max(de, max_abs_diff(fd, closed));
    }
    double dist = 0.0;
    if (tv > 0.0) {
      dist = operator_gauge_norm(subtract(g(tv), id), SamplingBudget{16, 49, 1e-6, 1e6}, ctx.rng).value;
      min_distance_from_id = std::min(min_distance_from_id, dist);
    }
    worst_value = std::max(worst_value, ve);
    worst_derivative = std::max(worst_derivative, de);
    t.rows.push_back({tv, ve, de, dist});
  }
  r.metric("a", a);
  r.metric("max |h(t,x) - dense solve| (metric)", worst_value_metric);
  r.check_le("max |h(t,x) - dense solve|", worst_value, 1e-9);
  r.check_le("max |FD dh/dt - (id-tS)^-1 S (id-tS)^-1 x|", worst_derivative, 1e-6);
  r.check_ge("min over t>0 of sampled ||g(t) - id||", min_distance_from_id, a - 1e-3);
}

}  // namespace

void register_operator_scenarios(Registry& r) {
  r.add({"neumann-inversion", "truncated Neumann series inverse with certified tail", {"operator_space"}, 5, neumann});
  r.add({"filtration-shift", "exact filtration shift of S, S^3 and a banded contraction", {"operator_space"}, 13,
         filtration});
  r.add({"operator-family-inversion", "(id - tS)^-1 x and its t-derivative for t in [0,1]",
         {"operator_space", "inverse_implicit"}, 14, operator_family});
}

}  // namespace frechet::runner::detail
