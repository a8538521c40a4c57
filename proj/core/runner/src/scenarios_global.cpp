#include <algorithm>
#include <cmath>
#include <cstdio>

#include "frechet/oracles.hpp"
#include "scenarios_internal.hpp"

namespace frechet::runner::detail {
namespace {

LiftOptions lift_options(ScenarioContext& ctx, double sigma) {
  LiftOptions o;
  o.sigma = ctx.get("sigma", sigma);
  o.chart_radius = ctx.get("chart_radius", 0.05);
  o.tol = ctx.get("tol", 1e-12);
  return o;
}

void global_inversion(ScenarioContext& ctx, RunReport& r) {
  const GradedSpace space = ctx.space(GradedSpace::geometric(16, 0.5));
  const double sigma = space.geometric_ratio().value_or(0.5);
  const double m = ctx.get("M", 2.0);
  const LiftOptions opts = lift_options(ctx, sigma);
  const Map f = id_minus_shift_tanh(1.0);
  const std::size_t targets = static_cast<std::size_t>(ctx.get_int("targets", 20));
  const double radius = ctx.get("target_radius", 0.4);
  const Point seed(space.dim());

  double worst_residual = 0.0;
  double worst_oracle = 0.0;
  std::size_t trace_violations = 0;
  std::size_t increment_violations = 0;
  std::size_t lipschitz_violations = 0;
  double worst_trace_ratio = 0.0;
  std::size_t steps = 0;
  Table& summary = r.table("global_inversion", {"target", "target_norm", "steps", "rejections", "residual",
                                                "oracle_distance", "L", "trace_violations", "worst_trace_ratio"});
  for (std::size_t k = 0; k < targets; ++k) {
    const Point z = sample_in_ball(space, Point(space.dim()), radius, ctx.rng);
    const LiftResult lift = global_invert(space, f, z, seed, m, ctx.rng, opts);
    const double residual = space.norm(f(lift.endpoint) - z);
    const double oracle_distance = space.distance(lift.endpoint, oracle::shift_tanh_preimage(z, 1.0));
    worst_residual = std::max(worst_residual, residual);
    worst_oracle = std::max(worst_oracle, oracle_distance);
    trace_violations += lift.trace_violations;
    increment_violations += lift.increment_violations;
    worst_trace_ratio = std::max(worst_trace_ratio, lift.worst_trace_ratio);
    steps += lift.steps.size();

    // ||h v|| <= h * max_n w_n |v_n| bounds the metric length of the segment pieces.
    const double l_lip = space.weighted_sup(z - f(seed));
    double res_prev = 0.0;
    for (const LiftStep& s : lift.steps) {
      if (!(s.increment <= m * (l_lip * s.step + s.residual + res_prev) + 1e-12)) ++lipschitz_violations;
      res_prev = s.residual;
    }

    char name[32];
    std::snprintf(name, sizeof name, "lift_%02zu", k);
    Table& t = r.table(name, {"t", "step", "residual", "preimage_norm"});
    for (const LiftStep& s : lift.steps) t.rows.push_back({s.t, s.step, s.residual, s.preimage_norm});
    summary.rows.push_back({static_cast<double>(k), space.norm(z), static_cast<double>(lift.steps.size()),
                            static_cast<double>(lift.rejections), residual, oracle_distance, lift.l,
                            static_cast<double>(lift.trace_violations), lift.worst_trace_ratio});
  }
  r.metric("accepted steps", static_cast<double>(steps));
  r.metric("worst increment / (M L |t-s|)", worst_trace_ratio);
  r.check_le("max residual ||f(x) - z||", worst_residual, 1e-9);
  r.check_le("max distance to the row-solve oracle", worst_oracle, 1e-8);
  r.check_eq("steps violating M (||dgamma|| + residuals)", static_cast<double>(increment_violations), 0.0);
  r.check_eq("steps violating M (h max_n w_n |gamma'_n| + residuals)", static_cast<double>(lipschitz_violations), 0.0);
  r.check_eq("steps violating the trace bound M L |t-s|", static_cast<double>(trace_violations), 0.0);
}

void homotopy(ScenarioContext& ctx, RunReport& r) {
  const GradedSpace space = ctx.space(GradedSpace::geometric(12, 0.5));
  const double sigma = space.geometric_ratio().value_or(0.5);
  const Map f = id_minus_shift_tanh(1.0);
  const std::size_t pairs = static_cast<std::size_t>(ctx.get_int("pairs", 5));
  Table& t = r.table("homotopy", {"pair", "s", "endpoint_distance_to_x0"});
  double worst_end = 0.0;
  double worst_start = 0.0;
  std::size_t returned = 0;
  std::size_t inconclusive = 0;
  for (std::size_t k = 0; k < pairs; ++k) {
    const Point x0 = random_point(space.dim(), -1.0, 1.0, ctx.rng);
    const Point y0 = x0 + 0.3 * random_direction(space.dim(), ctx.rng);
    const HomotopyReport h = homotopy_injectivity_probe(space, f, x0, y0, ctx.get("M", 2.0), 9, 1e-9, ctx.rng,
                                                        lift_options(ctx, sigma));
    if (h.inconclusive) {
      ++inconclusive;
      r.notes.push_back(h.note);
      continue;
    }
    if (h.returned) ++returned;
    worst_start = std::max(worst_start, space.distance(h.endpoints.front(), x0));
    worst_end = std::max(worst_end, space.distance(h.endpoints.back(), y0));
    for (std::size_t i = 0; i < h.s_grid.size(); ++i) {
      t.rows.push_back({static_cast<double>(k), h.s_grid[i], space.distance(h.endpoints[i], x0)});
    }
  }
  r.inconclusive = inconclusive > 0;
  r.check_le("s=0 lift stays at x0", worst_start, 1e-9);
  r.check_le("s=1 lift ends at y0", worst_end, 1e-8);
  r.check_eq("distinct points with equal images", static_cast<double>(returned), 0.0);
}

}  // namespace

void register_global_scenarios(Registry& r) {
  r.add({"global-inversion", "curve lifting to invert x - S tanh(x) at 20 random targets",
         {"global_continuation", "inverse_implicit"}, 11, global_inversion});
  r.add({"homotopy-injectivity", "lifts of the homotopy z0 + s (f(segment) - z0)", {"global_continuation"}, 0,
         homotopy});
}

}  // namespace frechet::runner::detail
