#include <algorithm>
#include <cmath>

#include "frechet/oracles.hpp"
#include "scenarios_internal.hpp"

namespace frechet::runner::detail {
namespace {

/// f(p, x) = c + S tanh(x) + p_0 u.
ParamMap shift_tanh_family(const Point& c, const Point& u) {
  ParamMap f;
  f.eval = [c, u](const Point& p, const Point& x) { return c + shift_of(tanh_of(x)) + p[0] * u; };
  f.jvp = [u](const Point&, const Point& x, const Point& q, const Point& y) {
    Point w(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double ch = std::cosh(x[i]);
      w[i] = y[i] / (ch * ch);
    }
    return shift_of(w) + q[0] * u;
  };
  return f;
}

void apriori(ScenarioContext& ctx, RunReport& r) {
  const GradedSpace space = ctx.space(GradedSpace::geometric(16, 0.5));
  const double theta = space.geometric_ratio().value_or(0.5);
  const double spread = ctx.get("offset_scale", 2.0);
  const Point c = random_point(space.dim(), -spread, spread, ctx.rng);
  const ContractionSpec spec{space, shift_tanh(1.0, c), Ball{}, theta, ThetaProvenance::kDeclared};
  FixedPointOptions opts;
  opts.tol = ctx.get("tol", 1e-15);
  const Point x0(space.dim());
  const FixedPointReport fp = fixed_point(spec, x0, opts);
  const Point reference = oracle::shift_tanh_preimage(c, 1.0);
  const std::vector<double> errors = fp.errors_to(space, reference);

  Table& t = r.table("convergence", {"n", "error", "bound"});
  std::size_t violations = 0;
  double worst_ratio = 0.0;
  for (std::size_t n = 0; n < errors.size(); ++n) {
    const double bound = fp.apriori_bound(n);
    if (!(errors[n] <= bound)) ++violations;
    if (n + 1 < errors.size() && errors[n] > 1e-14) worst_ratio = std::max(worst_ratio, errors[n + 1] / errors[n]);
    t.rows.push_back({static_cast<double>(n), errors[n], bound});
  }
  r.metric("theta", theta);
  r.metric("iterations", static_cast<double>(fp.iterations));
  r.metric("d(f(x0), x0)", fp.initial_step);
  r.metric("a posteriori", fp.aposteriori);
  r.check_true("entry condition", fp.entry_ok);
  r.check_eq("a-priori bound violations", static_cast<double>(violations), 0.0);
  r.check_le("worst empirical ratio d(x_n+1,x*)/d(x_n,x*)", worst_ratio, theta + 0.02);
  r.check_le("fixed point vs row-solve oracle", space.distance(fp.fixed_point, reference), 1e-12);
}

void h_series(ScenarioContext& ctx, RunReport& r) {
  const GradedSpace space = ctx.space(GradedSpace::geometric(16, 0.5));
  const double theta = space.geometric_ratio().value_or(0.5);
  const Point c = random_point(space.dim(), -1.0, 1.0, ctx.rng);
  const Point u = random_point(space.dim(), -1.0, 1.0, ctx.rng);
  const ParamMap family = shift_tanh_family(c, u);
  const Point p{ctx.get("p", 0.3)};
  const Point q{1.0};
  const FixedPointReport fp = fixed_point({space, family.at(p), Ball{}, theta, ThetaProvenance::kDeclared},
                                          Point(space.dim()), {1e-15, 10000, EntryPolicy::kEnforce, false});
  const std::size_t k_max = static_cast<std::size_t>(ctx.get_int("terms", 30));
  Table& tab = r.table("h_series", {"t", "k", "norm", "bound"});
  for (double t : ctx.get_list("t", {0.0, 0.1, 0.5})) {
    DerivativeOptions opts;
    opts.theta = theta;
    opts.t = t;
    opts.min_terms = k_max + 1;
    const DerivativeReport d =
        fixed_point_directional_derivative(space, family, p, fp.fixed_point, q, DerivativeMethod::kHSeries, opts);
    const double cst = d.series_constant;
    std::size_t violations = 0;
    for (std::size_t k = 0; k <= k_max && k < d.term_norms.size(); ++k) {
      const double bound = std::pow(theta, static_cast<double>(k)) * cst;
      if (!(d.term_norms[k] <= bound + 1e-12 * cst)) ++violations;
      tab.rows.push_back({t, static_cast<double>(k), d.term_norms[k], bound});
    }
    const std::string tag = "t=" + format_double(t);
    r.metric(tag + " C", cst);
    r.metric(tag + " tail bound", d.tail_bound);
    r.check_ge(tag + " terms computed", static_cast<double>(d.term_norms.size()), static_cast<double>(k_max + 1));
    r.check_eq(tag + " violations of ||h_k|| <= theta^k C", static_cast<double>(violations), 0.0);
  }
}

void special_certification(ScenarioContext& ctx, RunReport& r) {
  const GradedSpace space = ctx.space(GradedSpace::geometric(12, 0.5));
  const double theta = space.geometric_ratio().value_or(0.5);
  const Map f = shift_tanh(1.0, random_point(space.dim(), -1.0, 1.0, ctx.rng));
  const Ball domain{};
  CertificationOptions diff;
  diff.pairs = static_cast<std::size_t>(ctx.get_int("pairs", 1000));
  const SpecialContractionReport d = certify_special_contraction(space, f, domain, theta, ctx.rng, diff);
  CertificationOptions der = diff;
  der.mode = CertificationMode::kDerivative;
  der.pairs = 50;
  const SpecialContractionReport g = certify_special_contraction(space, f, domain, theta, ctx.rng, der);
  const SpecialContractionReport under = certify_special_contraction(space, f, domain, 0.8 * theta, ctx.rng, diff);
  r.metric("difference theta_hat", d.theta_hat);
  r.metric("difference worst scale", d.worst_scale);
  r.metric("derivative theta_hat", g.theta_hat);
  r.check_true("declared theta survives difference sampling", d.passed);
  r.check_true("declared theta survives derivative sampling", g.passed);
  r.check_true("understated theta is rejected", !under.passed);
}

void parametric(ScenarioContext& ctx, RunReport& r) {
  const GradedSpace space = ctx.space(GradedSpace::geometric(12, 0.5));
  const double theta = space.geometric_ratio().value_or(0.5);
  const ParamMap family = shift_tanh_family(random_point(space.dim(), -1.0, 1.0, ctx.rng),
                                            random_point(space.dim(), -1.0, 1.0, ctx.rng));
  std::vector<Point> grid;
  for (double p : uniform_grid(-1.0, 1.0, static_cast<std::size_t>(ctx.get_int("points", 41)))) grid.push_back(Point{p});
  const ParametricTable table = parametric_fixed_points(space, family, grid, Point(space.dim()), Ball{}, theta,
                                                        {1e-13, 10000, EntryPolicy::kEnforce, false});
  Table& t = r.table("parametric", {"p", "iterations", "aposteriori", "neighbour_distance", "neighbour_bound"});
  std::size_t continuity = 0;
  double worst = 0.0;
  for (const ParametricRow& row : table.rows) {
    if (!row.continuity_ok) ++continuity;
    worst = std::max(worst, space.distance(row.fixed_point, family(row.parameter, row.fixed_point)));
    t.rows.push_back({row.parameter[0], static_cast<double>(row.iterations), row.aposteriori, row.neighbour_distance,
                      row.neighbour_bound});
  }
  r.check_eq("open-set exits", static_cast<double>(table.exits()), 0.0);
  r.check_eq("continuity bound violations", static_cast<double>(continuity), 0.0);
  r.check_le("max d(x_p, f(p, x_p))", worst, 1e-12);
}

}  // namespace

void register_contraction_scenarios(Registry& r) {
  r.add({"fixed-point-apriori", "Banach iteration for c + S tanh(x) against the a-priori bound",
         {"contraction_engine"}, 4, apriori});
  r.add({"h-series-decay", "geometric decay of the derivative series terms", {"contraction_engine"}, 8, h_series});
  r.add({"special-contraction-certification", "sampled special contraction constant vs declared theta",
         {"contraction_engine"}, 0, special_certification});
  r.add({"parametric-fixed-points", "fixed points over a parameter grid with continuity bounds",
         {"contraction_engine"}, 0, parametric});
}

}  // namespace frechet::runner::detail
