#include <algorithm>
#include <cmath>
#include <limits>

#include "frechet/oracles.hpp"
#include "scenarios_internal.hpp"

namespace frechet::runner::detail {
namespace {

Point sin_of(const Point& x) {
  Point y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::sin(x[i]);
  return y;
}

/// f(p, x) = x - S tanh(x) - p_0 u.
ParamMap tanh_problem(const Point& u) {
  ParamMap f;
  f.eval = [u](const Point& p, const Point& x) { return x - shift_of(tanh_of(x)) - p[0] * u; };
  f.jvp = [u](const Point&, const Point& x, const Point& q, const Point& y) {
    Point w(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double c = std::cosh(x[i]);
      w[i] = y[i] / (c * c);
    }
    return y - shift_of(w) - q[0] * u;
  };
  return f;
}

/// f(p, x) = x - S sin(x + p_0 v).
ParamMap sin_problem(const Point& v) {
  ParamMap f;
  f.eval = [v](const Point& p, const Point& x) { return x - shift_of(sin_of(x + p[0] * v)); };
  f.jvp = [v](const Point& p, const Point& x, const Point& q, const Point& y) {
    Point w(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) w[i] = std::cos(x[i] + p[0] * v[i]) * (y[i] + q[0] * v[i]);
    return y - shift_of(w);
  };
  return f;
}

/// Fixed-point form x = x - f(p, x) + z0 of f(p, x) = z0.
ParamMap fixed_point_form(const ParamMap& f, const Point& z0) {
  ParamMap g;
  g.eval = [f, z0](const Point& p, const Point& x) { return x - f(p, x) + z0; };
  g.jvp = [f](const Point& p, const Point& x, const Point& q, const Point& y) { return y - f.derivative(p, x, q, y); };
  return g;
}

void implicit_case(const std::string& tag, const GradedSpace& space, const ParamMap& f, ScenarioContext& ctx,
                   RunReport& r) {
  const double sigma = space.geometric_ratio().value_or(0.5);
  const Point p0{0.0};
  const Point y0 = random_point(space.dim(), -1.0, 1.0, ctx.rng);
  const Point z0 = f(p0, y0);
  std::vector<Point> grid;
  for (double p : uniform_grid(-1.0, 1.0, static_cast<std::size_t>(ctx.get_int("grid_points", 50)))) grid.push_back(Point{p});
  ImplicitOptions opts;
  opts.sigma = sigma;
  opts.tol = ctx.get("tol", 1e-13);
  const ImplicitSolution sol = implicit_solve(space, f, p0, y0, z0, grid, opts);
  r.check_eq(tag + " grid points", static_cast<double>(sol.rows.size()), static_cast<double>(grid.size()));
  r.check_eq(tag + " excluded grid points", static_cast<double>(sol.excluded()), 0.0);
  r.check_le(tag + " max residual ||f(p, lambda(p)) - z0||", sol.max_residual(), 1e-10);
  Table& t = r.table("implicit_" + tag, {"p", "residual", "iterations", "lambda_norm"});
  for (const ImplicitRow& row : sol.rows) {
    t.rows.push_back({row.parameter[0], row.residual, static_cast<double>(row.iterations), space.norm(row.lambda)});
  }

  const Point p{ctx.get("derivative_at", 0.3)};
  const Point q{1.0};
  const ImplicitSolution at = implicit_solve(space, f, p0, y0, z0, {p}, opts);
  const Point lambda = at.rows.front().lambda;
  const ParamMap g = fixed_point_form(f, z0);
  DerivativeOptions d;
  d.theta = sigma;
  d.tol = 1e-16;
  const Point lin = fixed_point_directional_derivative(space, g, p, lambda, q, DerivativeMethod::kLinearFixedPoint, d).value;
  const Point ser = fixed_point_directional_derivative(space, g, p, lambda, q, DerivativeMethod::kHSeries, d).value;
  DerivativeOptions dfd = d;
  dfd.tol = 1e-15;
  const Point fd = fixed_point_directional_derivative(space, g, p, lambda, q, DerivativeMethod::kFiniteDifference, dfd).value;
  const DenseMatrix jx = jacobian(f.at(p), space, lambda).materialize();
  const Point oracle_value = -1.0 * oracle::dense_solve(jx, f.derivative(p, lambda, q, Point(space.dim())));
  const double three_way = std::max({max_abs_diff(lin, ser), max_abs_diff(lin, fd), max_abs_diff(ser, fd)});
  r.metric(tag + " |linear - series|", max_abs_diff(lin, ser));
  r.metric(tag + " |linear - fd|", max_abs_diff(lin, fd));
  r.metric(tag + " |series - fd|", max_abs_diff(ser, fd));
  r.check_le(tag + " derivative three-way agreement", three_way, 1e-6);
  r.check_le(tag + " derivative vs dense solve", max_abs_diff(lin, oracle_value), 1e-9);
  const Point identity_rhs = f.derivative(p, lambda, q, lin);
  r.check_le(tag + " f'(p, lambda).(q, lambda'.q) == 0", identity_rhs.max_abs(), 1e-12);
}

void implicit(ScenarioContext& ctx, RunReport& r) {
  const GradedSpace space = ctx.space(GradedSpace::geometric(16, 0.5));
  implicit_case("tanh", space, tanh_problem(random_point(space.dim(), -1.0, 1.0, ctx.rng)), ctx, r);
  implicit_case("sin", space, sin_problem(random_point(space.dim(), -1.0, 1.0, ctx.rng)), ctx, r);
}

void ball_image(ScenarioContext& ctx, RunReport& r) {
  const GradedSpace space = ctx.space(GradedSpace::geometric(16, 0.5));
  const double sigma = space.geometric_ratio().value_or(0.5);
  const LinearOperator id = LinearOperator::identity(space);
  ChartOptions co;
  co.declared_sigma = sigma;
  co.tol = 1e-13;
  const InverseChart chart =
      build_chart(space, id_minus_shift_tanh(1.0), id, id, Point(space.dim()), std::numeric_limits<double>::infinity(),
                  ctx.rng, co);
  r.metric("a", chart.lower);
  r.metric("b", chart.upper);
  r.metric("sigma sampled", chart.sigma_sampled);
  r.check_true("chart certified", chart.certified);
  const Point y = random_point(space.dim(), -1.0, 1.0, ctx.rng);
  const std::size_t probes = static_cast<std::size_t>(ctx.get_int("probes", 200));
  Table& t = r.table("ball_image", {"s", "lower_used", "upper_used", "inner_failures", "outer_failures", "two_sided_failures"});
  for (double s : ctx.get_list("radii", {0.1, 0.3})) {
    const BallImageReport b = ball_image_bounds(chart, y, s, probes, ctx.rng);
    const std::string tag = "s=" + format_double(s);
    r.check_eq(tag + " inner probes", static_cast<double>(b.inner_probes), static_cast<double>(probes));
    r.check_eq(tag + " outer probes", static_cast<double>(b.outer_probes), static_cast<double>(probes));
    r.check_eq(tag + " inner failures", static_cast<double>(b.inner_failures), 0.0);
    r.check_eq(tag + " outer failures", static_cast<double>(b.outer_failures), 0.0);
    r.check_eq(tag + " two-sided bound failures", static_cast<double>(b.two_sided_failures), 0.0);
    if (!b.witness.empty()) r.notes.push_back(tag + ": " + b.witness);
    t.rows.push_back({s, b.lower_used, b.upper_used, static_cast<double>(b.inner_failures),
                      static_cast<double>(b.outer_failures), static_cast<double>(b.two_sided_failures)});
  }
  const double s = ctx.get("falsify_radius", 0.1);
  const BallImageReport inflated = ball_image_bounds(chart, y, s, probes, ctx.rng, 1.05 * chart.upper, 0.95 * chart.lower);
  r.metric("falsification inner failures", static_cast<double>(inflated.inner_failures));
  r.metric("falsification outer failures", static_cast<double>(inflated.outer_failures));
  r.check_ge("inflated inner constant a' = 1.05 b is refuted", static_cast<double>(inflated.inner_failures), 1.0);
  r.check_ge("deflated outer constant b' = 0.95 a is refuted", static_cast<double>(inflated.outer_failures), 1.0);
  t.rows.push_back({s, inflated.lower_used, inflated.upper_used, static_cast<double>(inflated.inner_failures),
                    static_cast<double>(inflated.outer_failures), static_cast<double>(inflated.two_sided_failures)});
}

void preconditioned(ScenarioContext& ctx, RunReport& r) {
  const GradedSpace space = ctx.space(GradedSpace::geometric(12, 0.5));
  const std::size_t n = space.dim();
  std::vector<double> diag(n);
  std::vector<double> diag_inv(n);
  for (std::size_t i = 0; i < n; ++i) {
    diag[i] = 1.5 + 0.5 * std::sin(static_cast<double>(i));
    diag_inv[i] = 1.0 / diag[i];
  }
  const Point u = random_point(n, -1.0, 1.0, ctx.rng);
  // f(p, x) = D x - S tanh(x) - p_0 u
  ParamMap f;
  f.eval = [diag, u](const Point& p, const Point& x) {
    Point dx = x;
    for (std::size_t i = 0; i < x.size(); ++i) dx[i] *= diag[i];
    return dx - shift_of(tanh_of(x)) - p[0] * u;
  };
  f.jvp = [diag, u](const Point&, const Point& x, const Point& q, const Point& y) {
    Point dy = y;
    Point w(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      dy[i] *= diag[i];
      const double c = std::cosh(x[i]);
      w[i] = y[i] / (c * c);
    }
    return dy - shift_of(w) - q[0] * u;
  };
  const LinearOperator id = LinearOperator::identity(space);
  const LinearOperator a = LinearOperator::diagonal(space, diag);
  const LinearOperator a_inv = LinearOperator::diagonal(space, diag_inv);
  const Preconditioner pre{id, id, a, a_inv, id, id};
  std::vector<std::pair<Point, Point>> pts;
  for (int i = 0; i < 20; ++i) pts.emplace_back(Point{ctx.rng.uniform(-1.0, 1.0)}, random_point(n, -3.0, 3.0, ctx.rng));
  const ConditionEvidence ev = precondition_condition(space, f, pre, pts);
  r.metric("condition lhs", ev.lhs);
  r.metric("condition rhs", ev.rhs);
  r.metric("theta", ev.theta);
  r.check_true("preconditioning condition", ev.ok);

  const TransformedMap tm = precondition_transform(space, f, pre);
  const Point p0{0.0};
  const Point x0 = random_point(n, -1.0, 1.0, ctx.rng);
  const Point c = f(p0, x0);
  std::vector<Point> grid;
  for (double p : uniform_grid(-1.0, 1.0, 21)) grid.push_back(Point{p});
  ImplicitOptions opts;
  opts.sigma = std::min(ev.theta, 0.999);
  opts.tol = 1e-13;
  const ImplicitSolution sol = implicit_solve(space, tm.h, p0, tm.from_original(x0), tm.transform_target(c), grid, opts);
  double worst_newton = 0.0;
  double worst_residual = 0.0;
  for (const ImplicitRow& row : sol.rows) {
    const Point x = tm.to_original(row.lambda);
    worst_residual = std::max(worst_residual, space.norm(f(row.parameter, x) - c));
    const Point ref = oracle::damped_newton([&](const Point& z) { return f(row.parameter, z); }, c, x0);
    worst_newton = std::max(worst_newton, max_abs_diff(x, ref));
  }
  r.check_eq("excluded", static_cast<double>(sol.excluded()), 0.0);
  r.check_le("max residual in original coordinates", worst_residual, 1e-10);
  r.check_le("max deviation from Newton oracle", worst_newton, 1e-8);
}

void parametric(ScenarioContext& ctx, RunReport& r) {
  const GradedSpace space = ctx.space(GradedSpace::geometric(8, 0.5));
  const std::size_t n = space.dim();
  const double sigma = space.geometric_ratio().value_or(0.5);
  const double radius = ctx.get("radius", 0.2);
  const Point u = 0.05 * random_point(n, -1.0, 1.0, ctx.rng);
  const ParamMap f = tanh_problem(u);
  const Point x0(n);
  const Point z0 = f(Point{0.0}, x0);
  std::vector<Point> grid;
  for (double p : uniform_grid(-1.0, 1.0, static_cast<std::size_t>(ctx.get_int("grid_points", 11)))) grid.push_back(Point{p});

  ChartOptions co;
  co.declared_sigma = sigma;
  co.tol = 1e-13;
  const LinearOperator id = LinearOperator::identity(space);
  const InverseChart chart = build_chart(space, f.at(Point{0.0}), id, id, x0, radius, ctx.rng, co);
  r.metric("a", chart.lower);
  r.metric("r", radius);

  const Point z = z0 + sample_on_sphere(space, Point(n), 0.25 * chart.lower * radius, ctx.rng);
  const ParametricInverse inv = parametric_inverse(f, grid, chart, z, ctx.rng, 5);
  std::size_t flagged = 0;
  double worst_residual = 0.0;
  double worst_oracle = 0.0;
  Table& t = r.table("parametric_inverse", {"p", "residual", "iterations", "flagged", "oracle_distance"});
  for (const ParametricInverseRow& row : inv.rows) {
    const double od = space.distance(row.preimage, oracle::shift_tanh_preimage(z + row.parameter[0] * u, 1.0));
    if (row.flagged) {
      ++flagged;
    } else {
      worst_residual = std::max(worst_residual, row.residual);
      worst_oracle = std::max(worst_oracle, od);
    }
    t.rows.push_back({row.parameter[0], row.residual, static_cast<double>(row.iterations), row.flagged ? 1.0 : 0.0, od});
  }
  r.metric("worst Lipschitz ratio a ||dpsi|| / ||dz||", inv.worst_lipschitz_ratio);
  r.check_eq("flagged grid parameters", static_cast<double>(flagged), 0.0);
  r.check_le("max residual ||f(p, psi(p,z)) - z||", worst_residual, 1e-10);
  r.check_le("max distance to the row-solve oracle", worst_oracle, 1e-9);
  r.check_ge("Lipschitz pairs checked", static_cast<double>(inv.lipschitz_checks), 1.0);
  r.check_eq("pairs violating ||psi(p,z) - psi(p,z')|| <= ||z - z'|| / a", static_cast<double>(inv.lipschitz_violations),
             0.0);

  // Largest sphere radius around z0 whose sampled targets invert for every grid parameter.
  double drift = 0.0;
  for (const Point& p : grid) drift = std::max(drift, space.distance(f(p, x0), z0));
  const std::size_t probes = static_cast<std::size_t>(ctx.get_int("delta_probes", 16));
  auto all_invert = [&](double delta) {
    for (std::size_t k = 0; k < probes; ++k) {
      const Point target = z0 + sample_on_sphere(space, Point(n), delta, ctx.rng);
      const ParametricInverse pi = parametric_inverse(f, grid, chart, target, ctx.rng);
      for (const ParametricInverseRow& row : pi.rows) {
        if (row.flagged) return false;
      }
    }
    return true;
  };
  double lo = 0.0;
  double hi = space.bound();
  for (int it = 0; it < 20; ++it) {
    const double mid = 0.5 * (lo + hi);
    (all_invert(mid) ? lo : hi) = mid;
  }
  const double guaranteed = chart.lower * radius - drift;
  r.metric("max_p ||f(p, x0) - z0||", drift);
  r.metric("empirical delta", lo);
  r.metric("a r - max_p ||f(p, x0) - z0||", guaranteed);
  r.check_ge("empirical delta >= a r - parameter drift", lo, guaranteed);
}

}  // namespace

void register_inverse_scenarios(Registry& r) {
  r.add({"ball-image-inclusions", "B_as(f(y)) in f(B_s(y)) in B_bs(f(y)) for x - S tanh(x)", {"inverse_implicit"}, 6,
         ball_image});
  r.add({"implicit-function", "implicit functions on a 50-point grid with three derivative routes",
         {"inverse_implicit", "contraction_engine"}, 7, implicit});
  r.add({"preconditioned-implicit", "implicit function through the transformed map T^-1 A^-1 f",
         {"inverse_implicit"}, 0, preconditioned});
  r.add({"parametric-inverse", "psi(p, z) on a parameter grid, its 1/a Lipschitz bound and an empirical delta",
         {"inverse_implicit"}, 0, parametric});
}

}  // namespace frechet::runner::detail
