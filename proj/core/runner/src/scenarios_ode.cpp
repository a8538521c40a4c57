#include <algorithm>
#include <cmath>

#include "frechet/oracles.hpp"
#include "scenarios_internal.hpp"

namespace frechet::runner::detail {
namespace {

/// f(t, x, p) = S x + p_0 e_1.
OdeRhs linear_rhs(std::size_t dim) {
  const Point e1 = Point::basis(dim, 0);
  OdeRhs f;
  f.eval = [e1](double, const Point& x, const Point& p) { return shift_of(x) + p[0] * e1; };
  f.jvp_x = [](double, const Point&, const Point&, const Point& v) { return shift_of(v); };
  f.jvp_p = [e1](double, const Point&, const Point&, const Point& q) { return q[0] * e1; };
  return f;
}

/// f(t, x, p) = S tanh(x) + p_0 cos(t) e_1.
OdeRhs tanh_rhs(std::size_t dim) {
  const Point e1 = Point::basis(dim, 0);
  OdeRhs f;
  f.eval = [e1](double t, const Point& x, const Point& p) { return shift_of(tanh_of(x)) + (p[0] * std::cos(t)) * e1; };
  f.jvp_x = [](double, const Point& x, const Point&, const Point& v) {
    Point w(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double c = std::cosh(x[i]);
      w[i] = v[i] / (c * c);
    }
    return shift_of(w);
  };
  f.jvp_p = [e1](double t, const Point&, const Point&, const Point& q) { return (q[0] * std::cos(t)) * e1; };
  return f;
}

double max_distance(const GradedSpace& space, const std::vector<Point>& a, const std::vector<Point>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, space.distance(a[k], b[k]));
  return m;
}

double max_raw(const std::vector<Point>& a, const std::vector<Point>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, max_abs_diff(a[k], b[k]));
  return m;
}

void ode_linear(ScenarioContext& ctx, RunReport& r) {
  const GradedSpace space = ctx.space(GradedSpace::geometric(12, 0.5));
  const std::size_t g = ctx.grid_size(512);
  OdeProblem pr{space, linear_rhs(space.dim()), 0.0, 1.0, Ball{}, space.geometric_ratio().value_or(0.5), g};
  const Point x1 = random_point(space.dim(), -1.0, 1.0, ctx.rng);
  const Point p{ctx.get("p", 0.7)};
  const std::vector<double> times = uniform_grid(0.0, 1.0, static_cast<std::size_t>(ctx.get_int("output_times", 65)));
  const DenseMatrix n = LinearOperator::shift(space).materialize();
  const Point b = p[0] * Point::basis(space.dim(), 0);
  std::vector<Point> exact;
  for (double t : times) exact.push_back(oracle::linear_ode_solution(n, b, x1, t));

  const OdeSolution coarse = ode_solve(pr, 0.0, x1, p, times);
  OdeProblem fine_pr = pr;
  fine_pr.grid = 2 * g;
  const OdeSolution fine = ode_solve(fine_pr, 0.0, x1, p, times);
  const double e_coarse = coarse.distance(space, exact);
  const double e_fine = fine.distance(space, exact);
  r.metric("grid", static_cast<double>(g));
  r.metric("error at grid", e_coarse);
  r.metric("error at doubled grid", e_fine);
  r.metric("max Picard iterations", static_cast<double>(coarse.max_picard_iterations));
  r.metric("max FD residual", coarse.max_residual);
  r.check_le("max-metric error vs nilpotent exponential", e_coarse, 1e-6);
  r.check_ge("error reduction on grid doubling", e_fine > 0.0 ? e_coarse / e_fine : INFINITY, 3.5);
  r.check_true("ODE residual within tol_ode", coarse.residual_ok);

  const double t2 = ctx.get("flow_t2", 0.4);
  const double t3 = ctx.get("flow_t3", 0.9);
  const Point direct = ode_solve(pr, 0.0, x1, p, {t3}).states.front();
  const Point mid = ode_solve(pr, 0.0, x1, p, {t2}).states.front();
  const Point chained = ode_solve(pr, t2, mid, p, {t3}).states.front();
  r.metric("flow property distance", space.distance(direct, chained));
  r.check_le("flow property", space.distance(direct, chained), 1e-5);

  const std::vector<Point> dp = solution_parameter_derivative(pr, 0.0, x1, p, Point(space.dim()), Point{1.0}, times);
  std::vector<Point> dp_exact;
  for (double t : times) dp_exact.push_back(oracle::nilpotent_exponential_integral(n, t).apply(Point::basis(space.dim(), 0)));
  r.check_le("parameter derivative vs closed form", max_distance(space, dp, dp_exact), 1e-6);

  Table& t = r.table("ode_linear", {"t", "error_grid", "error_doubled", "residual"});
  for (std::size_t k = 0; k < times.size(); ++k) {
    t.rows.push_back({times[k], space.distance(coarse.states[k], exact[k]), space.distance(fine.states[k], exact[k]),
                      coarse.residuals.empty() ? 0.0 : coarse.residuals[k]});
  }
}

void ode_nonlinear(ScenarioContext& ctx, RunReport& r) {
  const GradedSpace space = ctx.space(GradedSpace::geometric(12, 0.5));
  const std::size_t g = ctx.grid_size(512);
  const OdeRhs rhs = tanh_rhs(space.dim());
  const OdeProblem pr{space, rhs, 0.0, 1.0, Ball{}, space.geometric_ratio().value_or(0.5), g};
  const Point x1 = random_point(space.dim(), -1.0, 1.0, ctx.rng);
  const Point p{ctx.get("p", 0.8)};
  const std::vector<double> times = uniform_grid(0.0, 1.0, static_cast<std::size_t>(ctx.get_int("output_times", 65)));

  const OdeSolution sol = ode_solve(pr, 0.0, x1, p, times);
  const std::vector<Point> ref =
      oracle::rk4([&](double t, const Point& x) { return rhs(t, x, p); }, 0.0, x1, times, ctx.get("oracle_step", 1e-3));
  const double err = sol.distance(space, ref);
  r.metric("max Picard iterations", static_cast<double>(sol.max_picard_iterations));
  r.metric("max FD residual", sol.max_residual);
  r.check_le("max-metric error vs RK4 oracle", err, 1e-6);
  r.check_true("ODE residual within tol_ode", sol.residual_ok);

  const double h = ctx.get("fd_step", 1e-4);
  const Point dx1 = random_point(space.dim(), -1.0, 1.0, ctx.rng);
  const std::vector<Point> d_p = solution_parameter_derivative(pr, 0.0, x1, p, Point(space.dim()), Point{1.0}, times);
  const std::vector<Point> d_x = solution_parameter_derivative(pr, 0.0, x1, p, dx1, Point{0.0}, times);
  const auto fd = [&](const Point& dx, double dpv) {
    const OdeSolution plus = ode_solve(pr, 0.0, x1 + h * dx, Point{p[0] + h * dpv}, times);
    const OdeSolution minus = ode_solve(pr, 0.0, x1 - h * dx, Point{p[0] - h * dpv}, times);
    std::vector<Point> out;
    for (std::size_t k = 0; k < times.size(); ++k) out.push_back((1.0 / (2.0 * h)) * (plus.states[k] - minus.states[k]));
    return out;
  };
  const double err_p = max_raw(d_p, fd(Point(space.dim()), 1.0));
  const double err_x = max_raw(d_x, fd(dx1, 0.0));
  r.metric("derivative in p vs FD", err_p);
  r.metric("derivative in x1 vs FD", err_x);
  r.check_le("parameter derivative vs FD", std::max(err_p, err_x), 1e-5);

  double ref_residual = 0.0;
  const std::vector<Point> d = time_derivative(times, ref);
  for (std::size_t k = 0; k < times.size(); ++k) {
    ref_residual = std::max(ref_residual, space.norm(d[k] - rhs(times[k], ref[k], p)));
  }
  const UniquenessReport u = uniqueness_check(pr, sol.states, sol.max_residual, ref, ref_residual);
  r.metric("uniqueness bound", u.bound);
  r.check_le("uniqueness distance Picard vs oracle", u.distance, 1e-6);
  r.check_true("uniqueness distance within residual bound", u.ok);

  Table& t = r.table("ode_nonlinear", {"t", "error", "residual"});
  for (std::size_t k = 0; k < times.size(); ++k) {
    t.rows.push_back({times[k], space.distance(sol.states[k], ref[k]), sol.residuals.empty() ? 0.0 : sol.residuals[k]});
  }
}

GridCurve random_curve(const GradedSpace& space, std::size_t g, double amplitude, Rng& rng) {
  const Point a = random_point(space.dim(), -amplitude, amplitude, rng);
  const Point b = random_point(space.dim(), -amplitude, amplitude, rng);
  const double w = rng.uniform(1.0, 8.0);
  return GridCurve::sample(space, g, [&](double tau) { return std::cos(w * tau) * a + tau * b; });
}

void curve_operators(ScenarioContext& ctx, RunReport& r) {
  const GradedSpace space = ctx.space(GradedSpace::geometric(8, 0.5));
  const std::size_t g = ctx.grid_size(64);
  const double theta = space.geometric_ratio().value_or(0.5);
  const OdeProblem pr{space, tanh_rhs(space.dim()), 0.0, 1.0, Ball{}, theta, g};
  const Point x1 = random_point(space.dim(), -1.0, 1.0, ctx.rng);
  const Point p{0.5};
  std::size_t factor_failures = 0;
  double worst_special = 0.0;
  double worst_factorized = 0.0;
  const std::size_t pairs = static_cast<std::size_t>(ctx.get_int("pairs", 40));
  for (std::size_t i = 0; i < pairs; ++i) {
    const double amp = std::pow(10.0, ctx.rng.uniform(-2.0, 2.0));
    const GridCurve gamma = random_curve(space, g, amp, ctx.rng);
    const double n = gamma.max_norm();
    if (!(space.norm(integrate(gamma)) <= n + 1e-15)) ++factor_failures;
    if (!(multiply_by_node(gamma).max_norm() <= n + 1e-15)) ++factor_failures;
    const TensorCurve pulled = pullback_by_product(gamma);
    double pulled_max = 0.0;
    for (const auto& row : pulled.rows) {
      for (const Point& v : row) pulled_max = std::max(pulled_max, space.norm(v));
    }
    if (!(pulled_max <= n + 1e-15)) ++factor_failures;
    if (!(integrate_rows(pulled).max_norm() <= n + 1e-15)) ++factor_failures;

    // tau * int_0^1 gamma(sigma tau) dsigma equals int_0^tau gamma on the grid up to quadrature.
    worst_factorized = std::max(worst_factorized, curve_distance(factorized_volterra(gamma), cumulative_integral(gamma)));

    const GridCurve eta = random_curve(space, g, amp, ctx.rng);
    const GridCurve zeta = random_curve(space, g, amp, ctx.rng);
    const GridCurve v_eta = volterra_apply(pr, 0.0, 1.0, x1, p, eta);
    const GridCurve v_zeta = volterra_apply(pr, 0.0, 1.0, x1, p, zeta);
    for (double s : log_scales(1e-3, 1e3, 7)) {
      const double den = curve_distance(s * eta, s * zeta);
      if (den > 0.0) worst_special = std::max(worst_special, curve_distance(s * v_eta, s * v_zeta) / den);
    }
  }
  r.metric("worst factorized vs direct Volterra distance", worst_factorized);
  r.metric("worst special contraction ratio", worst_special);
  r.check_eq("unit-Lipschitz factor failures", static_cast<double>(factor_failures), 0.0);
  r.check_le("Volterra special contraction ratio", worst_special, theta + 1e-12);
}

}  // namespace

void register_ode_scenarios(Registry& r) {
  r.add({"ode-linear", "x' = S x + p e1 against the nilpotent exponential", {"ode_frechet"}, 9, ode_linear});
  r.add({"ode-nonlinear", "x' = S tanh(x) + p cos(t) e1 against RK4, with derivatives and uniqueness",
         {"ode_frechet"}, 10, ode_nonlinear});
  r.add({"curve-operators", "unit-Lipschitz factor operators and the Volterra special contraction",
         {"ode_frechet"}, 0, curve_operators});
}

}  // namespace frechet::runner::detail
