#include "frechet/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "frechet/error.hpp"

namespace frechet {
namespace {

constexpr double kWindowSlack = 1e-12;
constexpr double kRawTol = 1e-15;

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void check_times(const OdeProblem& pr, double t1, double t2) {
  if (!(pr.t_hi - pr.t_lo <= 1.0 + kWindowSlack)) {
    throw Error(ErrorKind::kPrecondition, "window too large: diameter " + num(pr.t_hi - pr.t_lo) +
                                              " exceeds 1; halve the window and use the flow property");
  }
  for (double t : {t1, t2}) {
    if (t < pr.t_lo - kWindowSlack || t > pr.t_hi + kWindowSlack) {
      throw Error(ErrorKind::kPrecondition, "time " + num(t) + " outside the window [" + num(pr.t_lo) + ", " +
                                                num(pr.t_hi) + "]");
    }
  }
}

double max_raw_change(const GridCurve& a, const GridCurve& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, (a[k] - b[k]).max_abs());
  return m;
}

double max_raw(const GridCurve& a) {
  double m = 0.0;
  for (const Point& v : a.values()) m = std::max(m, v.max_abs());
  return m;
}

struct EtaSolve {
  GridCurve eta;
  std::size_t iterations = 0;
  double entry_lhs = 0.0;
  double entry_rhs = 0.0;
};

EtaSolve solve_eta(const OdeProblem& pr, double t1, double t2, const Point& x1, const Point& p) {
  const GradedSpace& space = pr.space;
  GridCurve eta = GridCurve::zero(space, pr.grid);
  GridCurve next = volterra_apply(pr, t1, t2, x1, p, eta);
  EtaSolve out{eta, 0, next.max_norm(), std::numeric_limits<double>::infinity()};
  if (!std::isinf(pr.state_ball.radius)) {
    const Point c = pr.state_ball.center.empty() ? Point(space.dim()) : pr.state_ball.center;
    out.entry_rhs = (1.0 - pr.theta) * (pr.state_ball.radius - space.distance(x1, c));
    if (!(out.entry_lhs <= out.entry_rhs)) {
      throw Error(ErrorKind::kPrecondition, "window too large: d(V(0), 0) = " + num(out.entry_lhs) +
                                                " exceeds (1-theta) r = " + num(out.entry_rhs) + "; halve the window");
    }
  }
  for (;;) {
    const double change = max_raw_change(next, eta);
    eta = std::move(next);
    ++out.iterations;
    if (change <= kRawTol * (1.0 + max_raw(eta))) break;
    if (out.iterations >= pr.max_iter) throw Error(ErrorKind::kNumeric, "Picard iteration did not converge");
    next = volterra_apply(pr, t1, t2, x1, p, eta);
  }
  out.eta = std::move(eta);
  return out;
}

}  // namespace

Point OdeRhs::dx(double t, const Point& x, const Point& p, const Point& v) const {
  if (jvp_x) return jvp_x(t, x, p, v);
  return central_difference([&](const Point& y) { return eval(t, y, p); }, x, v);
}

Point OdeRhs::dp(double t, const Point& x, const Point& p, const Point& q) const {
  if (jvp_p) return jvp_p(t, x, p, q);
  if (q.max_abs() == 0.0) return Point(x.size());
  return central_difference([&](const Point& r) { return eval(t, x, r); }, p, q);
}

GridCurve pushforward(const std::function<Point(double, const Point&)>& f, const GridCurve& gamma, const Ball& domain) {
  std::vector<Point> out;
  out.reserve(gamma.size());
  for (std::size_t k = 0; k < gamma.size(); ++k) {
    if (!domain.contains(gamma.space(), gamma[k])) {
      throw Error(ErrorKind::kContractViolation, "curve leaves the state domain at node " + std::to_string(k));
    }
    out.push_back(f(gamma.node(k), gamma[k]));
  }
  return GridCurve(gamma.space(), std::move(out));
}

GridCurve pushforward_jacobian_apply(const OdeRhs& f, const GridCurve& gamma, const Point& p, const GridCurve& eta,
                                     const Point& q) {
  if (eta.size() != gamma.size()) throw Error(ErrorKind::kStructural, "grid curves on different grids");
  std::vector<Point> out;
  out.reserve(gamma.size());
  for (std::size_t k = 0; k < gamma.size(); ++k) {
    const double t = gamma.node(k);
    out.push_back(f.dx(t, gamma[k], p, eta[k]) + f.dp(t, gamma[k], p, q));
  }
  return GridCurve(gamma.space(), std::move(out));
}

GridCurve volterra_apply(const OdeProblem& problem, double t1, double t2, const Point& x1, const Point& p,
                         const GridCurve& eta) {
  check_times(problem, t1, t2);
  const double delta = t2 - t1;
  const Ball& u = problem.state_ball;
  auto g = [&](double sigma, const Point& w) { return delta * problem.rhs(t1 + sigma * delta, w + x1, p); };
  std::vector<Point> vals;
  vals.reserve(eta.size());
  for (std::size_t k = 0; k < eta.size(); ++k) {
    const Point state = eta[k] + x1;
    if (!u.contains(problem.space, state)) {
      throw Error(ErrorKind::kContractViolation, "state leaves U1 at curve node " + std::to_string(k));
    }
    vals.push_back(g(eta.node(k), eta[k]));
  }
  return cumulative_integral(GridCurve(eta.space(), std::move(vals)));
}

double OdeSolution::distance(const GradedSpace& space, const std::vector<Point>& other) const {
  if (other.size() != states.size()) throw Error(ErrorKind::kStructural, "solutions on different output grids");
  double m = 0.0;
  for (std::size_t k = 0; k < states.size(); ++k) m = std::max(m, space.distance(states[k], other[k]));
  return m;
}

std::vector<Point> time_derivative(const std::vector<double>& t, const std::vector<Point>& y) {
  const std::size_t n = t.size();
  if (n < 3 || y.size() != n) throw Error(ErrorKind::kPrecondition, "time derivative needs at least three samples");
  std::vector<Point> d(n);
  {
    const double a = t[1] - t[0];
    const double b = t[2] - t[1];
    d[0] = (-(2 * a + b) / (a * (a + b))) * y[0] + ((a + b) / (a * b)) * y[1] + (-a / (b * (a + b))) * y[2];
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double h1 = t[k] - t[k - 1];
    const double h2 = t[k + 1] - t[k];
    d[k] = (-h2 / (h1 * (h1 + h2))) * y[k - 1] + ((h2 - h1) / (h1 * h2)) * y[k] + (h1 / (h2 * (h1 + h2))) * y[k + 1];
  }
  {
    const double a = t[n - 2] - t[n - 3];
    const double b = t[n - 1] - t[n - 2];
    d[n - 1] = (b / (a * (a + b))) * y[n - 3] + (-(a + b) / (a * b)) * y[n - 2] + ((a + 2 * b) / (b * (a + b))) * y[n - 1];
  }
  return d;
}

OdeSolution ode_solve(const OdeProblem& problem, double t1, const Point& x1, const Point& p,
                      const std::vector<double>& output_times) {
  problem.space.require_sup_form("ode_solve");
  problem.space.check(x1);
  if (!(problem.theta >= 0.0 && problem.theta < 1.0)) throw Error(ErrorKind::kPrecondition, "theta must lie in [0,1)");
  OdeSolution sol;
  sol.times = output_times;
  sol.entry_rhs = std::numeric_limits<double>::infinity();
  for (double t2 : output_times) {
    if (t2 == t1) {
      check_times(problem, t1, t2);
      sol.states.push_back(x1);
      continue;
    }
    EtaSolve s = solve_eta(problem, t1, t2, x1, p);
    sol.max_picard_iterations = std::max(sol.max_picard_iterations, s.iterations);
    sol.entry_lhs = std::max(sol.entry_lhs, s.entry_lhs);
    sol.entry_rhs = std::min(sol.entry_rhs, s.entry_rhs);
    sol.states.push_back(x1 + s.eta.back());
  }
  if (output_times.size() >= 3) {
    const std::vector<Point> d = time_derivative(output_times, sol.states);
    for (std::size_t k = 0; k < d.size(); ++k) {
      const double r = problem.space.norm(d[k] - problem.rhs(output_times[k], sol.states[k], p));
      sol.residuals.push_back(r);
      sol.max_residual = std::max(sol.max_residual, r);
    }
  }
  sol.residual_ok = sol.max_residual <= problem.tol_ode;
  return sol;
}

std::vector<Point> solution_parameter_derivative(const OdeProblem& problem, double t1, const Point& x1,
                                                 const Point& p, const Point& dx1, const Point& dp,
                                                 const std::vector<double>& output_times) {
  const GradedSpace& space = problem.space;
  std::vector<Point> out;
  out.reserve(output_times.size());
  for (double t2 : output_times) {
    if (t2 == t1) {
      out.push_back(dx1);
      continue;
    }
    const GridCurve eta = solve_eta(problem, t1, t2, x1, p).eta;
    const double delta = t2 - t1;
    // Inhomogeneous part Delta * (f_x . dx1 + f_p . dp) is fixed along the iteration.
    std::vector<Point> base(eta.size());
    for (std::size_t k = 0; k < eta.size(); ++k) {
      const double t = t1 + eta.node(k) * delta;
      base[k] = delta * (problem.rhs.dx(t, eta[k] + x1, p, dx1) + problem.rhs.dp(t, eta[k] + x1, p, dp));
    }
    GridCurve zeta = GridCurve::zero(space, problem.grid);
    for (std::size_t it = 0;; ++it) {
      std::vector<Point> integrand(eta.size());
      for (std::size_t k = 0; k < eta.size(); ++k) {
        const double t = t1 + eta.node(k) * delta;
        integrand[k] = base[k] + delta * problem.rhs.dx(t, eta[k] + x1, p, zeta[k]);
      }
      GridCurve next = cumulative_integral(GridCurve(space, std::move(integrand)));
      const double change = max_raw_change(next, zeta);
      zeta = std::move(next);
      if (change <= kRawTol * (1.0 + max_raw(zeta))) break;
      if (it >= problem.max_iter) throw Error(ErrorKind::kNumeric, "linearised Picard iteration did not converge");
    }
    out.push_back(dx1 + zeta.back());
  }
  return out;
}

UniquenessReport uniqueness_check(const OdeProblem& problem, const std::vector<Point>& gamma, double gamma_residual,
                                  const std::vector<Point>& eta, double eta_residual) {
  if (gamma.size() != eta.size()) throw Error(ErrorKind::kStructural, "solutions on different output grids");
  UniquenessReport r;
  for (std::size_t k = 0; k < gamma.size(); ++k) r.distance = std::max(r.distance, problem.space.distance(gamma[k], eta[k]));
  r.bound = (gamma_residual + eta_residual) / (1.0 - problem.theta);
  r.ok = r.distance <= r.bound;
  return r;
}

}  // namespace frechet
