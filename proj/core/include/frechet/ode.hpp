#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "frechet/contraction.hpp"
#include "frechet/curve.hpp"

namespace frechet {

/// Right-hand side f(t, x, p) with optional exact partial differentials.
struct OdeRhs {
  std::function<Point(double t, const Point& x, const Point& p)> eval;
  std::function<Point(double t, const Point& x, const Point& p, const Point& v)> jvp_x;
  std::function<Point(double t, const Point& x, const Point& p, const Point& q)> jvp_p;

  Point operator()(double t, const Point& x, const Point& p) const { return eval(t, x, p); }
  Point dx(double t, const Point& x, const Point& p, const Point& v) const;
  Point dp(double t, const Point& x, const Point& p, const Point& q) const;
};

inline constexpr double kDefaultOdeTol = 1e-4;

struct OdeProblem {
  GradedSpace space;
  OdeRhs rhs;
  double t_lo = 0.0;  // time window J1 = [t_lo, t_hi], diameter <= 1
  double t_hi = 1.0;
  Ball state_ball;    // U1
  double theta = 0.0; // uniform special contraction constant of x |-> f(t, x, p)
  std::size_t grid = 512;
  double tol_ode = kDefaultOdeTol;
  std::size_t max_iter = 10000;
};

/// (f_p)_*(gamma)(tau) = f(tau, gamma(tau)); a node outside `domain` raises kContractViolation.
GridCurve pushforward(const std::function<Point(double, const Point&)>& f, const GridCurve& gamma,
                      const Ball& domain = {});

/// Nodewise df(tau, gamma(tau), p).(eta(tau), q).
GridCurve pushforward_jacobian_apply(const OdeRhs& f, const GridCurve& gamma, const Point& p, const GridCurve& eta,
                                     const Point& q);

/// tau |-> int_0^tau (t2 - t1) f(t1 + sigma (t2 - t1), eta(sigma) + x1, p) dsigma
/// (cumulative trapezoid on the curve grid).
GridCurve volterra_apply(const OdeProblem& problem, double t1, double t2, const Point& x1, const Point& p,
                         const GridCurve& eta);

struct OdeSolution {
  std::vector<double> times;
  std::vector<Point> states;
  std::vector<double> residuals;  // ||Psi'(t) - f(t, Psi(t), p)||_d by finite differences in t
  double max_residual = 0.0;
  std::size_t max_picard_iterations = 0;
  double entry_lhs = 0.0;  // worst d(V(0), 0) over output times
  double entry_rhs = 0.0;  // (1 - theta) * room in U1
  bool residual_ok = false;

  /// max_k d(states_k, other_k).
  double distance(const GradedSpace& space, const std::vector<Point>& other) const;
};

/// Psi(t1, t, x1, p) at every output time t (each within the window, |t - t1| <= 1),
/// by Picard iteration of volterra_apply on the curve grid.
OdeSolution ode_solve(const OdeProblem& problem, double t1, const Point& x1, const Point& p,
                      const std::vector<double>& output_times);

/// Directional derivative of Psi(t1, t, ., .) in direction (dx1, dp), from the
/// linearised curve-space fixed point zeta = DV(eta).zeta + d_(x1,p) V.
std::vector<Point> solution_parameter_derivative(const OdeProblem& problem, double t1, const Point& x1,
                                                 const Point& p, const Point& dx1, const Point& dp,
                                                 const std::vector<double>& output_times);

struct UniquenessReport {
  double distance = 0.0;  // max over output times of d(gamma, eta)
  double bound = 0.0;     // (res_gamma + res_eta) / (1 - theta)
  bool ok = false;
};

/// Compares two solutions through the same (t1, x1, p) given their ODE residuals.
UniquenessReport uniqueness_check(const OdeProblem& problem, const std::vector<Point>& gamma, double gamma_residual,
                                  const std::vector<Point>& eta, double eta_residual);

/// Three-point finite-difference derivative on a (possibly nonuniform) time grid.
std::vector<Point> time_derivative(const std::vector<double>& times, const std::vector<Point>& states);

}  // namespace frechet
