#pragma once

#include <functional>
#include <vector>

#include "frechet/operator.hpp"
#include "frechet/point.hpp"

/// Reference computations that share no numerics with the library routines they
/// check: dense LU solves, truncated power series of nilpotent matrices, a
/// classical Runge-Kutta integrator and a damped Newton solver.
namespace frechet::oracle {

Point dense_solve(const DenseMatrix& a, const Point& b);
DenseMatrix dense_inverse(const DenseMatrix& a);
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);

/// e^{tN} = sum_k t^k N^k / k! for nilpotent N (throws if N^dim != 0).
DenseMatrix nilpotent_exponential(const DenseMatrix& n, double t);
/// int_0^t e^{sN} ds = sum_k t^{k+1} N^k / (k+1)!.
DenseMatrix nilpotent_exponential_integral(const DenseMatrix& n, double t);

/// Solution at time t1 + delta of x' = N x + b, x(t1) = x1.
Point linear_ode_solution(const DenseMatrix& n, const Point& b, const Point& x1, double delta);

/// Classical fourth-order Runge-Kutta from (t0, x0) to every output time with
/// steps no larger than `max_step`.
std::vector<Point> rk4(const std::function<Point(double, const Point&)>& rhs, double t0, const Point& x0,
                       const std::vector<double>& times, double max_step = 1e-3);

/// Solves f(x) = c by Newton steps with a forward-difference Jacobian and
/// residual-halving line search in the Euclidean norm, to tol * (1 + |c|).
Point damped_newton(const std::function<Point(const Point&)>& f, const Point& c, Point x0, double tol = 1e-14,
                    int max_iter = 200);

/// Exact preimage of c under x |-> x - coef * S tanh(x): x_0 = c_0,
/// x_i = c_i + coef * tanh(x_{i-1}).
Point shift_tanh_preimage(const Point& c, double coef = 1.0);

}  // namespace frechet::oracle
