#include "frechet/oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "frechet/error.hpp"

namespace frechet::oracle {
namespace {

Eigen::MatrixXd to_eigen(const DenseMatrix& a) {
  Eigen::MatrixXd m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  }
  return m;
}

DenseMatrix from_eigen(const Eigen::MatrixXd& m) {
  DenseMatrix a(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) a(i, j) = m(i, j);
  }
  return a;
}

Eigen::VectorXd to_eigen(const Point& x) { return Eigen::Map<const Eigen::VectorXd>(x.vec().data(), x.size()); }

Point from_eigen(const Eigen::VectorXd& v) { return Point(std::vector<double>(v.data(), v.data() + v.size())); }

Eigen::MatrixXd nilpotent_series(const DenseMatrix& n, double t, int shift) {
  const Eigen::MatrixXd m = to_eigen(n);
  const auto dim = m.rows();
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(dim, dim);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(dim, dim);
  double coeff = shift == 0 ? 1.0 : t;  // t^{k+shift} / (k+shift)!
  for (Eigen::Index k = 0; k <= dim; ++k) {
    if (power.isZero(0.0)) return acc;
    acc += coeff * power;
    power = power * m;
    coeff *= t / static_cast<double>(k + 1 + shift);
  }
  throw Error(ErrorKind::kPrecondition, "matrix is not nilpotent");
}

}  // namespace

Point dense_solve(const DenseMatrix& a, const Point& b) {
  const Eigen::VectorXd x = to_eigen(a).fullPivLu().solve(to_eigen(b));
  return from_eigen(x);
}

DenseMatrix dense_inverse(const DenseMatrix& a) {
  const Eigen::MatrixXd inv = to_eigen(a).fullPivLu().inverse();
  return from_eigen(inv);
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  const Eigen::MatrixXd m = to_eigen(a) * to_eigen(b);
  return from_eigen(m);
}

DenseMatrix nilpotent_exponential(const DenseMatrix& n, double t) { return from_eigen(nilpotent_series(n, t, 0)); }

DenseMatrix nilpotent_exponential_integral(const DenseMatrix& n, double t) {
  return from_eigen(nilpotent_series(n, t, 1));
}

Point linear_ode_solution(const DenseMatrix& n, const Point& b, const Point& x1, double delta) {
  const Eigen::VectorXd x = nilpotent_series(n, delta, 0) * to_eigen(x1) + nilpotent_series(n, delta, 1) * to_eigen(b);
  return from_eigen(x);
}

std::vector<Point> rk4(const std::function<Point(double, const Point&)>& rhs, double t0, const Point& x0,
                       const std::vector<double>& times, double max_step) {
  std::vector<Point> out;
  out.reserve(times.size());
  double t = t0;
  Point x = x0;
  for (double target : times) {
    if (target < t) throw Error(ErrorKind::kPrecondition, "rk4 output times must be nondecreasing");
    const double span = target - t;
    const auto n = static_cast<long>(std::ceil(span / max_step - 1e-12));
    for (long i = 0; i < n; ++i) {
      const double h = span / static_cast<double>(n);
      const double ti = t + static_cast<double>(i) * h;
      const Point k1 = rhs(ti, x);
      const Point k2 = rhs(ti + 0.5 * h, x + (0.5 * h) * k1);
      const Point k3 = rhs(ti + 0.5 * h, x + (0.5 * h) * k2);
      const Point k4 = rhs(ti + h, x + h * k3);
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    t = target;
    out.push_back(x);
  }
  return out;
}

Point damped_newton(const std::function<Point(const Point&)>& f, const Point& c, Point x0, double tol, int max_iter) {
  const std::size_t n = x0.size();
  Eigen::VectorXd x = to_eigen(x0);
  auto residual = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return to_eigen(f(from_eigen(v))) - to_eigen(c); };
  Eigen::VectorXd r = residual(x);
  const double target = tol * (1.0 + to_eigen(c).norm());
  for (int it = 0; it < max_iter && r.norm() > target; ++it) {
    Eigen::MatrixXd jac(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      const double h = 1e-7 * std::max(1.0, std::abs(x(j)));
      Eigen::VectorXd xp = x;
      xp(j) += h;
      jac.col(j) = (residual(xp) - r) / h;
    }
    const Eigen::VectorXd dx = jac.fullPivLu().solve(-r);
    double step = 1.0;
    for (;;) {
      const Eigen::VectorXd trial = x + step * dx;
      const Eigen::VectorXd rt = residual(trial);
      if (rt.norm() < r.norm() || step < 1e-10) {
        x = trial;
        r = rt;
        break;
      }
      step *= 0.5;
    }
  }
  if (!(r.norm() <= target * 100)) throw Error(ErrorKind::kNumeric, "damped Newton did not converge: residual " + std::to_string(r.norm()));
  return from_eigen(x);
}

Point shift_tanh_preimage(const Point& c, double coef) {
  Point x(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) x[i] = c[i] + (i == 0 ? 0.0 : coef * std::tanh(x[i - 1]));
  return x;
}

}  // namespace frechet::oracle
