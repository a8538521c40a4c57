#include "frechet/maps.hpp"

#include <cmath>

#include "frechet/error.hpp"

namespace frechet {

Point central_difference(const std::function<Point(const Point&)>& f, const Point& x, const Point& v, double step) {
  const double scale = v.max_abs();
  if (scale == 0.0) return Point(f(x).size());
  const Point u = (1.0 / scale) * v;
  const Point hu = step * u;
  if (hu.max_abs() == 0.0) throw Error(ErrorKind::kNumeric, "finite-difference step underflow");
  return (scale / (2.0 * step)) * (f(x + hu) - f(x - hu));
}

Point Map::derivative(const Point& x, const Point& v) const {
  if (jvp) return jvp(x, v);
  return central_difference(eval, x, v);
}

Point ParamMap::derivative(const Point& p, const Point& x, const Point& q, const Point& y) const {
  if (jvp) return jvp(p, x, q, y);
  const double scale = std::max(q.max_abs(), y.max_abs());
  if (scale == 0.0) return Point(eval(p, x).size());
  const double h = kCentralDifferenceStep / scale;
  const Point plus = eval(p + h * q, x + h * y);
  const Point minus = eval(p - h * q, x - h * y);
  return (1.0 / (2.0 * h)) * (plus - minus);
}

Map ParamMap::at(const Point& p) const {
  Map m;
  auto f = eval;
  m.eval = [f, p](const Point& x) { return f(p, x); };
  if (jvp) {
    auto d = jvp;
    m.jvp = [d, p](const Point& x, const Point& v) { return d(p, x, Point(p.size()), v); };
  }
  return m;
}

Point difference_quotient(const ParamMap& f, const Point& p, const Point& x, const Point& q, const Point& y,
                          double t) {
  if (std::abs(t) > kQuotientMinStep) return (1.0 / t) * (f(p + t * q, x + t * y) - f(p, x));
  return f.derivative(p, x, q, y);
}

LinearOperator jacobian(const Map& f, const GradedSpace& space, const Point& x) {
  const std::size_t n = space.dim();
  DenseMatrix m(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const Point col = f.derivative(x, Point::basis(n, j));
    if (col.size() != n) throw Error(ErrorKind::kStructural, "jacobian: map changes dimension");
    for (std::size_t i = 0; i < n; ++i) m(i, j) = col[i];
  }
  return LinearOperator::dense(space, std::move(m));
}

}  // namespace frechet
