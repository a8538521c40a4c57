#include "frechet/curve.hpp"

#include <algorithm>
#include <cmath>

#include "frechet/error.hpp"

namespace frechet {

GridCurve::GridCurve(GradedSpace space, std::vector<Point> values) : space_(std::move(space)), values_(std::move(values)) {
  if (values_.size() < 2) throw Error(ErrorKind::kPrecondition, "a grid curve needs at least two nodes");
  for (const Point& v : values_) space_.check(v);
}

GridCurve GridCurve::constant(const GradedSpace& space, std::size_t intervals, const Point& value) {
  return GridCurve(space, std::vector<Point>(intervals + 1, value));
}

GridCurve GridCurve::zero(const GradedSpace& space, std::size_t intervals) {
  return constant(space, intervals, Point(space.dim()));
}

GridCurve GridCurve::sample(const GradedSpace& space, std::size_t intervals, const std::function<Point(double)>& fn) {
  std::vector<Point> v;
  v.reserve(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k) v.push_back(fn(static_cast<double>(k) / static_cast<double>(intervals)));
  return GridCurve(space, std::move(v));
}

Point GridCurve::at(double tau) const {
  const double g = static_cast<double>(intervals());
  const double x = std::clamp(tau, 0.0, 1.0) * g;
  const auto k = std::min(static_cast<std::size_t>(x), intervals() - 1);
  const double w = x - static_cast<double>(k);
  if (w == 0.0) return values_[k];
  return (1.0 - w) * values_[k] + w * values_[k + 1];
}

double GridCurve::max_norm() const {
  double m = 0.0;
  for (const Point& v : values_) m = std::max(m, space_.norm(v));
  return m;
}

GridCurve& GridCurve::operator+=(const GridCurve& other) {
  if (other.size() != size()) throw Error(ErrorKind::kStructural, "grid curves on different grids");
  for (std::size_t k = 0; k < size(); ++k) values_[k] += other.values_[k];
  return *this;
}

GridCurve& GridCurve::operator-=(const GridCurve& other) {
  if (other.size() != size()) throw Error(ErrorKind::kStructural, "grid curves on different grids");
  for (std::size_t k = 0; k < size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

GridCurve operator*(double s, GridCurve a) {
  for (Point& v : a.values_) v *= s;
  return a;
}

double curve_distance(const GridCurve& a, const GridCurve& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::kStructural, "grid curves on different grids");
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, a.space().distance(a[k], b[k]));
  return m;
}

namespace {

Point trapezoid(const std::vector<Point>& v) {
  const double h = 1.0 / static_cast<double>(v.size() - 1);
  Point acc(v.front().size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double c = (k == 0 || k + 1 == v.size()) ? 0.5 * h : h;
    acc += c * v[k];
  }
  return acc;
}

}  // namespace

Point integrate(const GridCurve& gamma) { return trapezoid(gamma.values()); }

GridCurve cumulative_integral(const GridCurve& gamma) {
  const double h = 1.0 / static_cast<double>(gamma.intervals());
  std::vector<Point> out;
  out.reserve(gamma.size());
  Point acc(gamma.space().dim());
  out.push_back(acc);
  for (std::size_t k = 1; k < gamma.size(); ++k) {
    acc += (0.5 * h) * (gamma[k - 1] + gamma[k]);
    out.push_back(acc);
  }
  return GridCurve(gamma.space(), std::move(out));
}

GridCurve multiply_by_node(const GridCurve& gamma) {
  std::vector<Point> out;
  out.reserve(gamma.size());
  for (std::size_t k = 0; k < gamma.size(); ++k) out.push_back(gamma.node(k) * gamma[k]);
  return GridCurve(gamma.space(), std::move(out));
}

TensorCurve pullback_by_product(const GridCurve& gamma) {
  TensorCurve t{gamma.space(), {}};
  t.rows.resize(gamma.size());
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    t.rows[i].reserve(gamma.size());
    for (std::size_t j = 0; j < gamma.size(); ++j) t.rows[i].push_back(gamma.at(gamma.node(j) * gamma.node(i)));
  }
  return t;
}

GridCurve integrate_rows(const TensorCurve& tensor) {
  std::vector<Point> out;
  out.reserve(tensor.rows.size());
  for (const auto& row : tensor.rows) out.push_back(trapezoid(row));
  return GridCurve(tensor.space, std::move(out));
}

GridCurve factorized_volterra(const GridCurve& gamma) {
  return multiply_by_node(integrate_rows(pullback_by_product(gamma)));
}

}  // namespace frechet
