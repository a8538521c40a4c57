#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "frechet/metric.hpp"
#include "frechet/point.hpp"

namespace frechet {

/// Curve [0,1] -> F sampled on the uniform grid tau_k = k / G, piecewise linear
/// between nodes, with the maximum metric ||gamma||_{d,inf} = max_k ||gamma(tau_k)||_d.
class GridCurve {
 public:
  GridCurve(GradedSpace space, std::vector<Point> values);

  static GridCurve constant(const GradedSpace& space, std::size_t intervals, const Point& value);
  static GridCurve zero(const GradedSpace& space, std::size_t intervals);
  static GridCurve sample(const GradedSpace& space, std::size_t intervals, const std::function<Point(double)>& fn);

  const GradedSpace& space() const noexcept { return space_; }
  std::size_t intervals() const noexcept { return values_.size() - 1; }
  std::size_t size() const noexcept { return values_.size(); }
  double node(std::size_t k) const noexcept { return static_cast<double>(k) / static_cast<double>(intervals()); }

  const Point& operator[](std::size_t k) const { return values_[k]; }
  Point& operator[](std::size_t k) { return values_[k]; }
  const std::vector<Point>& values() const noexcept { return values_; }
  const Point& back() const { return values_.back(); }

  /// Piecewise-linear value at tau in [0,1].
  Point at(double tau) const;
  double max_norm() const;

  GridCurve& operator+=(const GridCurve& other);
  GridCurve& operator-=(const GridCurve& other);
  friend GridCurve operator+(GridCurve a, const GridCurve& b) { return a += b; }
  friend GridCurve operator-(GridCurve a, const GridCurve& b) { return a -= b; }
  friend GridCurve operator*(double s, GridCurve a);

 private:
  GradedSpace space_;
  std::vector<Point> values_;
};

/// max_k d(a(tau_k), b(tau_k)).
double curve_distance(const GridCurve& a, const GridCurve& b);

// --- factor operators on curve space ----------------------------------------

/// I: trapezoid integral over [0,1].
Point integrate(const GridCurve& gamma);
/// tau |-> trapezoid integral over [0, tau_k]; weights at each node sum to tau_k <= 1.
GridCurve cumulative_integral(const GridCurve& gamma);
/// mu: tau_k * gamma(tau_k).
GridCurve multiply_by_node(const GridCurve& gamma);

/// Values on the tensor grid (tau_i, sigma_j); row i is the curried curve sigma |-> g(tau_i, sigma).
struct TensorCurve {
  GradedSpace space;
  std::vector<std::vector<Point>> rows;
};

/// C(m, F) with m(tau, sigma) = sigma * tau: (tau_i, sigma_j) |-> gamma(sigma_j tau_i).
TensorCurve pullback_by_product(const GridCurve& gamma);
/// C([0,1], I) o Phi: integrate each curried row over sigma.
GridCurve integrate_rows(const TensorCurve& tensor);
/// mu o C([0,1], I) o Phi o C(m, F): tau |-> tau * int_0^1 gamma(sigma tau) dsigma.
GridCurve factorized_volterra(const GridCurve& gamma);

}  // namespace frechet
