#pragma once

#include <functional>

#include "frechet/operator.hpp"
#include "frechet/point.hpp"

namespace frechet {

inline constexpr double kCentralDifferenceStep = 1e-5;
inline constexpr double kQuotientMinStep = 1e-7;

/// Evaluable map between truncated spaces with an optional exact differential.
struct Map {
  std::function<Point(const Point&)> eval;
  /// f'(x).v; central differences are used when empty.
  std::function<Point(const Point& x, const Point& v)> jvp;

  Point operator()(const Point& x) const { return eval(x); }
  Point derivative(const Point& x, const Point& v) const;
};

/// Family f(p, x) of maps indexed by a parameter point p.
struct ParamMap {
  std::function<Point(const Point& p, const Point& x)> eval;
  /// Total differential df(p, x).(q, y); central differences are used when empty.
  std::function<Point(const Point& p, const Point& x, const Point& q, const Point& y)> jvp;

  Point operator()(const Point& p, const Point& x) const { return eval(p, x); }
  Point derivative(const Point& p, const Point& x, const Point& q, const Point& y) const;
  /// The map x |-> f(p, x).
  Map at(const Point& p) const;
};

/// Central difference (f(x + h u) - f(x - h u)) / 2h * |v|_inf with u = v / |v|_inf.
Point central_difference(const std::function<Point(const Point&)>& f, const Point& x, const Point& v,
                         double step = kCentralDifferenceStep);

/// f^[1](p, x, q, y, t): the exact difference quotient for |t| > 1e-7, the
/// directional derivative df(p, x).(q, y) otherwise.
Point difference_quotient(const ParamMap& f, const Point& p, const Point& x, const Point& q, const Point& y,
                          double t);

/// Jacobian of `f` at x as a dense operator on `space`.
LinearOperator jacobian(const Map& f, const GradedSpace& space, const Point& x);

}  // namespace frechet
