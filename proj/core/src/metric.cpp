#include "frechet/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "frechet/error.hpp"

namespace frechet {
namespace {

constexpr double kBracketLo = 1e-12;
constexpr double kBracketHi = 1e12;
constexpr int kBisectionSteps = 200;

std::string describe_ray(const Point& x) {
  std::ostringstream os;
  os.precision(6);
  os << "ray(";
  for (std::size_t i = 0; i < x.size() && i < 4; ++i) os << (i ? ", " : "") << x[i];
  if (x.size() > 4) os << ", ...";
  os << ")";
  return os.str();
}

}  // namespace

GradedSpace::GradedSpace(std::vector<double> weights, SeminormMode seminorms, MetricMode metric,
                         std::optional<double> tail_bound)
    : weights_(std::move(weights)), seminorms_(seminorms), metric_(metric) {
  if (weights_.empty()) throw Error(ErrorKind::kStructural, "GradedSpace needs at least one weight");
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
      throw Error(ErrorKind::kConfig, "weight w_" + std::to_string(i + 1) + " must be positive and finite");
    }
    if (i > 0 && !(weights_[i] < weights_[i - 1])) {
      throw Error(ErrorKind::kConfig, "weights must be strictly decreasing (w_" + std::to_string(i + 1) +
                                          " >= w_" + std::to_string(i) + ")");
    }
  }
  if (tail_bound) {
    if (!(*tail_bound >= 0.0) || *tail_bound > weights_.back()) {
      throw Error(ErrorKind::kConfig, "tail_bound must lie in [0, w_N]");
    }
    tail_bound_ = *tail_bound;
  } else if (auto r = geometric_ratio()) {
    tail_bound_ = weights_.back() * *r;
  } else {
    tail_bound_ = weights_.back();
  }
}

GradedSpace GradedSpace::geometric(std::size_t dim, double ratio, SeminormMode seminorms, MetricMode metric) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw Error(ErrorKind::kConfig, "geometric ratio must lie in (0,1)");
  std::vector<double> w(dim);
  double v = 1.0;
  for (std::size_t i = 0; i < dim; ++i) {
    v *= ratio;
    w[i] = v;
  }
  return GradedSpace(std::move(w), seminorms, metric, v * ratio);
}

GradedSpace GradedSpace::dyadic(std::size_t dim, SeminormMode seminorms, MetricMode metric) {
  std::vector<double> w(dim);
  for (std::size_t i = 0; i < dim; ++i) w[i] = std::ldexp(1.0, -static_cast<int>(i + 1));
  double tail = std::ldexp(1.0, -static_cast<int>(dim + 1));
  return GradedSpace(std::move(w), seminorms, metric, tail);
}

std::optional<double> GradedSpace::geometric_ratio() const noexcept {
  const double r = weights_[0];
  if (!(r < 1.0)) return std::nullopt;
  for (std::size_t i = 1; i < weights_.size(); ++i) {
    if (std::abs(weights_[i] / weights_[i - 1] - r) > 1e-12 * r) return std::nullopt;
  }
  return r;
}

double GradedSpace::seminorm(std::size_t level, std::span<const double> x) const {
  if (level >= x.size()) throw Error(ErrorKind::kStructural, "seminorm level out of range");
  if (seminorms_ == SeminormMode::kCoordinateAbs) return std::abs(x[level]);
  double m = 0.0;
  for (std::size_t k = 0; k <= level; ++k) m = std::max(m, std::abs(x[k]));
  return m;
}

double GradedSpace::norm(const Point& x) const {
  if (x.size() != dim()) {
    throw Error(ErrorKind::kStructural,
                "point of dimension " + std::to_string(x.size()) + " in space of dimension " + std::to_string(dim()));
  }
  double acc = 0.0;
  double running = 0.0;
  for (std::size_t n = 0; n < dim(); ++n) {
    double p = std::abs(x[n]);
    if (seminorms_ == SeminormMode::kCumulativeMax) {
      running = std::max(running, p);
      p = running;
    }
    const double term = weights_[n] * saturate(p);
    if (metric_ == MetricMode::kSupForm) {
      acc = std::max(acc, term);
    } else {
      acc += term;
    }
  }
  return acc;
}

double GradedSpace::distance(const Point& x, const Point& y) const {
  require_same_dim(x, y, "GradedSpace::distance");
  return norm(x - y);
}

double GradedSpace::weighted_sup(const Point& x) const {
  check(x);
  double acc = 0.0;
  double running = 0.0;
  for (std::size_t n = 0; n < dim(); ++n) {
    double p = std::abs(x[n]);
    if (seminorms_ == SeminormMode::kCumulativeMax) {
      running = std::max(running, p);
      p = running;
    }
    if (metric_ == MetricMode::kSupForm) {
      acc = std::max(acc, weights_[n] * p);
    } else {
      acc += weights_[n] * p;
    }
  }
  return acc;
}

double GradedSpace::bound() const noexcept {
  if (metric_ == MetricMode::kSupForm) return weights_.front();
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

double GradedSpace::ray_supremum(const Point& direction) const {
  check(direction);
  double acc = 0.0;
  bool seen = false;
  for (std::size_t n = 0; n < dim(); ++n) {
    seen = seen || direction[n] != 0.0;
    const bool active = seminorms_ == SeminormMode::kCumulativeMax ? seen : direction[n] != 0.0;
    if (!active) continue;
    if (metric_ == MetricMode::kSupForm) {
      acc = std::max(acc, weights_[n]);
    } else {
      acc += weights_[n];
    }
  }
  return acc;
}

void GradedSpace::check(const Point& x) const {
  if (x.size() != dim()) {
    throw Error(ErrorKind::kStructural,
                "point of dimension " + std::to_string(x.size()) + " in space of dimension " + std::to_string(dim()));
  }
  if (!x.all_finite()) throw Error(ErrorKind::kNumeric, "point has non-finite coordinates");
}

void GradedSpace::require_sup_form(const char* where) const {
  if (metric_ != MetricMode::kSupForm) {
    throw Error(ErrorKind::kUnsupported, std::string(where) + " requires a sup-form metric");
  }
}

ScalingReport scaling_bound_check(const GradedSpace& space, double t, const Point& x) {
  space.require_sup_form("scaling_bound_check");
  ScalingReport r;
  const double nx = space.norm(x);
  r.lhs = space.norm(t * x);
  r.rhs = std::max(1.0, 2.0 * std::abs(t)) * nx;
  r.ok = r.lhs <= r.rhs;
  if (std::abs(t) <= 1.0) r.ok = r.ok && r.lhs <= nx;
  return r;
}

IntegralReport riemann_integral(const GradedSpace& space, std::span<const Point> samples) {
  if (samples.size() < 2) throw Error(ErrorKind::kPrecondition, "riemann_integral needs at least 2 samples");
  const std::size_t g = samples.size() - 1;
  const double h = 1.0 / static_cast<double>(g);
  IntegralReport r;
  r.value = Point(space.dim());
  for (std::size_t k = 0; k <= g; ++k) {
    space.check(samples[k]);
    const double c = (k == 0 || k == g) ? 0.5 * h : h;
    r.value += c * samples[k];
    r.max_sample_norm = std::max(r.max_sample_norm, space.norm(samples[k]));
  }
  double second = 0.0;
  for (std::size_t k = 1; k < g; ++k) {
    second = std::max(second, space.weighted_sup(samples[k + 1] - 2.0 * samples[k] + samples[k - 1]));
  }
  r.quadrature_slack = second / 12.0;
  r.quadrature_constant = r.quadrature_slack * static_cast<double>(g) * static_cast<double>(g);
  r.value_norm = space.norm(r.value);
  r.bound_ok = r.value_norm <= r.max_sample_norm + r.quadrature_slack;
  return r;
}

double scale_for_norm(const GradedSpace& space, const Point& direction, double target) {
  if (target <= 0.0) return 0.0;
  double lo = kBracketLo;
  double hi = kBracketHi;
  if (space.norm(hi * direction) < target || space.norm(lo * direction) >= target) {
    throw Error(ErrorKind::kNumeric, "norm " + std::to_string(target) + " not reachable inside [1e-12, 1e12] along " +
                                         describe_ray(direction));
  }
  for (int i = 0; i < kBisectionSteps; ++i) {
    const double mid = std::sqrt(lo * hi);
    if (space.norm(mid * direction) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

Point random_direction(std::size_t dim, Rng& rng) {
  Point u(dim);
  for (std::size_t i = 0; i < dim; ++i) u[i] = rng.uniform(-1.0, 1.0);
  return u;
}

namespace {

Point point_at_norm(const GradedSpace& space, const Point& center, const Point& dir, double rho) {
  const double lo_norm = space.norm(kBracketLo * dir);
  if (rho <= lo_norm) return center + (rho / std::max(lo_norm, 1e-300) * kBracketLo) * dir;
  return center + scale_for_norm(space, dir, rho) * dir;
}

}  // namespace

Point sample_in_ball(const GradedSpace& space, const Point& center, double radius, Rng& rng) {
  space.check(center);
  Point dir = random_direction(space.dim(), rng);
  const double cap = std::min(radius, space.ray_supremum(dir) * (1.0 - 1e-9));
  const double rho = rng.uniform() * cap;
  return point_at_norm(space, center, dir, rho);
}

Point sample_on_sphere(const GradedSpace& space, const Point& center, double norm, Rng& rng) {
  space.check(center);
  for (int attempt = 0; attempt < 64; ++attempt) {
    Point dir = random_direction(space.dim(), rng);
    if (norm < space.ray_supremum(dir) * (1.0 - 1e-9)) return point_at_norm(space, center, dir, norm);
  }
  throw Error(ErrorKind::kNumeric, "no sampled ray reaches norm " + std::to_string(norm));
}

StandardizedMetric::StandardizedMetric(GradedSpace base, std::size_t levels)
    : base_(std::move(base)), levels_(levels) {
  base_.require_sup_form("minkowski_standardize");
  if (levels_ == 0) throw Error(ErrorKind::kConfig, "standardisation needs at least one level");
}

double StandardizedMetric::seminorm(std::size_t level, const Point& x) const {
  base_.check(x);
  if (x.max_abs() == 0.0) return 0.0;
  const double radius = std::ldexp(1.0, -static_cast<int>(level + 1));
  double lo = kBracketLo;
  double hi = kBracketHi;
  // Ray stays inside the ball: the Minkowski functional vanishes on it.
  if (base_.norm(hi * x) <= radius) return 0.0;
  if (base_.norm(lo * x) > radius) {
    throw Error(ErrorKind::kNumeric, "Minkowski bisection did not converge on " + describe_ray(x) + " at level " +
                                         std::to_string(level + 1));
  }
  for (int i = 0; i < kBisectionSteps; ++i) {
    const double mid = std::sqrt(lo * hi);
    if (base_.norm(mid * x) <= radius) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 1.0 / lo;
}

double StandardizedMetric::norm(const Point& x) const {
  double acc = 0.0;
  for (std::size_t n = 0; n < levels_; ++n) {
    acc = std::max(acc, std::ldexp(1.0, -static_cast<int>(n + 1)) * saturate(seminorm(n, x)));
  }
  return acc;
}

Standardization minkowski_standardize(const GradedSpace& space, std::size_t levels, std::span<const Point> samples) {
  Standardization out{StandardizedMetric(space, levels), {}};
  QuasiIsometryReport& r = out.report;
  r.bound_m = space.bound();
  r.upper_factor = std::max(4.0, 4.0 * r.bound_m);
  for (const Point& x : samples) {
    const double d = space.norm(x);
    const double big_d = out.metric.norm(x);
    ++r.samples;
    if (!(0.5 * big_d <= d)) ++r.lower_failures;
    if (!(d <= r.upper_factor * big_d)) ++r.upper_failures;
    if (d > 0.0) {
      r.worst_lower_ratio = std::max(r.worst_lower_ratio, 0.5 * big_d / d);
      r.worst_upper_ratio = std::max(r.worst_upper_ratio, d / (r.upper_factor * big_d));
    }
  }
  return out;
}

MeanValueReport mean_value_check(const GradedSpace& space, const std::function<Point(const Point&)>& f,
                                 const std::function<double(const Point&)>& jacobian_norm, const Point& x,
                                 const Point& y, std::size_t samples, double slack) {
  space.require_sup_form("mean_value_check");
  space.check(x);
  space.check(y);
  MeanValueReport r;
  r.lhs = space.norm(f(y) - f(x));
  const std::size_t n = std::max<std::size_t>(samples, 2);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(n - 1);
    r.derivative_sup = std::max(r.derivative_sup, jacobian_norm(x + t * (y - x)));
  }
  r.rhs = space.norm(y - x) * r.derivative_sup;
  r.ok = r.lhs <= r.rhs + slack;
  return r;
}

}  // namespace frechet
