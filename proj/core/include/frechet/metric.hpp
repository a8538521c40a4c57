#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "frechet/point.hpp"
#include "frechet/rng.hpp"

namespace frechet {

enum class SeminormMode {
  kCoordinateAbs,  // p_n(x) = |x_n|
  kCumulativeMax,  // p_n(x) = max_{k <= n} |x_k|
};

enum class MetricMode {
  kSupForm,  // sup_n w_n p_n / (1 + p_n); absolutely convex balls
  kSumForm,  // sum_n w_n p_n / (1 + p_n); kept only for the non-convexity counterexample
};

/// r / (1 + r), the bounded transform applied to every seminorm value.
inline double saturate(double r) noexcept { return r / (1.0 + r); }

/// Truncated graded sequence space with a translation-invariant standard metric.
///
/// Weights are strictly decreasing and positive. The truncation drops every
/// coordinate past `dim()`, which perturbs sup-form metric values by at most
/// `tail_bound()`.
class GradedSpace {
 public:
  GradedSpace(std::vector<double> weights, SeminormMode seminorms = SeminormMode::kCoordinateAbs,
              MetricMode metric = MetricMode::kSupForm, std::optional<double> tail_bound = std::nullopt);

  /// w_n = ratio^n for n = 1..dim.
  static GradedSpace geometric(std::size_t dim, double ratio,
                               SeminormMode seminorms = SeminormMode::kCoordinateAbs,
                               MetricMode metric = MetricMode::kSupForm);
  /// w_n = 2^-n.
  static GradedSpace dyadic(std::size_t dim, SeminormMode seminorms = SeminormMode::kCoordinateAbs,
                            MetricMode metric = MetricMode::kSupForm);

  std::size_t dim() const noexcept { return weights_.size(); }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double weight(std::size_t i) const { return weights_[i]; }
  SeminormMode seminorm_mode() const noexcept { return seminorms_; }
  MetricMode metric_mode() const noexcept { return metric_; }
  double tail_bound() const noexcept { return tail_bound_; }

  /// Common ratio w_{n+1}/w_n if the weights are geometric with w_1 equal to that ratio.
  std::optional<double> geometric_ratio() const noexcept;

  /// p_{level+1}(x) (level is 0-based).
  double seminorm(std::size_t level, std::span<const double> x) const;

  /// ||x||_d = d(x, 0).
  double norm(const Point& x) const;
  double distance(const Point& x, const Point& y) const;

  /// Linearisation of the sup-form norm at 0: max_n w_n p_n(x). Dominates ||x||_d.
  double weighted_sup(const Point& x) const;

  /// Supremum of all metric values (w_1 for sup-form, sum of weights for sum-form).
  double bound() const noexcept;

  /// lim_{s -> inf} ||s x||_d.
  double ray_supremum(const Point& direction) const;

  /// Throws unless x has this space's dimension and finite entries.
  void check(const Point& x) const;
  /// Throws kUnsupported unless the metric is sup-form.
  void require_sup_form(const char* where) const;

  friend bool operator==(const GradedSpace&, const GradedSpace&) = default;

 private:
  std::vector<double> weights_;
  SeminormMode seminorms_;
  MetricMode metric_;
  double tail_bound_;
};

/// Free-function spelling of GradedSpace::norm.
inline double gauge_norm(const GradedSpace& space, const Point& x) { return space.norm(x); }
inline double distance(const GradedSpace& space, const Point& x, const Point& y) {
  return space.distance(x, y);
}

struct ScalingReport {
  double lhs = 0.0;  // ||t x||
  double rhs = 0.0;  // max{1, 2|t|} ||x||
  bool ok = false;   // includes ||t x|| <= ||x|| when |t| <= 1
};

ScalingReport scaling_bound_check(const GradedSpace& space, double t, const Point& x);

struct IntegralReport {
  Point value;                  // composite trapezoid
  double value_norm = 0.0;
  double max_sample_norm = 0.0;
  double quadrature_constant = 0.0;  // C with |trapezoid - integral| <= C / G^2 in weighted_sup
  double quadrature_slack = 0.0;     // C / G^2
  bool bound_ok = false;             // value_norm <= max_sample_norm + slack
};

/// Weak integral over [0,1] of a curve sampled on a uniform grid (>= 2 samples).
IntegralReport riemann_integral(const GradedSpace& space, std::span<const Point> samples);

// --- ray utilities -------------------------------------------------------

/// Smallest s in the bisection bracket with ||s x|| >= target (s |-> ||s x|| is
/// nondecreasing because balls are absolutely convex). Throws kNumeric when the
/// target lies outside the values reachable inside [1e-12, 1e12].
double scale_for_norm(const GradedSpace& space, const Point& direction, double target);

/// Random direction with coordinates uniform in [-1, 1].
Point random_direction(std::size_t dim, Rng& rng);

/// Sample a point y with ||y - center|| < radius (norm uniform on [0, radius)).
Point sample_in_ball(const GradedSpace& space, const Point& center, double radius, Rng& rng);

/// Sample a point y with ||y - center|| equal to `norm` (up to bisection precision).
Point sample_on_sphere(const GradedSpace& space, const Point& center, double norm, Rng& rng);

// --- standardisation -----------------------------------------------------

/// Standard metric D = d_{2^-n, p} whose seminorms p_n are the Minkowski
/// functionals of the closed d-balls of radius 2^-n, n = 1..levels.
class StandardizedMetric {
 public:
  StandardizedMetric(GradedSpace base, std::size_t levels);

  const GradedSpace& base() const noexcept { return base_; }
  std::size_t levels() const noexcept { return levels_; }

  /// p_n(x) for n = level + 1, by geometric bisection along the ray through x.
  double seminorm(std::size_t level, const Point& x) const;
  double norm(const Point& x) const;

 private:
  GradedSpace base_;
  std::size_t levels_;
};

struct QuasiIsometryReport {
  double bound_m = 0.0;        // M with d <= M
  double upper_factor = 0.0;   // max{4, 4M}
  std::size_t samples = 0;
  std::size_t lower_failures = 0;  // violations of ||x||_D / 2 <= ||x||_d
  std::size_t upper_failures = 0;  // violations of ||x||_d <= max{4,4M} ||x||_D
  double worst_lower_ratio = 0.0;  // max of (||x||_D / 2) / ||x||_d
  double worst_upper_ratio = 0.0;  // max of ||x||_d / (max{4,4M} ||x||_D)
  bool ok() const noexcept { return lower_failures == 0 && upper_failures == 0; }
};

struct Standardization {
  StandardizedMetric metric;
  QuasiIsometryReport report;
};

/// Builds D and checks both quasi-isometry inequalities on `samples` with exact
/// floating-point comparison.
Standardization minkowski_standardize(const GradedSpace& space, std::size_t levels,
                                      std::span<const Point> samples);

// --- mean value estimate ---------------------------------------------------

struct MeanValueReport {
  double lhs = 0.0;             // ||f(y) - f(x)||
  double derivative_sup = 0.0;  // max over sampled t of an upper certificate for ||f'(x + t(y-x))||
  double rhs = 0.0;             // ||y - x|| * derivative_sup
  bool ok = false;
};

/// `jacobian_norm(z)` must return an upper bound for the metric operator norm of f'(z).
MeanValueReport mean_value_check(const GradedSpace& space, const std::function<Point(const Point&)>& f,
                                 const std::function<double(const Point&)>& jacobian_norm,
                                 const Point& x, const Point& y, std::size_t samples,
                                 double slack = 1e-12);

}  // namespace frechet
