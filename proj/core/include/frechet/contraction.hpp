#pragma once

#include <cstddef>
#include <limits>
#include <string_view>
#include <vector>

#include "frechet/maps.hpp"
#include "frechet/metric.hpp"
#include "frechet/rng.hpp"

namespace frechet {

/// Metric ball {x : d(x, center) <= radius} (closed) or < radius (open).
/// An infinite radius denotes the whole space.
struct Ball {
  Point center;
  double radius = std::numeric_limits<double>::infinity();
  bool closed = true;

  bool contains(const GradedSpace& space, const Point& x) const;
};

enum class ThetaProvenance { kDeclared, kDerivativeSampled, kDifferenceSampled };
std::string_view to_string(ThetaProvenance p);

struct ContractionSpec {
  GradedSpace space;
  Map map;
  Ball domain;
  double theta = 0.0;
  ThetaProvenance provenance = ThetaProvenance::kDeclared;
};

enum class EntryPolicy {
  kEnforce,     // precondition error when the ball condition fails
  kOptimistic,  // iterate anyway; only ball escape is fatal
};

struct FixedPointOptions {
  double tol = 1e-10;
  std::size_t max_iter = 10000;
  EntryPolicy entry = EntryPolicy::kEnforce;
  bool keep_iterates = true;
};

inline constexpr double kOpenBallMargin = 1e-12;

struct FixedPointReport {
  Point fixed_point;
  std::size_t iterations = 0;
  double theta = 0.0;
  double initial_step = 0.0;   // d(f(x0), x0)
  double entry_lhs = 0.0;      // d(f(x0), x0)
  double entry_rhs = 0.0;      // (1 - theta) (r - d(x0, center))
  bool entry_ok = false;
  double aposteriori = 0.0;    // d(x*, f(x*))
  std::vector<Point> iterates;  // x_0, x_1, ..., x_n when keep_iterates

  /// theta^n / (1 - theta) * d(f(x0), x0).
  double apriori_bound(std::size_t n) const;
  /// d(x_n, reference) for every kept iterate.
  std::vector<double> errors_to(const GradedSpace& space, const Point& reference) const;
};

/// Banach iteration x_{n+1} = f(x_n) from x0 until d(x_n, f(x_n)) <= tol.
///
/// Entry condition: d(f(x0), x0) <= (1 - theta)(r - d(x0, center)), strict with
/// a 1e-12 margin for open balls. Every iterate is checked against the ball.
FixedPointReport fixed_point(const ContractionSpec& spec, const Point& x0, const FixedPointOptions& options = {});

/// `count` logarithmically spaced scales in [lo, hi].
std::vector<double> log_scales(double lo, double hi, std::size_t count);

enum class CertificationMode {
  kDifference,  // ratios d(s f(x), s f(y)) / d(s x, s y)
  kDerivative,  // sampled lower certificates of ||f'(x)||
};

struct SpecialContractionReport {
  double theta_hat = 0.0;  // largest observed ratio
  double worst_scale = 0.0;
  double declared = 0.0;
  double slack = 0.0;
  std::size_t samples = 0;
  bool passed = false;     // theta_hat < declared + slack
};

struct CertificationOptions {
  CertificationMode mode = CertificationMode::kDifference;
  std::size_t pairs = 1000;
  std::vector<double> scales = log_scales(1e-3, 1e3, 13);
  double slack = 1e-9;
  SamplingBudget derivative_budget{8, 25, 1e-6, 1e6};
};

/// Estimates the special contraction constant of `map` on `domain` from below
/// and compares it with the declared value.
SpecialContractionReport certify_special_contraction(const GradedSpace& space, const Map& map, const Ball& domain,
                                                     double declared_theta, Rng& rng,
                                                     const CertificationOptions& options = {});

// --- parameter-dependent fixed points ---------------------------------------

struct ParametricRow {
  Point parameter;
  Point fixed_point;
  std::size_t iterations = 0;
  double aposteriori = 0.0;
  bool open_set_exit = false;     // entry condition failed from the warm start
  std::ptrdiff_t seeded_from = -1;  // index of the warm-start neighbour, -1 for the seed
  double neighbour_distance = 0.0;  // d(phi(p), phi(neighbour))
  double neighbour_bound = 0.0;     // (d(phi(q), f_p(phi(q))) + aposteriori) / (1 - theta)
  bool continuity_ok = true;
};

struct ParametricTable {
  std::vector<ParametricRow> rows;
  double theta = 0.0;
  std::size_t exits() const;
};

/// Solves x = f(p, x) at every grid parameter in order, warm-starting from the
/// nearest already-solved parameter (Euclidean distance in parameter space).
ParametricTable parametric_fixed_points(const GradedSpace& space, const ParamMap& family,
                                        const std::vector<Point>& grid, const Point& seed, const Ball& domain,
                                        double theta, const FixedPointOptions& options = {});

enum class DerivativeMethod { kLinearFixedPoint, kHSeries, kFiniteDifference };
std::string_view to_string(DerivativeMethod m);

struct DerivativeOptions {
  double theta = 0.0;
  double t = 0.0;                // difference-quotient step for the h-series
  std::size_t min_terms = 0;     // h-series terms computed even after convergence
  std::size_t max_terms = 200;
  double tol = 1e-15;            // raw coordinate change used as the stopping test
  double fd_step = kCentralDifferenceStep;
};

struct DerivativeReport {
  Point value;
  DerivativeMethod method = DerivativeMethod::kLinearFixedPoint;
  std::size_t terms = 0;           // iterations or series terms
  double tail_bound = 0.0;         // theta^{K+1} C / (1 - theta) for the h-series
  double series_constant = 0.0;    // C = ||h_0||
  std::vector<double> term_norms;  // ||h_k||_d
};

/// Derivative of p |-> x_p (the fixed point of f(p, .)) in direction q at p,
/// given x_p.
DerivativeReport fixed_point_directional_derivative(const GradedSpace& space, const ParamMap& family,
                                                    const Point& p, const Point& x_p, const Point& q,
                                                    DerivativeMethod method, const DerivativeOptions& options);

}  // namespace frechet
