#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "frechet/contraction.hpp"
#include "frechet/maps.hpp"
#include "frechet/operator.hpp"

namespace frechet {

struct ChartOptions {
  /// Analytic Lipschitz bound for f - A on the chart ball; sampling alone never certifies.
  std::optional<double> declared_sigma;
  std::size_t sample_pairs = 200;
  double tol = 1e-10;
  std::size_t max_iter = 10000;
};

/// Local inverse data for f around x0: f = A + (f - A) with Lip(f - A) <= sigma on B_r(x0).
struct InverseChart {
  GradedSpace space;
  Map f;
  LinearOperator a;
  LinearOperator a_inv;
  Point x0;
  double radius = 0.0;
  double a_norm = 0.0;      // upper certificate for ||A||
  double a_inv_norm = 0.0;  // upper certificate for ||A^-1||
  double sigma = 0.0;       // max(declared, sampled)
  std::optional<double> sigma_declared{};
  double sigma_sampled = 0.0;
  bool certified = false;   // declared bound present and not falsified by sampling
  double lower = 0.0;       // a = 1/||A^-1|| - sigma
  double upper = 0.0;       // b = ||A|| + sigma
  double tol = 1e-10;
  std::size_t max_iter = 10000;

  /// Lip(f^-1) <= 1/a on f(B_r(x0)).
  double inverse_lipschitz() const { return 1.0 / lower; }
  /// sigma * ||A^-1||: contraction constant of the inversion iteration.
  double contraction() const { return sigma * a_inv_norm; }
  /// Same constants and anchor with a different map (uniform charts for families).
  InverseChart with_map(Map g) const;
};

/// Builds a chart; throws kChartInvalid when sigma * ||A^-1|| >= 1.
InverseChart build_chart(const GradedSpace& space, Map f, LinearOperator a, LinearOperator a_inv, Point x0,
                         double radius, Rng& rng, const ChartOptions& options = {});

struct InversionResult {
  Point preimage;
  double residual = 0.0;  // ||f(v) - c||
  std::size_t iterations = 0;
  bool guaranteed = false;  // ||c - f(start)|| < a * (r - d(start, x0))
  double max_contraction_ratio = 0.0;  // observed d(v_{k+2}, v_{k+1}) / d(v_{k+1}, v_k)
};

/// Solves f(v) = c by v <- v - A^-1 (f(v) - c) from `start` (default x0). An
/// iterate leaving B_r(x0) raises kContractViolation.
InversionResult chart_invert(const InverseChart& chart, const Point& c, const std::optional<Point>& start = std::nullopt);

struct BallImageReport {
  double lower_used = 0.0;  // a (or override)
  double upper_used = 0.0;  // b (or override)
  double s = 0.0;
  std::size_t inner_probes = 0;
  std::size_t inner_failures = 0;
  std::size_t outer_probes = 0;
  std::size_t outer_failures = 0;
  std::size_t pair_checks = 0;
  std::size_t two_sided_failures = 0;  // with the chart's own a and b
  std::string witness;                 // first counterexample, empty if none
  bool inner_ok() const noexcept { return inner_failures == 0; }
  bool outer_ok() const noexcept { return outer_failures == 0; }
  bool ok() const noexcept { return inner_ok() && outer_ok() && two_sided_failures == 0; }
};

inline constexpr double kInclusionSlack = 1e-12;

/// Probes B_{as}(f(y)) subset f(B_s(y)) subset B_{bs}(f(y)) with `probes` samples each.
/// `lower_override` / `upper_override` replace a and b in the inclusions (used for
/// falsification probes); the two-sided bound always uses the chart constants.
BallImageReport ball_image_bounds(const InverseChart& chart, const Point& y, double s, std::size_t probes, Rng& rng,
                                  std::optional<double> lower_override = std::nullopt,
                                  std::optional<double> upper_override = std::nullopt);

// --- preconditioning --------------------------------------------------------

struct Preconditioner {
  LinearOperator s, s_inv, a, a_inv, t, t_inv;
  static Preconditioner identity(const GradedSpace& space);
};

struct ConditionEvidence {
  double lhs = 0.0;    // max over samples of an upper bound for ||S (A - f'_p(x)) T||
  double rhs = 0.0;    // 1 / ||(S A T)^-1|| from an upper certificate of ||T^-1 A^-1 S^-1||
  double theta = 0.0;  // ||(S A T)^-1|| * lhs, bound for ||id - h'||
  std::size_t samples = 0;
  bool ok = false;
};

/// h(p, y) = T^-1 A^-1 f(p, T y); solutions of h(p, y) = T^-1 A^-1 c are T^-1 of
/// solutions of f(p, x) = c.
struct TransformedMap {
  ParamMap h;
  Preconditioner pre;
  Point to_original(const Point& y) const { return pre.t.apply(y); }
  Point from_original(const Point& x) const { return pre.t_inv.apply(x); }
  Point transform_target(const Point& c) const { return pre.t_inv.apply(pre.a_inv.apply(c)); }
};

/// Throws kPrecondition unless every operator pair in `pre` is mutually inverse on
/// the truncation (max entry deviation of the products from id <= 1e-10).
TransformedMap precondition_transform(const GradedSpace& space, const ParamMap& f, const Preconditioner& pre);

/// Samples the condition sup ||S (A - f'_p(x)) T|| < 1/||(SAT)^-1|| at the given points.
ConditionEvidence precondition_condition(const GradedSpace& space, const ParamMap& f, const Preconditioner& pre,
                                         const std::vector<std::pair<Point, Point>>& points);

// --- implicit functions and parametric inverses -------------------------------

struct ImplicitOptions {
  double radius = std::numeric_limits<double>::infinity();  // V0 = B_r(y0)
  double sigma = 0.0;                                       // uniform remainder bound over the grid
  double tol = 1e-10;
  std::size_t max_iter = 10000;
};

struct ImplicitRow {
  Point parameter;
  Point lambda;
  double residual = 0.0;  // ||f(p, lambda(p)) - z0||
  std::size_t iterations = 0;
  bool excluded = false;  // inversion escaped V0
};

struct ImplicitSolution {
  std::vector<ImplicitRow> rows;
  Point target;
  double lower = 0.0;  // a for the graph property
  std::size_t excluded() const;
  double max_residual() const;
};

/// lambda(p) with f(p, lambda(p)) = z0 on the grid, using A = id charts
/// v <- v - (f_p(v) - z0). Requires f(p0, y0) = z0 within tol.
ImplicitSolution implicit_solve(const GradedSpace& space, const ParamMap& f, const Point& p0, const Point& y0,
                                const Point& z0, const std::vector<Point>& grid, const ImplicitOptions& options = {});

struct ParametricInverseRow {
  Point parameter;
  Point preimage;
  double residual = 0.0;
  std::size_t iterations = 0;
  bool flagged = false;  // z not reached inside the chart ball
};

struct ParametricInverse {
  std::vector<ParametricInverseRow> rows;
  std::size_t lipschitz_checks = 0;
  std::size_t lipschitz_violations = 0;  // ||psi(p,z) - psi(p,z')|| > ||z - z'|| / a
  double worst_lipschitz_ratio = 0.0;
};

/// psi(p, z) = (f_p restricted to the chart ball)^-1 (z) for every grid parameter,
/// using the chart's uniform constants; `lipschitz_pairs` random z' near z per row
/// check the 1/a Lipschitz bound.
ParametricInverse parametric_inverse(const ParamMap& f, const std::vector<Point>& grid, const InverseChart& chart,
                                     const Point& z, Rng& rng, std::size_t lipschitz_pairs = 0);

}  // namespace frechet
