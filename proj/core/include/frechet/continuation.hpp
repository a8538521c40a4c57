#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "frechet/error.hpp"
#include "frechet/inverse.hpp"

namespace frechet {

struct StepControl {
  double initial = 1.0 / 16.0;
  double floor = 1.0 / 1024.0;
  double max_step = 1.0;
  std::size_t grow_after = 3;  // consecutive successes before doubling
};

struct LiftOptions {
  double sigma = 0.0;          // uniform Lipschitz bound of f - id along the path
  double chart_radius = 0.05;  // radius of every local chart
  double tol = 1e-12;          // residual tolerance of each local inversion
  std::size_t max_iter = 10000;
  StepControl steps;
  std::size_t derivative_samples = 65;  // samples of ||gamma'|| used for L
};

/// Curve t |-> gamma(t) in F on [0,1] with its velocity.
struct PathSpec {
  std::function<Point(double)> at;
  std::function<Point(double)> velocity;
};

struct LiftStep {
  double t = 0.0;
  double step = 0.0;
  double residual = 0.0;          // ||f(eta(t)) - gamma(t)||
  double preimage_norm = 0.0;     // ||eta(t)||
  double increment = 0.0;         // ||eta(t) - eta(t_prev)||
  double increment_bound = 0.0;   // M (||gamma(t) - gamma(t_prev)|| + residuals)
  double trace_bound = 0.0;       // M L |t - t_prev|
  bool increment_ok = false;
  bool trace_ok = false;
};

struct LiftState {
  double t = 0.0;
  Point preimage;
  double step = 0.0;
  double m = 0.0;  // sup ||(f')^-1||
};

struct LiftResult {
  std::vector<LiftStep> steps;
  std::vector<Point> preimages;  // eta at every accepted t, starting with x0
  Point endpoint;
  double m = 0.0;
  double l = 0.0;                // max sampled ||gamma'||
  std::size_t rejections = 0;
  std::size_t increment_violations = 0;
  std::size_t trace_violations = 0;
  double worst_trace_ratio = 0.0;  // max increment / (M L |t - s|)
  double max_residual = 0.0;
};

/// Thrown when the step floor is reached; carries the last accepted state.
class LiftStallError : public Error {
 public:
  LiftStallError(const std::string& what, LiftState last) : Error(ErrorKind::kLiftStall, what), last_(std::move(last)) {}
  const LiftState& last_state() const noexcept { return last_; }

 private:
  LiftState last_;
};

/// Lifts gamma through f from x0 (f(x0) = gamma(0)) with A = id charts of
/// Lipschitz remainder sigma; a step is accepted when the local inversion
/// converges inside the chart and its target lies in the guaranteed image ball.
LiftResult lift_curve(const GradedSpace& space, const Map& f, const PathSpec& gamma, const Point& x0, double m,
                      Rng& rng, const LiftOptions& options = {});

/// Lifts the segment from f(x_seed) to z0 and returns the endpoint.
LiftResult global_invert(const GradedSpace& space, const Map& f, const Point& z0, const Point& x_seed, double m,
                         Rng& rng, const LiftOptions& options = {});

struct HomotopyReport {
  std::vector<double> s_grid;
  std::vector<Point> endpoints;  // lift endpoints zeta_s(1)
  double return_distance = 0.0;  // d(zeta_1(1), x0)
  double max_spread = 0.0;       // max_s d(zeta_s(1), x0)
  bool returned = false;         // return_distance <= return_tol
  bool inconclusive = false;     // a lift stalled
  std::string note;
};

/// Lifts Gamma(., s) = z0 + s (gamma(.) - z0) from x0 for s on a uniform grid,
/// where gamma = f o (segment from x0 to y0) and z0 = f(x0).
HomotopyReport homotopy_injectivity_probe(const GradedSpace& space, const Map& f, const Point& x0, const Point& y0,
                                          double m, std::size_t s_points, double return_tol, Rng& rng,
                                          const LiftOptions& options = {});

}  // namespace frechet
