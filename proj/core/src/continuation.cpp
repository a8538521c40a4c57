#include "frechet/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "frechet/error.hpp"

namespace frechet {
namespace {

constexpr double kBasepointTol = 1e-9;
constexpr double kBoundSlack = 1e-12;

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

LiftResult lift_curve(const GradedSpace& space, const Map& f, const PathSpec& gamma, const Point& x0, double m,
                      Rng& rng, const LiftOptions& options) {
  space.require_sup_form("lift_curve");
  space.check(x0);
  const double base = space.distance(f(x0), gamma.at(0.0));
  if (!(base <= kBasepointTol)) throw Error(ErrorKind::kPrecondition, "f(x0) differs from gamma(0) by " + num(base));
  if (!(m > 0.0)) throw Error(ErrorKind::kPrecondition, "M must be positive");

  LiftResult r;
  r.m = m;
  const std::size_t n_l = std::max<std::size_t>(options.derivative_samples, 2);
  for (std::size_t k = 0; k < n_l; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(n_l - 1);
    r.l = std::max(r.l, space.norm(gamma.velocity(t)));
  }

  const LinearOperator id = LinearOperator::identity(space);
  ChartOptions chart_options;
  chart_options.declared_sigma = options.sigma;
  chart_options.sample_pairs = 0;
  chart_options.tol = options.tol;
  chart_options.max_iter = options.max_iter;
  const InverseChart proto = build_chart(space, f, id, id, x0, options.chart_radius, rng, chart_options);

  double t = 0.0;
  Point x = x0;
  double res_prev = base;
  double step = std::min(options.steps.initial, options.steps.max_step);
  std::size_t successes = 0;
  r.preimages.push_back(x);
  r.max_residual = base;

  while (t < 1.0) {
    const double h = std::min(step, 1.0 - t);
    const double t_next = (1.0 - t <= step) ? 1.0 : t + h;
    const Point c = gamma.at(t_next);
    InverseChart chart = proto;
    chart.x0 = x;
    bool accepted = false;
    InversionResult inv;
    try {
      inv = chart_invert(chart, c, x);
      accepted = inv.guaranteed && inv.residual <= options.tol;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kContractViolation && e.kind() != ErrorKind::kNumeric) throw;
    }
    if (!accepted) {
      ++r.rejections;
      successes = 0;
      step *= 0.5;
      if (step < options.steps.floor) {
        throw LiftStallError("lift stalled at t = " + num(t) + ": step below floor " + num(options.steps.floor),
                             LiftState{t, x, step, m});
      }
      continue;
    }
    LiftStep s;
    s.t = t_next;
    s.step = t_next - t;
    s.residual = inv.residual;
    s.preimage_norm = space.norm(inv.preimage);
    s.increment = space.distance(inv.preimage, x);
    s.increment_bound = m * (space.distance(c, gamma.at(t)) + inv.residual + res_prev);
    s.trace_bound = m * r.l * s.step;
    s.increment_ok = s.increment <= s.increment_bound + kBoundSlack;
    s.trace_ok = s.increment <= s.trace_bound + kBoundSlack;
    if (!s.increment_ok) ++r.increment_violations;
    if (!s.trace_ok) ++r.trace_violations;
    if (s.trace_bound > 0.0) r.worst_trace_ratio = std::max(r.worst_trace_ratio, s.increment / s.trace_bound);
    r.max_residual = std::max(r.max_residual, s.residual);
    r.steps.push_back(s);

    t = t_next;
    x = std::move(inv.preimage);
    res_prev = s.residual;
    r.preimages.push_back(x);
    if (++successes >= options.steps.grow_after) {
      step = std::min(2.0 * step, options.steps.max_step);
      successes = 0;
    }
  }
  r.endpoint = x;
  return r;
}

LiftResult global_invert(const GradedSpace& space, const Map& f, const Point& z0, const Point& x_seed, double m,
                         Rng& rng, const LiftOptions& options) {
  space.check(z0);
  const Point y0 = f(x_seed);
  const Point v = z0 - y0;
  PathSpec segment{[y0, v](double t) { return y0 + t * v; }, [v](double) { return v; }};
  return lift_curve(space, f, segment, x_seed, m, rng, options);
}

HomotopyReport homotopy_injectivity_probe(const GradedSpace& space, const Map& f, const Point& x0, const Point& y0,
                                          double m, std::size_t s_points, double return_tol, Rng& rng,
                                          const LiftOptions& options) {
  const Point z0 = f(x0);
  const Point dir = y0 - x0;
  HomotopyReport rep;
  const std::size_t n = std::max<std::size_t>(s_points, 2);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(n - 1);
    rep.s_grid.push_back(s);
    PathSpec loop{[&, s](double t) { return z0 + s * (f(x0 + t * dir) - z0); },
                  [&, s](double t) { return s * f.derivative(x0 + t * dir, dir); }};
    try {
      const LiftResult lift = lift_curve(space, f, loop, x0, m, rng, options);
      rep.endpoints.push_back(lift.endpoint);
      rep.max_spread = std::max(rep.max_spread, space.distance(lift.endpoint, x0));
    } catch (const LiftStallError& e) {
      rep.inconclusive = true;
      rep.note = e.what();
      return rep;
    }
  }
  rep.return_distance = space.distance(rep.endpoints.back(), x0);
  rep.returned = rep.return_distance <= return_tol;
  return rep;
}

}  // namespace frechet
