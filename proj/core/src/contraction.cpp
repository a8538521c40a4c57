#include "frechet/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "frechet/error.hpp"

namespace frechet {
namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void require_theta(double theta) {
  if (!(theta >= 0.0 && theta < 1.0)) throw Error(ErrorKind::kPrecondition, "theta must lie in [0,1), got " + num(theta));
}

Point ball_center(const GradedSpace& space, const Ball& ball) {
  return ball.center.empty() ? Point(space.dim()) : ball.center;
}

bool converged(const Point& prev, const Point& next, double tol) {
  return (next - prev).max_abs() <= tol * (1.0 + next.max_abs());
}

}  // namespace

bool Ball::contains(const GradedSpace& space, const Point& x) const {
  if (std::isinf(radius)) return true;
  const double d = space.distance(x, center.empty() ? Point(space.dim()) : center);
  return closed ? d <= radius : d < radius;
}

std::string_view to_string(ThetaProvenance p) {
  switch (p) {
    case ThetaProvenance::kDeclared:
      return "declared";
    case ThetaProvenance::kDerivativeSampled:
      return "derivative-sampled";
    case ThetaProvenance::kDifferenceSampled:
      return "difference-sampled";
  }
  return "?";
}

double FixedPointReport::apriori_bound(std::size_t n) const {
  return std::pow(theta, static_cast<double>(n)) / (1.0 - theta) * initial_step;
}

std::vector<double> FixedPointReport::errors_to(const GradedSpace& space, const Point& reference) const {
  std::vector<double> e;
  e.reserve(iterates.size());
  for (const Point& x : iterates) e.push_back(space.distance(x, reference));
  return e;
}

FixedPointReport fixed_point(const ContractionSpec& spec, const Point& x0, const FixedPointOptions& options) {
  const GradedSpace& space = spec.space;
  space.require_sup_form("fixed_point");
  require_theta(spec.theta);
  space.check(x0);
  if (!spec.domain.contains(space, x0)) throw Error(ErrorKind::kPrecondition, "starting point lies outside the domain ball");

  FixedPointReport r;
  r.theta = spec.theta;
  Point x = x0;
  Point fx = spec.map(x);
  space.check(fx);
  r.initial_step = space.distance(fx, x);
  r.entry_lhs = r.initial_step;
  if (std::isinf(spec.domain.radius)) {
    r.entry_rhs = std::numeric_limits<double>::infinity();
    r.entry_ok = true;
  } else {
    const double room = spec.domain.radius - space.distance(x0, ball_center(space, spec.domain));
    r.entry_rhs = (1.0 - spec.theta) * room;
    r.entry_ok = spec.domain.closed ? r.entry_lhs <= r.entry_rhs : r.entry_lhs <= r.entry_rhs - kOpenBallMargin;
  }
  if (!r.entry_ok && options.entry == EntryPolicy::kEnforce) {
    throw Error(ErrorKind::kPrecondition, "entry condition fails: d(f(x0),x0) = " + num(r.entry_lhs) +
                                              " > (1-theta)(r - d(x0,c)) = " + num(r.entry_rhs));
  }
  if (options.keep_iterates) r.iterates.push_back(x);

  for (;;) {
    const double step = space.distance(fx, x);
    if (step <= options.tol) {
      r.aposteriori = step;
      break;
    }
    if (r.iterations >= options.max_iter) {
      throw Error(ErrorKind::kNumeric, "fixed point iteration did not reach tol " + num(options.tol) + " in " +
                                           std::to_string(options.max_iter) + " steps");
    }
    x = std::move(fx);
    ++r.iterations;
    if (!spec.domain.contains(space, x)) {
      throw Error(ErrorKind::kContractViolation, "iterate " + std::to_string(r.iterations) + " left the domain ball");
    }
    if (options.keep_iterates) r.iterates.push_back(x);
    fx = spec.map(x);
    space.check(fx);
  }
  r.fixed_point = std::move(x);
  return r;
}

std::vector<double> log_scales(double lo, double hi, std::size_t count) {
  if (count == 0) return {};
  if (count == 1) return {lo};
  std::vector<double> s(count);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t k = 0; k < count; ++k) s[k] = std::exp(a + (b - a) * static_cast<double>(k) / static_cast<double>(count - 1));
  return s;
}

SpecialContractionReport certify_special_contraction(const GradedSpace& space, const Map& map, const Ball& domain,
                                                     double declared_theta, Rng& rng,
                                                     const CertificationOptions& options) {
  space.require_sup_form("certify_special_contraction");
  SpecialContractionReport r;
  r.declared = declared_theta;
  r.slack = options.slack;
  const Point center = ball_center(space, domain);
  const double radius = domain.radius;

  if (options.mode == CertificationMode::kDifference) {
    for (std::size_t i = 0; i < options.pairs; ++i) {
      const Point x = sample_in_ball(space, center, radius, rng);
      Point y;
      if (i % 2 == 0) {
        y = sample_in_ball(space, center, radius, rng);
      } else {
        // Nearby pairs probe the derivative.
        y = x + std::pow(10.0, rng.uniform(-6.0, 0.0)) * random_direction(space.dim(), rng);
        if (!domain.contains(space, y)) continue;
      }
      const Point fx = map(x);
      const Point fy = map(y);
      for (double s : options.scales) {
        const double den = space.distance(s * x, s * y);
        if (den == 0.0) continue;
        const double ratio = space.distance(s * fx, s * fy) / den;
        ++r.samples;
        if (ratio > r.theta_hat) {
          r.theta_hat = ratio;
          r.worst_scale = s;
        }
      }
    }
  } else {
    for (std::size_t i = 0; i < options.pairs; ++i) {
      const Point x = sample_in_ball(space, center, radius, rng);
      const NormCertificate c = operator_gauge_norm(jacobian(map, space, x), options.derivative_budget, rng);
      ++r.samples;
      r.theta_hat = std::max(r.theta_hat, c.value);
    }
  }
  r.passed = r.theta_hat < declared_theta + options.slack;
  return r;
}

std::size_t ParametricTable::exits() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const ParametricRow& r) { return r.open_set_exit; }));
}

ParametricTable parametric_fixed_points(const GradedSpace& space, const ParamMap& family,
                                        const std::vector<Point>& grid, const Point& seed, const Ball& domain,
                                        double theta, const FixedPointOptions& options) {
  require_theta(theta);
  ParametricTable table;
  table.theta = theta;
  table.rows.reserve(grid.size());
  FixedPointOptions opts = options;
  opts.keep_iterates = false;
  opts.entry = EntryPolicy::kEnforce;

  for (std::size_t i = 0; i < grid.size(); ++i) {
    ParametricRow row;
    row.parameter = grid[i];
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < i; ++j) {
      if (table.rows[j].open_set_exit) continue;
      const double dp = (grid[j] - grid[i]).max_abs();
      if (dp < best) {
        best = dp;
        row.seeded_from = static_cast<std::ptrdiff_t>(j);
      }
    }
    const Point start = row.seeded_from >= 0 ? table.rows[static_cast<std::size_t>(row.seeded_from)].fixed_point : seed;
    const ContractionSpec spec{space, family.at(grid[i]), domain, theta, ThetaProvenance::kDeclared};
    try {
      FixedPointReport fp = fixed_point(spec, start, opts);
      row.fixed_point = std::move(fp.fixed_point);
      row.iterations = fp.iterations;
      row.aposteriori = fp.aposteriori;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kPrecondition && e.kind() != ErrorKind::kContractViolation) throw;
      row.open_set_exit = true;
      row.fixed_point = start;
    }
    if (!row.open_set_exit && row.seeded_from >= 0) {
      const Point& neighbour = table.rows[static_cast<std::size_t>(row.seeded_from)].fixed_point;
      row.neighbour_distance = space.distance(row.fixed_point, neighbour);
      const double defect = space.distance(neighbour, family(grid[i], neighbour));
      row.neighbour_bound = (defect + row.aposteriori) / (1.0 - theta);
      row.continuity_ok = row.neighbour_distance <= row.neighbour_bound;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string_view to_string(DerivativeMethod m) {
  switch (m) {
    case DerivativeMethod::kLinearFixedPoint:
      return "linear-fixed-point";
    case DerivativeMethod::kHSeries:
      return "h-series";
    case DerivativeMethod::kFiniteDifference:
      return "finite-difference";
  }
  return "?";
}

namespace {

Point iterate_to_fixed_point(const ParamMap& family, const Point& p, Point x, double tol, std::size_t max_iter) {
  for (std::size_t k = 0; k < max_iter; ++k) {
    Point next = family(p, x);
    if (converged(x, next, tol)) return next;
    x = std::move(next);
  }
  throw Error(ErrorKind::kNumeric, "finite-difference fixed point solve did not converge");
}

}  // namespace

DerivativeReport fixed_point_directional_derivative(const GradedSpace& space, const ParamMap& family,
                                                    const Point& p, const Point& x_p, const Point& q,
                                                    DerivativeMethod method, const DerivativeOptions& options) {
  require_theta(options.theta);
  space.check(x_p);
  DerivativeReport r;
  r.method = method;
  const std::size_t dim = space.dim();
  const Point zero_q(q.size());

  switch (method) {
    case DerivativeMethod::kLinearFixedPoint: {
      Point y(dim);
      for (;;) {
        Point next = family.derivative(p, x_p, q, y);
        ++r.terms;
        if (converged(y, next, options.tol)) {
          y = std::move(next);
          break;
        }
        if (r.terms >= 100000) throw Error(ErrorKind::kNumeric, "linear fixed point iteration did not converge");
        y = std::move(next);
      }
      r.value = std::move(y);
      break;
    }
    case DerivativeMethod::kHSeries: {
      const double t = options.t;
      const Point pt = p + t * q;
      Point h = difference_quotient(family, p, x_p, q, Point(dim), t);
      Point sum = h;
      Point xk = x_p;  // f_{p+tq}^{k-1}(x_p)
      r.series_constant = space.norm(h);
      r.term_norms.push_back(r.series_constant);
      std::size_t k = 0;
      while (k < options.max_terms) {
        Point next = difference_quotient(family, pt, xk, zero_q, h, t);
        ++k;
        xk = family(pt, xk);
        r.term_norms.push_back(space.norm(next));
        sum += next;
        const bool small = next.max_abs() <= options.tol * (1.0 + sum.max_abs());
        h = std::move(next);
        if (small && k >= options.min_terms) break;
      }
      r.terms = k + 1;
      r.tail_bound = std::pow(options.theta, static_cast<double>(k + 1)) * r.series_constant / (1.0 - options.theta);
      r.value = std::move(sum);
      break;
    }
    case DerivativeMethod::kFiniteDifference: {
      const double scale = q.max_abs();
      if (scale == 0.0) {
        r.value = Point(dim);
        break;
      }
      const double eps = options.fd_step / scale;
      if ((eps * q).max_abs() == 0.0) throw Error(ErrorKind::kNumeric, "finite-difference step underflow");
      const Point plus = iterate_to_fixed_point(family, p + eps * q, x_p, options.tol, 100000);
      const Point minus = iterate_to_fixed_point(family, p - eps * q, x_p, options.tol, 100000);
      r.value = (1.0 / (2.0 * eps)) * (plus - minus);
      r.terms = 2;
      break;
    }
  }
  return r;
}

}  // namespace frechet
