#include "frechet/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "frechet/error.hpp"

namespace frechet {
namespace {

constexpr double kRawStepTol = 1e-14;
constexpr double kInversePairTol = 1e-10;

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void require_inverse_pair(const LinearOperator& a, const LinearOperator& a_inv, const char* name) {
  const std::size_t n = a.domain().dim();
  const DenseMatrix id = DenseMatrix::identity(n);
  const double d1 = compose(a, a_inv).materialize().max_abs_diff(id);
  const double d2 = compose(a_inv, a).materialize().max_abs_diff(id);
  if (!(std::max(d1, d2) <= kInversePairTol)) {
    throw Error(ErrorKind::kPrecondition, std::string("non-invertible transform: ") + name + " and its inverse differ from id by " +
                                              num(std::max(d1, d2)));
  }
}

struct IterationOutcome {
  Point v;
  double residual = 0.0;
  std::size_t iterations = 0;
  double max_ratio = 0.0;
};

/// v <- v - A^-1 (f(v) - c) until the residual is below tol and the raw step has
/// settled; leaving `domain` raises kContractViolation.
IterationOutcome invert_iteration(const GradedSpace& space, const Map& f, const LinearOperator& a_inv, const Point& c,
                                  Point v, const Ball& domain, double tol, std::size_t max_iter) {
  IterationOutcome out;
  double prev_step = -1.0;
  Point fv = f(v);
  for (;;) {
    const Point r = fv - c;
    out.residual = space.norm(r);
    const Point next = v - a_inv.apply(r);
    const double raw = (next - v).max_abs();
    const double step = space.distance(next, v);
    if (prev_step > 1e-13 && step > 0.0) out.max_ratio = std::max(out.max_ratio, step / prev_step);
    prev_step = step;
    if (out.residual == 0.0 || (out.residual <= tol && raw <= kRawStepTol * (1.0 + v.max_abs()))) break;
    if (out.iterations >= max_iter) {
      throw Error(ErrorKind::kNumeric, "inversion iteration did not converge (residual " + num(out.residual) + ")");
    }
    v = next;
    ++out.iterations;
    if (!domain.contains(space, v)) {
      throw Error(ErrorKind::kContractViolation, "inversion iterate " + std::to_string(out.iterations) +
                                                     " left the chart ball");
    }
    fv = f(v);
    if (!fv.all_finite()) throw Error(ErrorKind::kNumeric, "map returned non-finite values");
  }
  out.v = std::move(v);
  return out;
}

Ball chart_ball(const InverseChart& chart) { return Ball{chart.x0, chart.radius, true}; }

}  // namespace

InverseChart InverseChart::with_map(Map g) const {
  InverseChart c = *this;
  c.f = std::move(g);
  return c;
}

InverseChart build_chart(const GradedSpace& space, Map f, LinearOperator a, LinearOperator a_inv, Point x0,
                         double radius, Rng& rng, const ChartOptions& options) {
  space.require_sup_form("build_chart");
  space.check(x0);
  if (!(radius > 0.0)) throw Error(ErrorKind::kPrecondition, "chart radius must be positive");
  if (!(a.domain() == space) || !(a.codomain() == space) || !(a_inv.domain() == space)) {
    throw Error(ErrorKind::kStructural, "chart operators must act on the chart space");
  }
  require_inverse_pair(a, a_inv, "A");

  InverseChart chart{space, std::move(f), a, a_inv, std::move(x0)};
  chart.radius = radius;
  chart.tol = options.tol;
  chart.max_iter = options.max_iter;
  chart.a_norm = upper_norm_certificate(a).value;
  chart.a_inv_norm = upper_norm_certificate(a_inv).value;
  chart.sigma_declared = options.declared_sigma;

  for (std::size_t i = 0; i < options.sample_pairs; ++i) {
    const Point z = sample_in_ball(space, chart.x0, radius, rng);
    Point y = i % 2 == 0 ? sample_in_ball(space, chart.x0, radius, rng)
                         : z + std::pow(10.0, rng.uniform(-6.0, 0.0)) * random_direction(space.dim(), rng);
    if (!chart_ball(chart).contains(space, y)) continue;
    const double den = space.distance(z, y);
    if (den == 0.0) continue;
    const Point rem = (chart.f(z) - chart.f(y)) - a.apply(z - y);
    chart.sigma_sampled = std::max(chart.sigma_sampled, space.norm(rem) / den);
  }
  chart.sigma = std::max(options.declared_sigma.value_or(0.0), chart.sigma_sampled);
  chart.certified = options.declared_sigma.has_value() && chart.sigma_sampled <= *options.declared_sigma + 1e-12;
  if (!(chart.sigma * chart.a_inv_norm < 1.0)) {
    throw Error(ErrorKind::kChartInvalid, "sigma = " + num(chart.sigma) + " is not below 1/||A^-1|| = " +
                                              num(1.0 / chart.a_inv_norm));
  }
  chart.lower = 1.0 / chart.a_inv_norm - chart.sigma;
  chart.upper = chart.a_norm + chart.sigma;
  return chart;
}

InversionResult chart_invert(const InverseChart& chart, const Point& c, const std::optional<Point>& start) {
  const GradedSpace& space = chart.space;
  space.check(c);
  const Point v0 = start.value_or(chart.x0);
  InversionResult r;
  if (std::isinf(chart.radius)) {
    r.guaranteed = true;
  } else {
    const double room = chart.radius - space.distance(v0, chart.x0);
    r.guaranteed = room > 0.0 && space.distance(c, chart.f(v0)) < chart.lower * room;
  }
  IterationOutcome it = invert_iteration(space, chart.f, chart.a_inv, c, v0, chart_ball(chart), chart.tol, chart.max_iter);
  r.preimage = std::move(it.v);
  r.residual = it.residual;
  r.iterations = it.iterations;
  r.max_contraction_ratio = it.max_ratio;
  return r;
}

BallImageReport ball_image_bounds(const InverseChart& chart, const Point& y, double s, std::size_t probes, Rng& rng,
                                  std::optional<double> lower_override, std::optional<double> upper_override) {
  const GradedSpace& space = chart.space;
  if (!(s > 0.0)) throw Error(ErrorKind::kPrecondition, "ball radius s must be positive");
  if (!std::isinf(chart.radius) && s > chart.radius - space.distance(y, chart.x0) + kInclusionSlack) {
    throw Error(ErrorKind::kPrecondition, "B_s(y) is not contained in the chart ball");
  }
  BallImageReport r;
  r.lower_used = lower_override.value_or(chart.lower);
  r.upper_used = upper_override.value_or(chart.upper);
  r.s = s;
  const Point fy = chart.f(y);

  auto record = [&](const char* what, double value, double bound) {
    if (r.witness.empty()) r.witness = std::string(what) + ": " + num(value) + " vs bound " + num(bound);
  };
  auto two_sided = [&](const Point& z) {
    const double dz = space.distance(z, y);
    const double df = space.distance(chart.f(z), fy);
    ++r.pair_checks;
    if (!(chart.lower * dz <= df + kInclusionSlack) || !(df <= chart.upper * dz + kInclusionSlack)) {
      ++r.two_sided_failures;
      record("two-sided bound", df, chart.lower * dz);
    }
  };

  for (std::size_t i = 0; i < probes; ++i) {
    const Point c = sample_in_ball(space, fy, r.lower_used * s, rng);
    ++r.inner_probes;
    try {
      const InversionResult inv = chart_invert(chart, c, y);
      const double dv = space.distance(inv.preimage, y);
      if (!(dv < s + kInclusionSlack) || !(inv.residual <= chart.tol)) {
        ++r.inner_failures;
        record("inner inclusion, preimage distance", dv, s);
      }
      two_sided(inv.preimage);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kContractViolation && e.kind() != ErrorKind::kNumeric) throw;
      ++r.inner_failures;
      if (r.witness.empty()) r.witness = std::string("inner inclusion: ") + e.what();
    }
  }
  for (std::size_t i = 0; i < probes; ++i) {
    const Point z = sample_in_ball(space, y, s, rng);
    ++r.outer_probes;
    const double df = space.distance(chart.f(z), fy);
    if (!(df < r.upper_used * s + kInclusionSlack)) {
      ++r.outer_failures;
      record("outer inclusion, image distance", df, r.upper_used * s);
    }
    two_sided(z);
  }
  return r;
}

Preconditioner Preconditioner::identity(const GradedSpace& space) {
  const LinearOperator id = LinearOperator::identity(space);
  return Preconditioner{id, id, id, id, id, id};
}

TransformedMap precondition_transform(const GradedSpace& space, const ParamMap& f, const Preconditioner& pre) {
  for (const LinearOperator* op : {&pre.s, &pre.s_inv, &pre.a, &pre.a_inv, &pre.t, &pre.t_inv}) {
    if (!(op->domain() == space) || !(op->codomain() == space)) {
      throw Error(ErrorKind::kStructural, "preconditioner operators must act on the problem space");
    }
  }
  require_inverse_pair(pre.s, pre.s_inv, "S");
  require_inverse_pair(pre.a, pre.a_inv, "A");
  require_inverse_pair(pre.t, pre.t_inv, "T");

  TransformedMap out{{}, pre};
  const auto eval = f.eval;
  out.h.eval = [eval, pre](const Point& p, const Point& y) {
    return pre.t_inv.apply(pre.a_inv.apply(eval(p, pre.t.apply(y))));
  };
  if (f.jvp) {
    const auto jvp = f.jvp;
    out.h.jvp = [jvp, pre](const Point& p, const Point& y, const Point& q, const Point& v) {
      return pre.t_inv.apply(pre.a_inv.apply(jvp(p, pre.t.apply(y), q, pre.t.apply(v))));
    };
  }
  return out;
}

ConditionEvidence precondition_condition(const GradedSpace& space, const ParamMap& f, const Preconditioner& pre,
                                         const std::vector<std::pair<Point, Point>>& points) {
  ConditionEvidence ev;
  const double sat_inv = upper_norm_certificate(compose(pre.t_inv, compose(pre.a_inv, pre.s_inv))).value;
  ev.rhs = sat_inv > 0.0 ? 1.0 / sat_inv : std::numeric_limits<double>::infinity();
  for (const auto& [p, x] : points) {
    const LinearOperator jf = jacobian(f.at(p), space, x);
    const LinearOperator m = compose(pre.s, compose(subtract(pre.a, jf), pre.t));
    const LinearOperator dense = LinearOperator::dense(space, m.materialize());
    ev.lhs = std::max(ev.lhs, upper_norm_certificate(dense).value);
    ++ev.samples;
  }
  ev.theta = sat_inv * ev.lhs;
  ev.ok = ev.lhs < ev.rhs;
  return ev;
}

std::size_t ImplicitSolution::excluded() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const ImplicitRow& r) { return r.excluded; }));
}

double ImplicitSolution::max_residual() const {
  double m = 0.0;
  for (const ImplicitRow& r : rows) {
    if (!r.excluded) m = std::max(m, r.residual);
  }
  return m;
}

namespace {

std::ptrdiff_t nearest_solved(const std::vector<Point>& grid, std::size_t i, const std::vector<bool>& solved) {
  std::ptrdiff_t best = -1;
  double dist = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < i; ++j) {
    if (!solved[j]) continue;
    const double d = (grid[j] - grid[i]).max_abs();
    if (d < dist) {
      dist = d;
      best = static_cast<std::ptrdiff_t>(j);
    }
  }
  return best;
}

}  // namespace

ImplicitSolution implicit_solve(const GradedSpace& space, const ParamMap& f, const Point& p0, const Point& y0,
                                const Point& z0, const std::vector<Point>& grid, const ImplicitOptions& options) {
  space.require_sup_form("implicit_solve");
  space.check(y0);
  space.check(z0);
  const double base = space.distance(f(p0, y0), z0);
  if (!(base <= options.tol)) {
    throw Error(ErrorKind::kPrecondition, "f(p0, y0) differs from z0 by " + num(base));
  }
  if (!(options.sigma >= 0.0 && options.sigma < 1.0)) {
    throw Error(ErrorKind::kChartInvalid, "uniform remainder bound sigma = " + num(options.sigma) + " is not below 1");
  }
  ImplicitSolution sol;
  sol.target = z0;
  sol.lower = 1.0 - options.sigma;
  const LinearOperator id = LinearOperator::identity(space);
  const Ball v0{y0, options.radius, true};
  std::vector<bool> solved(grid.size(), false);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    ImplicitRow row;
    row.parameter = grid[i];
    const std::ptrdiff_t from = nearest_solved(grid, i, solved);
    const Point start = from >= 0 ? sol.rows[static_cast<std::size_t>(from)].lambda : y0;
    try {
      IterationOutcome it = invert_iteration(space, f.at(grid[i]), id, z0, start, v0, options.tol, options.max_iter);
      row.lambda = std::move(it.v);
      row.residual = it.residual;
      row.iterations = it.iterations;
      solved[i] = true;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kContractViolation && e.kind() != ErrorKind::kNumeric) throw;
      row.excluded = true;
      row.lambda = start;
      row.residual = std::numeric_limits<double>::infinity();
    }
    sol.rows.push_back(std::move(row));
  }
  return sol;
}

ParametricInverse parametric_inverse(const ParamMap& f, const std::vector<Point>& grid, const InverseChart& chart,
                                     const Point& z, Rng& rng, std::size_t lipschitz_pairs) {
  const GradedSpace& space = chart.space;
  ParametricInverse out;
  std::vector<bool> solved(grid.size(), false);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    ParametricInverseRow row;
    row.parameter = grid[i];
    const InverseChart cp = chart.with_map(f.at(grid[i]));
    const std::ptrdiff_t from = nearest_solved(grid, i, solved);
    const Point start = from >= 0 ? out.rows[static_cast<std::size_t>(from)].preimage : chart.x0;
    try {
      InversionResult inv = chart_invert(cp, z, start);
      row.preimage = std::move(inv.preimage);
      row.residual = inv.residual;
      row.iterations = inv.iterations;
      solved[i] = true;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kContractViolation && e.kind() != ErrorKind::kNumeric) throw;
      row.flagged = true;
      row.preimage = start;
      row.residual = std::numeric_limits<double>::infinity();
    }
    if (!row.flagged) {
      for (std::size_t k = 0; k < lipschitz_pairs; ++k) {
        const Point z2 = sample_in_ball(space, z, 0.05, rng);
        try {
          const InversionResult inv2 = chart_invert(cp, z2, row.preimage);
          const double dz = space.distance(z, z2);
          const double dpsi = space.distance(row.preimage, inv2.preimage);
          ++out.lipschitz_checks;
          if (dz > 0.0) out.worst_lipschitz_ratio = std::max(out.worst_lipschitz_ratio, dpsi * chart.lower / dz);
          if (!(dpsi <= dz / chart.lower + kInclusionSlack)) ++out.lipschitz_violations;
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::kContractViolation && e.kind() != ErrorKind::kNumeric) throw;
        }
      }
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace frechet
