#pragma once

#include <cmath>
#include <vector>

#include "frechet/frechet.hpp"
#include "frechet/runner/scenario.hpp"

namespace frechet::runner::detail {

void register_metric_scenarios(Registry& r);
void register_operator_scenarios(Registry& r);
void register_contraction_scenarios(Registry& r);
void register_inverse_scenarios(Registry& r);
void register_global_scenarios(Registry& r);
void register_ode_scenarios(Registry& r);

/// (S x)_i = x_{i-1}.
inline Point shift_of(const Point& x) {
  Point y(x.size());
  for (std::size_t i = 1; i < x.size(); ++i) y[i] = x[i - 1];
  return y;
}

inline Point tanh_of(const Point& x) {
  Point y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::tanh(x[i]);
  return y;
}

/// x |-> offset + coef * S tanh(x).
inline Map shift_tanh(double coef, Point offset) {
  Map m;
  m.eval = [coef, offset](const Point& x) { return offset + coef * shift_of(tanh_of(x)); };
  m.jvp = [coef](const Point& x, const Point& v) {
    Point w(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double c = std::cosh(x[i]);
      w[i] = v[i] / (c * c);
    }
    return coef * shift_of(w);
  };
  return m;
}

/// x |-> x - coef * S tanh(x).
inline Map id_minus_shift_tanh(double coef) {
  const Map g = shift_tanh(coef, Point());
  Map m;
  m.eval = [coef](const Point& x) { return x - coef * shift_of(tanh_of(x)); };
  m.jvp = [g](const Point& x, const Point& v) { return v - g.jvp(x, v); };
  return m;
}

inline Point random_point(std::size_t dim, double lo, double hi, Rng& rng) {
  Point p(dim);
  for (std::size_t i = 0; i < dim; ++i) p[i] = rng.uniform(lo, hi);
  return p;
}

inline std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

inline double max_abs_diff(const Point& a, const Point& b) { return (a - b).max_abs(); }

}  // namespace frechet::runner::detail
