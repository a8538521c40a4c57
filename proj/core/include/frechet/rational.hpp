#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "frechet/metric.hpp"

namespace frechet {

/// Exact rational number with 64-bit numerator/denominator; arithmetic throws
/// kNumeric on overflow instead of wrapping.
class Rational {
 public:
  Rational(std::int64_t num = 0, std::int64_t den = 1);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_;
  std::int64_t den_;
};

Rational abs(const Rational& r);

/// Gauge norm evaluated in exact arithmetic (rational weights and coordinates).
Rational exact_gauge_norm(const std::vector<Rational>& weights, const std::vector<Rational>& x,
                          SeminormMode seminorms, MetricMode metric);

}  // namespace frechet
