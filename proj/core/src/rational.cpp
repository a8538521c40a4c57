#include "frechet/rational.hpp"

#include <cstdlib>
#include <limits>
#include <numeric>

#include "frechet/error.hpp"

namespace frechet {
namespace {

__extension__ typedef __int128 Wide;

Wide wide_gcd(Wide a, Wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Rational make(Wide num, Wide den) {
  if (den == 0) throw Error(ErrorKind::kNumeric, "rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const Wide g = wide_gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  constexpr Wide lo = std::numeric_limits<std::int64_t>::min() + 1;
  constexpr Wide hi = std::numeric_limits<std::int64_t>::max();
  if (num < lo || num > hi || den > hi) throw Error(ErrorKind::kNumeric, "rational overflow");
  return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
  if (den == 0) throw Error(ErrorKind::kNumeric, "rational with zero denominator");
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  const std::int64_t g = std::gcd(num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  return make(Wide(a.num_) * b.den_ + Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return make(Wide(a.num_) * b.den_ - Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return make(Wide(a.num_) * b.num_, Wide(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw Error(ErrorKind::kNumeric, "rational division by zero");
  return make(Wide(a.num_) * b.den_, Wide(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  return Wide(a.num_) * b.den_ <=> Wide(b.num_) * a.den_;
}

Rational abs(const Rational& r) { return r.num() < 0 ? Rational(-r.num(), r.den()) : r; }

Rational exact_gauge_norm(const std::vector<Rational>& weights, const std::vector<Rational>& x,
                          SeminormMode seminorms, MetricMode metric) {
  if (weights.size() != x.size()) throw Error(ErrorKind::kStructural, "exact_gauge_norm dimension mismatch");
  Rational acc(0);
  Rational running(0);
  for (std::size_t n = 0; n < x.size(); ++n) {
    Rational p = abs(x[n]);
    if (seminorms == SeminormMode::kCumulativeMax) {
      if (running < p) running = p;
      p = running;
    }
    const Rational term = weights[n] * (p / (Rational(1) + p));
    if (metric == MetricMode::kSupForm) {
      if (acc < term) acc = term;
    } else {
      acc = acc + term;
    }
  }
  return acc;
}

}  // namespace frechet
