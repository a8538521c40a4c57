#include "frechet/point.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "frechet/error.hpp"

namespace frechet {

Point Point::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) {
    throw Error(ErrorKind::kStructural,
                "basis index " + std::to_string(index) + " out of range for dim " + std::to_string(dim));
  }
  Point e(dim);
  e[index] = 1.0;
  return e;
}

bool Point::all_finite() const noexcept {
  return std::all_of(coords_.begin(), coords_.end(), [](double v) { return std::isfinite(v); });
}

double Point::max_abs() const noexcept {
  double m = 0.0;
  for (double v : coords_) m = std::max(m, std::abs(v));
  return m;
}

Point& Point::operator+=(const Point& other) {
  require_same_dim(*this, other, "Point::operator+=");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
  return *this;
}

Point& Point::operator-=(const Point& other) {
  require_same_dim(*this, other, "Point::operator-=");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
  return *this;
}

Point& Point::operator*=(double s) noexcept {
  for (double& v : coords_) v *= s;
  return *this;
}

void require_same_dim(const Point& a, const Point& b, const char* where) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::kStructural, std::string(where) + ": dimension mismatch (" +
                                            std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  }
}

}  // namespace frechet
