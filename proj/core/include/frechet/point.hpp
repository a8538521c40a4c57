#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace frechet {

/// An element of a truncated sequence space: a finite list of real coordinates.
///
/// Coordinates are 0-based in code; the basis vector written e_1 in the
/// mathematical convention is `Point::basis(n, 0)`.
class Point {
 public:
  Point() = default;
  explicit Point(std::size_t dim) : coords_(dim, 0.0) {}
  explicit Point(std::vector<double> coords) : coords_(std::move(coords)) {}
  Point(std::initializer_list<double> coords) : coords_(coords) {}

  static Point basis(std::size_t dim, std::size_t index);
  static Point filled(std::size_t dim, double value) { return Point(std::vector<double>(dim, value)); }

  std::size_t size() const noexcept { return coords_.size(); }
  bool empty() const noexcept { return coords_.empty(); }

  double operator[](std::size_t i) const { return coords_[i]; }
  double& operator[](std::size_t i) { return coords_[i]; }

  std::span<const double> coords() const noexcept { return coords_; }
  std::span<double> coords() noexcept { return coords_; }
  const std::vector<double>& vec() const noexcept { return coords_; }

  auto begin() const noexcept { return coords_.begin(); }
  auto end() const noexcept { return coords_.end(); }

  bool all_finite() const noexcept;
  /// max_i |x_i|; used for raw (non-metric) step sizes.
  double max_abs() const noexcept;

  Point& operator+=(const Point& other);
  Point& operator-=(const Point& other);
  Point& operator*=(double s) noexcept;

  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }
  friend Point operator*(double s, Point a) { return a *= s; }
  friend Point operator*(Point a, double s) { return a *= s; }
  friend Point operator-(Point a) { return a *= -1.0; }

  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::vector<double> coords_;
};

/// Throws a structural error unless `a` and `b` have equal length.
void require_same_dim(const Point& a, const Point& b, const char* where);

}  // namespace frechet
