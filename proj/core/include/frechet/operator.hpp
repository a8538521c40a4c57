#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frechet/metric.hpp"
#include "frechet/point.hpp"
#include "frechet/rng.hpp"

namespace frechet {

/// Row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const std::vector<double>& data() const noexcept { return data_; }

  Point apply(const Point& x) const;
  double max_abs_diff(const DenseMatrix& other) const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// One diagonal of a banded operator: entries A(j + offset, j) for j = 0, 1, ...
/// (offset > 0 is below the main diagonal).
struct Band {
  int offset = 0;
  std::vector<double> values;
};

/// Structured linear map between two truncated spaces.
///
/// Operators are immutable handles onto a shared expression tree; sums and
/// compositions record their operands so that norm certificates can follow
/// the inequality chain.
class LinearOperator {
 public:
  enum class Kind { kDense, kBanded, kWeightedShift, kDiagonal, kIdentity, kZero, kScaled, kSum, kComposition };

  static LinearOperator identity(const GradedSpace& space);
  static LinearOperator zero(const GradedSpace& domain, const GradedSpace& codomain);
  static LinearOperator zero(const GradedSpace& space) { return zero(space, space); }
  /// c * S^power with (S x)_{i} = x_{i-1}, so S e_j = e_{j+1}.
  static LinearOperator shift(const GradedSpace& space, std::size_t power = 1, double coefficient = 1.0);
  static LinearOperator diagonal(const GradedSpace& space, std::vector<double> entries);
  static LinearOperator dense(const GradedSpace& domain, const GradedSpace& codomain, DenseMatrix matrix);
  static LinearOperator dense(const GradedSpace& space, DenseMatrix matrix) { return dense(space, space, std::move(matrix)); }
  static LinearOperator banded(const GradedSpace& space, std::vector<Band> bands);

  Kind kind() const noexcept;
  const GradedSpace& domain() const noexcept;
  const GradedSpace& codomain() const noexcept;

  Point apply(const Point& x) const;
  Point operator()(const Point& x) const { return apply(x); }

  /// Dense form, built column by column from apply(e_j). Limited to dim <= 512.
  DenseMatrix materialize() const;

  std::string describe() const;

  // Structure accessors (valid only for the matching kind).
  std::size_t shift_power() const;
  double coefficient() const;  // shift coefficient or scale factor
  const std::vector<double>& diagonal_entries() const;
  const DenseMatrix& matrix() const;
  const std::vector<Band>& bands() const;
  /// Operands of a sum (lhs, rhs), composition (outer, inner) or scaled operator (inner, inner).
  std::pair<LinearOperator, LinearOperator> operands() const;

 private:
  struct Node;
  explicit LinearOperator(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;

  friend LinearOperator compose(const LinearOperator& outer, const LinearOperator& inner);
  friend LinearOperator add(const LinearOperator& a, const LinearOperator& b);
  friend LinearOperator scale(double c, const LinearOperator& a);
};

/// outer o inner.
LinearOperator compose(const LinearOperator& outer, const LinearOperator& inner);
LinearOperator add(const LinearOperator& a, const LinearOperator& b);
LinearOperator scale(double c, const LinearOperator& a);
LinearOperator subtract(const LinearOperator& a, const LinearOperator& b);

inline constexpr std::size_t kMaxMaterializeDim = 512;

struct NormCertificate {
  enum class Kind { kExact, kUpper, kLower };
  Kind kind = Kind::kUpper;
  double value = 0.0;
  std::string method;

  bool is_upper_bound() const noexcept { return kind != Kind::kLower; }
  bool is_lower_bound() const noexcept { return kind != Kind::kUpper; }
};

std::string_view to_string(NormCertificate::Kind kind);

struct SamplingBudget {
  std::size_t n_rays = 64;     // random rays in addition to every basis ray
  std::size_t n_scales = 49;   // logarithmic sweep points
  double scale_min = 1e-6;
  double scale_max = 1e6;
};

/// Exact metric operator norm for whitelisted structures (identity, zero, weighted
/// shift on geometric weights, diagonal with coordinate-abs seminorms, scaled identity).
std::optional<NormCertificate> closed_form_norm(const LinearOperator& a);

/// Upper certificate from the inequality chain (sum -> sum, composition -> product,
/// scaling by c -> max{1,|c|}) tightened by the entrywise bound
/// max_i v_i sum_{j: A_ij != 0} max{1, |A_ij|} / w_j on the materialization.
NormCertificate upper_norm_certificate(const LinearOperator& a);

/// Exact certificate when a closed form exists, otherwise the upper certificate.
NormCertificate operator_gauge_norm(const LinearOperator& a);

/// Sampled lower certificate: max of ||A(s u)|| / ||s u|| over every basis ray and
/// `n_rays` random rays u, each swept over `n_scales` logarithmic scales s.
NormCertificate operator_gauge_norm(const LinearOperator& a, const SamplingBudget& budget, Rng& rng);

struct NeumannResult {
  LinearOperator inverse;     // sum_{n <= K} (id - A)^n
  double tail_bound = 0.0;    // theta^{K+1} / (1 - theta)
  double max_residual_ratio = 0.0;  // max over samples of ||A R x - x|| / ||x||
  std::size_t samples = 0;
};

/// Truncated Neumann series for A^{-1}. `theta` certifies ||id - A|| <= theta < 1;
/// the residual bound ||A R x - x|| <= tail_bound * ||x|| is asserted on `samples`
/// random vectors (kContractViolation on failure).
NeumannResult neumann_inverse(const LinearOperator& a, std::size_t terms, double theta, Rng& rng,
                              std::size_t samples = 100);

/// True iff (A e_j)_i == 0 for all i < j + shift (0-based), i.e. A maps each
/// filtration level k into level k + shift. Requires coordinate-abs seminorms.
bool filtration_shift(const LinearOperator& a, std::size_t shift);

}  // namespace frechet
