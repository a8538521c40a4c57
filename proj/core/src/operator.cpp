#include "frechet/operator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "frechet/error.hpp"

namespace frechet {

struct LinearOperator::Node {
  Node(Kind k, GradedSpace d, GradedSpace c) : kind(k), domain(std::move(d)), codomain(std::move(c)) {}

  Kind kind;
  GradedSpace domain;
  GradedSpace codomain;
  std::size_t power = 0;
  double coefficient = 1.0;
  std::vector<double> diag;
  DenseMatrix matrix;
  std::vector<Band> bands;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

double lipschitz_factor(double c) { return std::max(1.0, std::abs(c)); }

std::string fmt_double(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void require_domain(const GradedSpace& space, const Point& x) {
  if (x.size() != space.dim()) {
    throw Error(ErrorKind::kStructural, "operator applied to point of dimension " + std::to_string(x.size()) +
                                            ", expected " + std::to_string(space.dim()));
  }
}

}  // namespace

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Point DenseMatrix::apply(const Point& x) const {
  if (x.size() != cols_) throw Error(ErrorKind::kStructural, "matrix/vector shape mismatch");
  Point y(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) acc += data_[i * cols_ + j] * x[j];
    y[i] = acc;
  }
  return y;
}

double DenseMatrix::max_abs_diff(const DenseMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw Error(ErrorKind::kStructural, "matrix shape mismatch");
  double m = 0.0;
  for (std::size_t k = 0; k < data_.size(); ++k) m = std::max(m, std::abs(data_[k] - other.data_[k]));
  return m;
}

LinearOperator LinearOperator::identity(const GradedSpace& space) {
  return LinearOperator(std::make_shared<const Node>(Kind::kIdentity, space, space));
}

LinearOperator LinearOperator::zero(const GradedSpace& domain, const GradedSpace& codomain) {
  return LinearOperator(std::make_shared<const Node>(Kind::kZero, domain, codomain));
}

LinearOperator LinearOperator::shift(const GradedSpace& space, std::size_t power, double coefficient) {
  Node n(Kind::kWeightedShift, space, space);
  n.power = power;
  n.coefficient = coefficient;
  return LinearOperator(std::make_shared<const Node>(std::move(n)));
}

LinearOperator LinearOperator::diagonal(const GradedSpace& space, std::vector<double> entries) {
  if (entries.size() != space.dim()) throw Error(ErrorKind::kStructural, "diagonal length must equal dim");
  Node n(Kind::kDiagonal, space, space);
  n.diag = std::move(entries);
  return LinearOperator(std::make_shared<const Node>(std::move(n)));
}

LinearOperator LinearOperator::dense(const GradedSpace& domain, const GradedSpace& codomain, DenseMatrix matrix) {
  if (matrix.rows() != codomain.dim() || matrix.cols() != domain.dim()) {
    throw Error(ErrorKind::kStructural, "dense matrix shape does not match domain/codomain");
  }
  Node n(Kind::kDense, domain, codomain);
  n.matrix = std::move(matrix);
  return LinearOperator(std::make_shared<const Node>(std::move(n)));
}

LinearOperator LinearOperator::banded(const GradedSpace& space, std::vector<Band> bands) {
  const auto dim = static_cast<long>(space.dim());
  for (const Band& b : bands) {
    const long len = dim - std::abs(static_cast<long>(b.offset));
    if (len <= 0 || static_cast<long>(b.values.size()) != len) {
      throw Error(ErrorKind::kStructural, "band at offset " + std::to_string(b.offset) + " needs " +
                                              std::to_string(std::max(0L, len)) + " entries");
    }
  }
  Node n(Kind::kBanded, space, space);
  n.bands = std::move(bands);
  return LinearOperator(std::make_shared<const Node>(std::move(n)));
}

LinearOperator::Kind LinearOperator::kind() const noexcept { return node_->kind; }
const GradedSpace& LinearOperator::domain() const noexcept { return node_->domain; }
const GradedSpace& LinearOperator::codomain() const noexcept { return node_->codomain; }

Point LinearOperator::apply(const Point& x) const {
  require_domain(domain(), x);
  const Node& n = *node_;
  const std::size_t out_dim = n.codomain.dim();
  switch (n.kind) {
    case Kind::kIdentity:
      return x;
    case Kind::kZero:
      return Point(out_dim);
    case Kind::kWeightedShift: {
      Point y(out_dim);
      for (std::size_t i = n.power; i < out_dim; ++i) y[i] = n.coefficient * x[i - n.power];
      return y;
    }
    case Kind::kDiagonal: {
      Point y(out_dim);
      for (std::size_t i = 0; i < out_dim; ++i) y[i] = n.diag[i] * x[i];
      return y;
    }
    case Kind::kDense:
      return n.matrix.apply(x);
    case Kind::kBanded: {
      Point y(out_dim);
      for (const Band& b : n.bands) {
        for (std::size_t k = 0; k < b.values.size(); ++k) {
          const std::size_t j = b.offset >= 0 ? k : k - b.offset;
          const std::size_t i = b.offset >= 0 ? k + b.offset : k;
          y[i] += b.values[k] * x[j];
        }
      }
      return y;
    }
    case Kind::kScaled:
      return n.coefficient * LinearOperator(n.lhs).apply(x);
    case Kind::kSum:
      return LinearOperator(n.lhs).apply(x) + LinearOperator(n.rhs).apply(x);
    case Kind::kComposition:
      return LinearOperator(n.lhs).apply(LinearOperator(n.rhs).apply(x));
  }
  throw Error(ErrorKind::kStructural, "unknown operator kind");
}

DenseMatrix LinearOperator::materialize() const {
  const std::size_t cols = domain().dim();
  const std::size_t rows = codomain().dim();
  if (std::max(rows, cols) > kMaxMaterializeDim) {
    throw Error(ErrorKind::kUnsupported, "materialisation limited to dim <= 512");
  }
  if (kind() == Kind::kDense) return node_->matrix;
  DenseMatrix m(rows, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    const Point col = apply(Point::basis(cols, j));
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = col[i];
  }
  return m;
}

std::string LinearOperator::describe() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::kIdentity:
      return "id";
    case Kind::kZero:
      return "0";
    case Kind::kWeightedShift: {
      std::string s = "S";
      if (n.power != 1) s += "^" + std::to_string(n.power);
      return n.coefficient == 1.0 ? s : fmt_double(n.coefficient) + "*" + s;
    }
    case Kind::kDiagonal:
      return "diag[" + std::to_string(n.diag.size()) + "]";
    case Kind::kDense:
      return "dense[" + std::to_string(n.matrix.rows()) + "x" + std::to_string(n.matrix.cols()) + "]";
    case Kind::kBanded:
      return "banded[" + std::to_string(n.bands.size()) + " bands]";
    case Kind::kScaled:
      return fmt_double(n.coefficient) + "*(" + LinearOperator(n.lhs).describe() + ")";
    case Kind::kSum:
      return "(" + LinearOperator(n.lhs).describe() + " + " + LinearOperator(n.rhs).describe() + ")";
    case Kind::kComposition:
      return LinearOperator(n.lhs).describe() + " o " + LinearOperator(n.rhs).describe();
  }
  return "?";
}

std::size_t LinearOperator::shift_power() const {
  if (kind() != Kind::kWeightedShift) throw Error(ErrorKind::kStructural, "not a weighted shift");
  return node_->power;
}

double LinearOperator::coefficient() const {
  if (kind() != Kind::kWeightedShift && kind() != Kind::kScaled) {
    throw Error(ErrorKind::kStructural, "operator has no coefficient");
  }
  return node_->coefficient;
}

const std::vector<double>& LinearOperator::diagonal_entries() const {
  if (kind() != Kind::kDiagonal) throw Error(ErrorKind::kStructural, "not a diagonal operator");
  return node_->diag;
}

const DenseMatrix& LinearOperator::matrix() const {
  if (kind() != Kind::kDense) throw Error(ErrorKind::kStructural, "not a dense operator");
  return node_->matrix;
}

const std::vector<Band>& LinearOperator::bands() const {
  if (kind() != Kind::kBanded) throw Error(ErrorKind::kStructural, "not a banded operator");
  return node_->bands;
}

std::pair<LinearOperator, LinearOperator> LinearOperator::operands() const {
  switch (kind()) {
    case Kind::kSum:
    case Kind::kComposition:
      return {LinearOperator(node_->lhs), LinearOperator(node_->rhs)};
    case Kind::kScaled:
      return {LinearOperator(node_->lhs), LinearOperator(node_->lhs)};
    default:
      throw Error(ErrorKind::kStructural, "leaf operator has no operands");
  }
}

LinearOperator compose(const LinearOperator& outer, const LinearOperator& inner) {
  if (!(inner.codomain() == outer.domain())) {
    throw Error(ErrorKind::kStructural, "compose: codomain of " + inner.describe() + " differs from domain of " +
                                            outer.describe());
  }
  LinearOperator::Node n(LinearOperator::Kind::kComposition, inner.domain(), outer.codomain());
  n.lhs = outer.node_;
  n.rhs = inner.node_;
  return LinearOperator(std::make_shared<const LinearOperator::Node>(std::move(n)));
}

LinearOperator add(const LinearOperator& a, const LinearOperator& b) {
  if (!(a.domain() == b.domain()) || !(a.codomain() == b.codomain())) {
    throw Error(ErrorKind::kStructural, "add: " + a.describe() + " and " + b.describe() + " have different shapes");
  }
  LinearOperator::Node n(LinearOperator::Kind::kSum, a.domain(), a.codomain());
  n.lhs = a.node_;
  n.rhs = b.node_;
  return LinearOperator(std::make_shared<const LinearOperator::Node>(std::move(n)));
}

LinearOperator scale(double c, const LinearOperator& a) {
  LinearOperator::Node n(LinearOperator::Kind::kScaled, a.domain(), a.codomain());
  n.coefficient = c;
  n.lhs = a.node_;
  return LinearOperator(std::make_shared<const LinearOperator::Node>(std::move(n)));
}

LinearOperator subtract(const LinearOperator& a, const LinearOperator& b) { return add(a, scale(-1.0, b)); }

std::string_view to_string(NormCertificate::Kind kind) {
  switch (kind) {
    case NormCertificate::Kind::kExact:
      return "exact";
    case NormCertificate::Kind::kUpper:
      return "upper";
    case NormCertificate::Kind::kLower:
      return "lower";
  }
  return "?";
}

namespace {

void require_sup_form(const LinearOperator& a) {
  a.domain().require_sup_form("operator norm");
  a.codomain().require_sup_form("operator norm");
}

double entrywise_bound(const DenseMatrix& m, const GradedSpace& domain, const GradedSpace& codomain) {
  double best = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j) != 0.0) row += lipschitz_factor(m(i, j)) / domain.weight(j);
    }
    best = std::max(best, codomain.weight(i) * row);
  }
  return best;
}

double chain_bound(const LinearOperator& a) {
  if (auto exact = closed_form_norm(a)) return exact->value;
  switch (a.kind()) {
    case LinearOperator::Kind::kScaled:
      return lipschitz_factor(a.coefficient()) * chain_bound(a.operands().first);
    case LinearOperator::Kind::kSum: {
      auto [l, r] = a.operands();
      return chain_bound(l) + chain_bound(r);
    }
    case LinearOperator::Kind::kComposition: {
      auto [outer, inner] = a.operands();
      return chain_bound(outer) * chain_bound(inner);
    }
    default:
      return entrywise_bound(a.materialize(), a.domain(), a.codomain());
  }
}

}  // namespace

std::optional<NormCertificate> closed_form_norm(const LinearOperator& a) {
  require_sup_form(a);
  using K = LinearOperator::Kind;
  const bool same_space = a.domain() == a.codomain();
  switch (a.kind()) {
    case K::kIdentity:
      return NormCertificate{NormCertificate::Kind::kExact, 1.0, "closed form: identity"};
    case K::kZero:
      return NormCertificate{NormCertificate::Kind::kExact, 0.0, "closed form: zero"};
    case K::kWeightedShift: {
      auto ratio = a.domain().geometric_ratio();
      if (!ratio || !same_space) return std::nullopt;
      const std::size_t l = a.shift_power();
      const double c = a.coefficient();
      double v = 0.0;
      if (c != 0.0 && l < a.domain().dim()) v = std::pow(*ratio, static_cast<double>(l)) * lipschitz_factor(c);
      return NormCertificate{NormCertificate::Kind::kExact, v, "closed form: a^l * max{1,|c|}"};
    }
    case K::kDiagonal: {
      if (!same_space || a.domain().seminorm_mode() != SeminormMode::kCoordinateAbs) return std::nullopt;
      double v = 0.0;
      for (double l : a.diagonal_entries()) {
        if (l != 0.0) v = std::max(v, lipschitz_factor(l));
      }
      return NormCertificate{NormCertificate::Kind::kExact, v, "closed form: max over nonzero entries of max{1,|l|}"};
    }
    case K::kScaled: {
      const LinearOperator inner = a.operands().first;
      if (inner.kind() != K::kIdentity) return std::nullopt;
      const double v = a.coefficient() == 0.0 ? 0.0 : lipschitz_factor(a.coefficient());
      return NormCertificate{NormCertificate::Kind::kExact, v, "closed form: max{1,|c|} for c*id"};
    }
    default:
      return std::nullopt;
  }
}

NormCertificate upper_norm_certificate(const LinearOperator& a) {
  require_sup_form(a);
  if (auto exact = closed_form_norm(a)) return *exact;
  double v = chain_bound(a);
  std::string method = "inequality chain";
  if (std::max(a.domain().dim(), a.codomain().dim()) <= kMaxMaterializeDim) {
    const double e = entrywise_bound(a.materialize(), a.domain(), a.codomain());
    if (e < v) {
      v = e;
      method = "entrywise bound";
    }
  }
  return NormCertificate{NormCertificate::Kind::kUpper, v, method};
}

NormCertificate operator_gauge_norm(const LinearOperator& a) { return upper_norm_certificate(a); }

NormCertificate operator_gauge_norm(const LinearOperator& a, const SamplingBudget& budget, Rng& rng) {
  require_sup_form(a);
  const std::size_t dim = a.domain().dim();
  const std::size_t n_scales = std::max<std::size_t>(budget.n_scales, 2);
  const double log_lo = std::log(budget.scale_min);
  const double log_hi = std::log(budget.scale_max);
  double best = 0.0;
  auto sweep = [&](const Point& u) {
    for (std::size_t k = 0; k < n_scales; ++k) {
      const double s = std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(k) / static_cast<double>(n_scales - 1));
      const Point x = s * u;
      const double nx = a.domain().norm(x);
      if (nx > 0.0) best = std::max(best, a.codomain().norm(a.apply(x)) / nx);
    }
  };
  for (std::size_t j = 0; j < dim; ++j) sweep(Point::basis(dim, j));
  for (std::size_t r = 0; r < budget.n_rays; ++r) sweep(random_direction(dim, rng));
  std::ostringstream method;
  method << "sampled " << (dim + budget.n_rays) << " rays x " << n_scales << " scales in [" << budget.scale_min
         << ", " << budget.scale_max << "]";
  return NormCertificate{NormCertificate::Kind::kLower, best, method.str()};
}

NeumannResult neumann_inverse(const LinearOperator& a, std::size_t terms, double theta, Rng& rng,
                              std::size_t samples) {
  if (!(theta >= 0.0 && theta < 1.0)) {
    throw Error(ErrorKind::kPrecondition, "Neumann series needs ||id - A|| <= theta < 1, got theta = " +
                                              fmt_double(theta));
  }
  if (!(a.domain() == a.codomain())) throw Error(ErrorKind::kStructural, "Neumann series needs a square operator");
  const GradedSpace& space = a.domain();
  const LinearOperator id = LinearOperator::identity(space);
  const LinearOperator b = subtract(id, a);

  LinearOperator inverse = id;
  if (space.dim() <= kMaxMaterializeDim) {
    // Horner form R_k = id + B R_{k-1} on dense storage.
    const DenseMatrix bm = b.materialize();
    const std::size_t n = space.dim();
    DenseMatrix r = DenseMatrix::identity(n);
    for (std::size_t k = 0; k < terms; ++k) {
      DenseMatrix next = DenseMatrix::identity(n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t l = 0; l < n; ++l) {
          const double bil = bm(i, l);
          if (bil == 0.0) continue;
          for (std::size_t j = 0; j < n; ++j) next(i, j) += bil * r(l, j);
        }
      }
      r = std::move(next);
    }
    inverse = LinearOperator::dense(space, std::move(r));
  } else {
    for (std::size_t k = 0; k < terms; ++k) inverse = add(id, compose(b, inverse));
  }

  NeumannResult out{inverse, std::pow(theta, static_cast<double>(terms + 1)) / (1.0 - theta), 0.0, samples};
  for (std::size_t s = 0; s < samples; ++s) {
    const double mag = std::pow(10.0, rng.uniform(-3.0, 3.0));
    const Point x = mag * random_direction(space.dim(), rng);
    const double nx = space.norm(x);
    if (nx == 0.0) continue;
    const double res = space.norm(a.apply(inverse.apply(x)) - x);
    out.max_residual_ratio = std::max(out.max_residual_ratio, res / nx);
    if (res > out.tail_bound * nx) {
      throw Error(ErrorKind::kContractViolation, "Neumann residual " + fmt_double(res) + " exceeds tail bound " +
                                                     fmt_double(out.tail_bound * nx));
    }
  }
  return out;
}

bool filtration_shift(const LinearOperator& a, std::size_t shift) {
  if (a.domain().seminorm_mode() != SeminormMode::kCoordinateAbs ||
      a.codomain().seminorm_mode() != SeminormMode::kCoordinateAbs) {
    throw Error(ErrorKind::kUnsupported, "filtration check needs coordinate-abs seminorms");
  }
  const std::size_t cols = a.domain().dim();
  const std::size_t rows = a.codomain().dim();
  for (std::size_t j = 0; j < cols; ++j) {
    const Point col = a.apply(Point::basis(cols, j));
    for (std::size_t i = 0; i < rows && i < j + shift; ++i) {
      if (col[i] != 0.0) return false;
    }
  }
  return true;
}

}  // namespace frechet
