#include "pdrazin/algebra.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace pdrazin {

// ============================================================================
// AlgebraContext
// ============================================================================

AlgebraContext::AlgebraContext(Kind kind, int dim, std::vector<AlgebraContext> summands)
    : kind_(kind), dim_(dim), summands_(std::move(summands)) {
  if (kind_ == Kind::direct_sum) {
    if (summands_.empty()) throw StructuralError("direct_sum needs at least one summand");
    rep_dim_ = 0;
    for (const auto& s : summands_) rep_dim_ += s.rep_dim();
    dim_ = rep_dim_;
  } else {
    if (dim_ < 1) throw StructuralError("context dimension must be positive");
    rep_dim_ = dim_;
  }
}

AlgebraContext AlgebraContext::full_matrix(int n) {
  return AlgebraContext(Kind::full_matrix, n, {});
}

AlgebraContext AlgebraContext::upper_triangular(int n) {
  return AlgebraContext(Kind::upper_triangular, n, {});
}

AlgebraContext AlgebraContext::truncated_polynomial(int m) {
  return AlgebraContext(Kind::truncated_polynomial, m, {});
}

AlgebraContext AlgebraContext::direct_sum(std::vector<AlgebraContext> summands) {
  return AlgebraContext(Kind::direct_sum, 0, std::move(summands));
}

bool AlgebraContext::operator==(const AlgebraContext& other) const {
  if (kind_ != other.kind_ || dim_ != other.dim_) return false;
  if (summands_.size() != other.summands_.size()) return false;
  for (std::size_t i = 0; i < summands_.size(); ++i)
    if (summands_[i] != other.summands_[i]) return false;
  return true;
}

std::string AlgebraContext::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::full_matrix: os << "full(" << dim_ << ")"; break;
    case Kind::upper_triangular: os << "upper(" << dim_ << ")"; break;
    case Kind::truncated_polynomial: os << "trunc(" << dim_ << ")"; break;
    case Kind::direct_sum: {
      os << "dsum(";
      for (std::size_t i = 0; i < summands_.size(); ++i) {
        if (i) os << ", ";
        os << summands_[i].describe();
      }
      os << ")";
      break;
    }
  }
  return os.str();
}

// ============================================================================
// Construction
// ============================================================================

AlgebraElement make_element(const AlgebraContext& ctx, Matrix m) {
  if (m.rows() != ctx.rep_dim() || m.cols() != ctx.rep_dim())
    throw StructuralError("matrix size " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + " does not fit context " + ctx.describe());
  if (!m.allFinite()) throw StructuralError("element has non-finite entries");
  return AlgebraElement{ctx, std::move(m)};
}

AlgebraElement zero_element(const AlgebraContext& ctx) {
  return AlgebraElement{ctx, Matrix::Zero(ctx.rep_dim(), ctx.rep_dim())};
}

AlgebraElement identity_element(const AlgebraContext& ctx) {
  return AlgebraElement{ctx, Matrix::Identity(ctx.rep_dim(), ctx.rep_dim())};
}

AlgebraElement polynomial_element(const AlgebraContext& ctx, const std::vector<Scalar>& coeffs) {
  if (ctx.kind() != AlgebraContext::Kind::truncated_polynomial)
    throw StructuralError("polynomial_element needs a truncated_polynomial context");
  const int m = ctx.dim();
  if (static_cast<int>(coeffs.size()) > m)
    throw StructuralError("polynomial degree exceeds truncation order");
  Matrix mat = Matrix::Zero(m, m);
  for (int d = 0; d < static_cast<int>(coeffs.size()); ++d)
    for (int i = 0; i + d < m; ++i) mat(i, i + d) = coeffs[d];
  return AlgebraElement{ctx, std::move(mat)};
}

// ============================================================================
// Arithmetic
// ============================================================================

void require_same_context(const AlgebraElement& x, const AlgebraElement& y) {
  if (x.context != y.context)
    throw StructuralError("context mismatch: " + x.context.describe() + " vs " +
                          y.context.describe());
}

AlgebraElement operator+(const AlgebraElement& x, const AlgebraElement& y) {
  require_same_context(x, y);
  return AlgebraElement{x.context, x.matrix + y.matrix};
}

AlgebraElement operator-(const AlgebraElement& x, const AlgebraElement& y) {
  require_same_context(x, y);
  return AlgebraElement{x.context, x.matrix - y.matrix};
}

AlgebraElement operator*(const AlgebraElement& x, const AlgebraElement& y) {
  require_same_context(x, y);
  return AlgebraElement{x.context, x.matrix * y.matrix};
}

AlgebraElement operator*(Scalar c, const AlgebraElement& x) {
  return AlgebraElement{x.context, c * x.matrix};
}

AlgebraElement operator-(const AlgebraElement& x) {
  return AlgebraElement{x.context, -x.matrix};
}

double norm(const AlgebraElement& x) { return x.matrix.norm(); }

AlgebraElement element_power(const AlgebraElement& x, int k) {
  if (k < 0) throw StructuralError("element_power needs k >= 0");
  AlgebraElement acc = identity_element(x.context);
  for (int i = 0; i < k; ++i) acc = acc * x;
  return acc;
}

AlgebraElement snap_zero(AlgebraElement x, double scale, const Tolerances& tol) {
  const double floor = x.context.rep_dim() * tol.rank_rel * scale;
  if (x.matrix.norm() <= floor) x.matrix.setZero();
  return x;
}

// ============================================================================
// Pattern geometry
// ============================================================================

namespace {

// Frobenius-orthogonal projection onto the upper triangular Toeplitz
// matrices: average each diagonal d >= 0, zero the rest.
Matrix toeplitz_project(const Matrix& m) {
  const int n = static_cast<int>(m.rows());
  Matrix out = Matrix::Zero(n, n);
  for (int d = 0; d < n; ++d) {
    Scalar sum{0.0, 0.0};
    for (int i = 0; i + d < n; ++i) sum += m(i, i + d);
    const Scalar mean = sum / static_cast<double>(n - d);
    for (int i = 0; i + d < n; ++i) out(i, i + d) = mean;
  }
  return out;
}

template <typename BlockFn>
Matrix map_blocks(const AlgebraContext& ctx, const Matrix& m, BlockFn&& fn) {
  Matrix out = Matrix::Zero(m.rows(), m.cols());
  int off = 0;
  for (const auto& s : ctx.summands()) {
    const int d = s.rep_dim();
    out.block(off, off, d, d) = fn(s, m.block(off, off, d, d));
    off += d;
  }
  return out;
}

}  // namespace

Matrix pattern_project(const AlgebraContext& ctx, const Matrix& m) {
  switch (ctx.kind()) {
    case AlgebraContext::Kind::full_matrix:
      return m;
    case AlgebraContext::Kind::upper_triangular:
      return m.triangularView<Eigen::Upper>();
    case AlgebraContext::Kind::truncated_polynomial:
      return toeplitz_project(m);
    case AlgebraContext::Kind::direct_sum:
      return map_blocks(ctx, m, [](const AlgebraContext& s, const auto& blk) {
        return pattern_project(s, blk);
      });
  }
  throw StructuralError("unknown context kind");
}

Matrix radical_project(const AlgebraContext& ctx, const Matrix& m) {
  switch (ctx.kind()) {
    case AlgebraContext::Kind::full_matrix:
      return Matrix::Zero(m.rows(), m.cols());
    case AlgebraContext::Kind::upper_triangular:
      return m.triangularView<Eigen::StrictlyUpper>();
    case AlgebraContext::Kind::truncated_polynomial: {
      Matrix t = toeplitz_project(m);
      t.diagonal().setZero();
      return t;
    }
    case AlgebraContext::Kind::direct_sum:
      return map_blocks(ctx, m, [](const AlgebraContext& s, const auto& blk) {
        return radical_project(s, blk);
      });
  }
  throw StructuralError("unknown context kind");
}

bool validate_element(const AlgebraElement& x, double tol_pattern) {
  if (!x.matrix.allFinite()) return false;
  const double dev = (x.matrix - pattern_project(x.context, x.matrix)).norm();
  return dev <= tol_pattern * std::max(1.0, norm(x));
}

void require_valid_element(const AlgebraElement& x, double tol_pattern) {
  if (!validate_element(x, tol_pattern))
    throw StructuralError("element violates the " + x.context.describe() + " pattern");
}

double radical_distance(const AlgebraElement& x) {
  return (x.matrix - radical_project(x.context, x.matrix)).norm();
}

bool in_radical(const AlgebraElement& x, double tol_rad) {
  return radical_distance(x) <= tol_rad * std::max(1.0, norm(x));
}

}  // namespace pdrazin
