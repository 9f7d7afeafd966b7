#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdrazin {

using Scalar = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

// ============================================================================
// Errors
// ============================================================================

/// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: context mismatch, invalid pattern, bad construction request.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// An identity hypothesis is violated beyond the rejection threshold.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// Internal numerical breakdown: an axiom or closure check the engine
/// guarantees by construction failed to hold.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// A series that must terminate did not within the allowed number of terms.
class SeriesDivergenceError : public Error {
 public:
  using Error::Error;
};

// ============================================================================
// Tolerances
// ============================================================================

/// All comparison thresholds, relative unless stated otherwise.
struct Tolerances {
  double tol_res = 1e-9;            ///< axiom / hypothesis acceptance
  double tol_acc = 1e-8;            ///< formula vs oracle agreement
  double tol_rad = 1e-9;            ///< radical membership
  double tol_pattern = 1e-9;        ///< context pattern validation
  double hypothesis_reject = 1e-4;  ///< hard hypothesis rejection threshold
  double rank_rel = 1e-12;          ///< per-dimension factor for rank decisions
};

/// err / max(1, scale): the relative residual convention used throughout.
inline double rel_residual(double err, double scale) {
  return err / std::max(1.0, scale);
}

// ============================================================================
// Contexts
// ============================================================================

/// A concrete finite-dimensional algebra, represented on n x n matrices.
///
/// Supported kinds and their Jacobson radicals:
///  - full_matrix(n):           all n x n matrices, radical {0}
///  - upper_triangular(n):      upper triangular matrices, radical = strictly
///                              upper triangular part
///  - truncated_polynomial(m):  C[x]/(x^m) as m x m upper triangular Toeplitz
///                              matrices, radical = multiples of x
///  - direct_sum(s1, ..., sk):  block diagonal combinations, componentwise
///                              radical
class AlgebraContext {
 public:
  enum class Kind { full_matrix, upper_triangular, truncated_polynomial, direct_sum };

  static AlgebraContext full_matrix(int n);
  static AlgebraContext upper_triangular(int n);
  static AlgebraContext truncated_polynomial(int m);
  static AlgebraContext direct_sum(std::vector<AlgebraContext> summands);

  Kind kind() const { return kind_; }
  /// Matrix size for matrix kinds, truncation order for polynomial kind,
  /// total representation size for direct sums.
  int dim() const { return dim_; }
  /// Size of the representing matrices.
  int rep_dim() const { return rep_dim_; }
  const std::vector<AlgebraContext>& summands() const { return summands_; }

  bool operator==(const AlgebraContext& other) const;
  bool operator!=(const AlgebraContext& other) const { return !(*this == other); }

  std::string describe() const;

 private:
  AlgebraContext(Kind kind, int dim, std::vector<AlgebraContext> summands);

  Kind kind_;
  int dim_;
  int rep_dim_;
  std::vector<AlgebraContext> summands_;
};

// ============================================================================
// Elements
// ============================================================================

/// An element of a concrete algebra: a context plus its representing matrix.
/// Immutable value type; all arithmetic goes through free functions/operators
/// that enforce matching contexts.
struct AlgebraElement {
  AlgebraContext context;
  Matrix matrix;
};

/// Wraps a matrix as an element. Rejects wrong sizes and non-finite entries;
/// pattern validity is checked separately by validate_element.
AlgebraElement make_element(const AlgebraContext& ctx, Matrix m);

AlgebraElement zero_element(const AlgebraContext& ctx);
AlgebraElement identity_element(const AlgebraContext& ctx);

/// Builds the Toeplitz representative of c0 + c1 x + ... in a
/// truncated_polynomial context. coeffs may be shorter than the order.
AlgebraElement polynomial_element(const AlgebraContext& ctx, const std::vector<Scalar>& coeffs);

AlgebraElement operator+(const AlgebraElement& x, const AlgebraElement& y);
AlgebraElement operator-(const AlgebraElement& x, const AlgebraElement& y);
AlgebraElement operator*(const AlgebraElement& x, const AlgebraElement& y);
AlgebraElement operator*(Scalar c, const AlgebraElement& x);
AlgebraElement operator-(const AlgebraElement& x);

/// Frobenius norm of the representing matrix (submultiplicative).
double norm(const AlgebraElement& x);

/// x^k by repeated multiplication, k >= 0; x^0 is the identity.
AlgebraElement element_power(const AlgebraElement& x, int k);

/// Zero snap for derived elements. `scale` is the natural norm bound of the
/// computation that produced x (product of operand norms for a product,
/// sum of them for a sum); when ||x|| sits at the rounding floor
/// rep_dim * rank_rel * scale, x is replaced by the exact zero element.
/// Needed because the Drazin inverse is discontinuous at 0: a rounding
/// residue of an exactly-zero product must not be inverted as if it were
/// a tiny invertible element.
AlgebraElement snap_zero(AlgebraElement x, double scale, const Tolerances& tol = {});

/// Orthogonal projection of m onto the context's valid pattern subspace.
Matrix pattern_project(const AlgebraContext& ctx, const Matrix& m);

/// Orthogonal projection of m onto the radical subspace of the context.
Matrix radical_project(const AlgebraContext& ctx, const Matrix& m);

/// True when the representing matrix deviates from the valid pattern by at
/// most tol_pattern * max(1, ||x||) in Frobenius norm.
bool validate_element(const AlgebraElement& x, double tol_pattern = Tolerances{}.tol_pattern);

/// Throwing form of validate_element.
void require_valid_element(const AlgebraElement& x, double tol_pattern = Tolerances{}.tol_pattern);

/// Frobenius distance from x to the radical of its context. Exactly ||x|| in
/// full_matrix, the norm of the diagonal part in upper_triangular, and
/// sqrt(m) * |c0| in truncated_polynomial; root-sum-square across direct sums.
double radical_distance(const AlgebraElement& x);

/// Membership test: radical_distance(x) <= tol_rad * max(1, ||x||).
bool in_radical(const AlgebraElement& x, double tol_rad = Tolerances{}.tol_rad);

void require_same_context(const AlgebraElement& x, const AlgebraElement& y);

}  // namespace pdrazin
