#pragma once

#include <vector>

#include "pdrazin/algebra.hpp"
#include "pdrazin/report.hpp"

namespace pdrazin {

// ============================================================================
// Numerical rank plumbing
// ============================================================================

/// Number of singular values exceeding rel_tol * sigma_max.
int numerical_rank(const Matrix& m, double rel_tol);

/// Moore-Penrose pseudoinverse with the same thresholding rule as
/// numerical_rank, so rank and pinv decisions never disagree.
Matrix pseudo_inverse(const Matrix& m, double rel_tol);

// ============================================================================
// Index and inverse
// ============================================================================

/// Smallest k >= 0 with rank(a^(k+1)) = rank(a^k); 0 iff a is invertible.
/// Rank decisions cut singular values of a^k at rep_dim * tol.rank_rel *
/// sigma_max(a)^k, the scale k-fold multiplication carries. Cutting against
/// each power's own sigma_max instead would read the rounding residue of an
/// exactly nilpotent power as full rank. Always <= rep_dim.
int drazin_index(const AlgebraElement& a, const Tolerances& tol = {});

struct PDrazinResult {
  AlgebraElement inverse;              ///< a^dd, the (pseudo-)Drazin inverse
  int drazin_index = 0;                ///< rank-stabilization index
  int radical_index = 1;               ///< smallest k >= 1 with a^k(1 - a a^dd) in the radical
  AlgebraElement spectral_idempotent;  ///< 1 - a a^dd
};

/// Definition-based oracle. Computes a^dd = a^l pinv(a^(2l+1)) a^l with
/// l = drazin_index(a); the pinv keeps exactly the stabilized rank found by
/// the index search rather than re-thresholding at the high power. The three
/// defining axioms are then asserted as residual checks and context
/// membership is re-validated (a^dd is a polynomial in a, so the valid
/// patterns are closed under it). Throws ConsistencyError when any check
/// fails. Works for every element: finite dimension makes every element
/// pseudo-Drazin invertible and the two inverses coincide.
PDrazinResult pdrazin(const AlgebraElement& a, const Tolerances& tol = {});

/// Same computation; finite-dimensional contexts make the notions coincide.
inline PDrazinResult drazin_inverse(const AlgebraElement& a, const Tolerances& tol = {}) {
  return pdrazin(a, tol);
}

/// Drazin inverse restricted to drazin_index <= 1; throws HypothesisError
/// (not group invertible) otherwise.
AlgebraElement group_inverse(const AlgebraElement& a, const Tolerances& tol = {});

// ============================================================================
// Axioms and quasinilpotence
// ============================================================================

/// Residual check of the three defining axioms of a pseudo-Drazin inverse b
/// of a at witness exponent k >= 1:
///   ab = ba,  b a b = b,  a^k - a^(k+1) b in the radical.
/// Reports each residual; pass iff all are within tol_res / tol_rad.
VerificationReport check_pdrazin_axioms(const AlgebraElement& a, const AlgebraElement& b,
                                        int k, const Tolerances& tol = {});

struct QuasinilpotenceDiagnostics {
  bool quasinilpotent = false;
  /// ||a^n||^(1/n) for n = 1..rep_dim; tends to the spectral radius.
  std::vector<double> root_norms;
};

/// True when ||a^rep_dim|| <= tol_res * max(1, ||a||)^rep_dim, i.e. the
/// element is nilpotent to working precision.
bool is_quasinilpotent(const AlgebraElement& a, const Tolerances& tol = {});

QuasinilpotenceDiagnostics quasinilpotence_diagnostics(const AlgebraElement& a,
                                                       const Tolerances& tol = {});

// ============================================================================
// Series policy
// ============================================================================

/// Controls terminating-series evaluation in the identity formulas.
struct SeriesPolicy {
  /// 0 means "resolve to rep_dim + 1 of the operating context".
  int max_terms = 0;
  /// Relative termination threshold against max(1, ||first term||).
  double term_tol = 1e-14;

  int resolve_max_terms(int rep_dim) const {
    return max_terms > 0 ? max_terms : rep_dim + 1;
  }
};

}  // namespace pdrazin
