#pragma once

#include <complex>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "pdrazin/algebra.hpp"
#include "pdrazin/drazin.hpp"
#include "pdrazin/report.hpp"

namespace pdrazin {

// ============================================================================
// Diagnostics shared by the formula operations
// ============================================================================

/// Optional per-call diagnostics. Formula operations fill this when a caller
/// passes one; pass/fail logic never depends on it.
struct OpTrace {
  std::map<std::string, double> hypothesis_residuals;
  std::map<std::string, int> series_terms;
  /// Extra named residuals, e.g. a misprinted textbook form evaluated next to
  /// the corrected one.
  std::map<std::string, double> extra_residuals;
  /// Marginal-hypothesis warnings (accepted but close to rejection).
  std::vector<std::string> warnings;
};

/// Hypothesis gate: residual <= tol_res passes silently; residual >=
/// hypothesis_reject throws HypothesisError; in between passes with a warning
/// appended to the trace.
void require_hypothesis(const std::string& name, double residual, const Tolerances& tol,
                        OpTrace* trace);

double commutation_residual(const AlgebraElement& a, const AlgebraElement& b);

// ============================================================================
// Terminating series
// ============================================================================

/// sum_i step^i * tail, accumulated until the current term's norm drops to
/// policy.term_tol * max(1, ||first term||). The test is on the whole term:
/// step may be non-contracting (e.g. a a^dd) while step^i * tail vanishes.
/// Throws SeriesDivergenceError when the term is still above threshold after
/// policy.max_terms accumulated terms. terms_out receives the number of
/// accumulated terms when non-null.
AlgebraElement terminating_series(const AlgebraElement& step, const AlgebraElement& tail,
                                  const SeriesPolicy& policy = {}, int* terms_out = nullptr);

/// sum_i lead * step^i * tail, with the termination test applied to the full
/// product. Needed when the annihilating idempotent sits in front: the bare
/// tail form never decays for invertible lambda-pairs.
AlgebraElement terminating_series(const AlgebraElement& lead, const AlgebraElement& step,
                                  const AlgebraElement& tail, const SeriesPolicy& policy,
                                  int* terms_out = nullptr);

// ============================================================================
// Commuting and orthogonal combinations
// ============================================================================

/// (ab)^dd = a^dd b^dd for commuting a, b. Returns a^dd b^dd.
AlgebraElement product_commuting(const AlgebraElement& a, const AlgebraElement& b,
                                 const Tolerances& tol = {}, OpTrace* trace = nullptr);

/// (a+b)^dd = a^dd + b^dd when ab = ba = 0. Returns a^dd + b^dd.
AlgebraElement add_orthogonal(const AlgebraElement& a, const AlgebraElement& b,
                              const Tolerances& tol = {}, OpTrace* trace = nullptr);

/// n-ary orthogonal sum: pairwise ab = ba = 0 gives (sum a_i)^dd = sum a_i^dd.
/// Hypothesis errors name the offending pair.
AlgebraElement add_orthogonal_n(std::span<const AlgebraElement> elements,
                                const Tolerances& tol = {}, OpTrace* trace = nullptr);

/// Additive formula for commuting a, b:
///   (a+b)^dd = (1 + a^dd b)^dd a^dd + b^dd sum_i (-b^dd a aPi)^i aPi
/// with aPi the spectral idempotent of a. The series terminates because
/// (a aPi)^i collapses through the nilpotent part.
AlgebraElement add_commuting(const AlgebraElement& a, const AlgebraElement& b,
                             const SeriesPolicy& policy = {}, const Tolerances& tol = {},
                             OpTrace* trace = nullptr);

/// Inverse direction of the additive formula: given sum_inv = (a+b)^dd
/// (axiom-checked), returns (1 + a^dd b)^dd = aPi + a^2 a^dd sum_inv.
AlgebraElement one_plus_inverse_from_sum(const AlgebraElement& a, const AlgebraElement& b,
                                         const AlgebraElement& sum_inv,
                                         const Tolerances& tol = {}, OpTrace* trace = nullptr);

/// Specialized commuting-sum cases. The published specializations of the
/// first two cases are misprints; this evaluates the corrected forms (derived
/// from the general formula) and, when a trace is supplied, also records the
/// residual of the form as printed.
enum class SpecialCase { quasinilpotent, invertible, group };

AlgebraElement add_commuting_case(const AlgebraElement& a, const AlgebraElement& b,
                                  SpecialCase which, const SeriesPolicy& policy = {},
                                  const Tolerances& tol = {}, OpTrace* trace = nullptr);

// ============================================================================
// Lambda-commuting pairs: ab = lambda * ba
// ============================================================================

struct LambdaPair {
  AlgebraElement a;
  AlgebraElement b;
  Scalar lambda{1.0, 0.0};
};

double lambda_commutation_residual(const LambdaPair& p);

/// Validates the defining relation (hypothesis gate) and returns the pair.
LambdaPair make_lambda_pair(AlgebraElement a, AlgebraElement b, Scalar lambda,
                            const Tolerances& tol = {}, OpTrace* trace = nullptr);

/// Power identities for a lambda-commuting pair at exponent n >= 1:
///   a b^n = l^n b^n a                 a^n b = l^n b a^n
///   (ab)^n = l^(-n(n-1)/2) a^n b^n  = l^(n(n+1)/2) b^n a^n
///   (ba)^n = l^(n(n-1)/2) b^n a^n   = l^(-n(n+1)/2) a^n b^n
///   (a^dd b)^n = l^(n(n-1)/2) (a^dd)^n b^n = l^(-n(n+1)/2) b^n (a^dd)^n
///   (a b^dd)^n = l^(n(n-1)/2) a^n (b^dd)^n = l^(-n(n+1)/2) (b^dd)^n a^n
/// Evaluates both sides of every equality and reports the residuals.
VerificationReport lambda_power_identities(const LambdaPair& p, int n,
                                           const Tolerances& tol = {});

/// Commutation transfer through the inverses:
///   a a^dd b = b a a^dd,  b b^dd a = a b b^dd,
///   a^dd b = l^(-1) b a^dd,  a b^dd = l^(-1) b^dd a.
VerificationReport lambda_swap_relations(const LambdaPair& p, const Tolerances& tol = {});

/// (ab)^dd = b^dd a^dd = l^(-1) a^dd b^dd. Returns b^dd a^dd; the trace gets
/// the residual against the lambda-scaled commuted form.
AlgebraElement product_lambda(const LambdaPair& p, const Tolerances& tol = {},
                              OpTrace* trace = nullptr);

/// Difference formula for a lambda-commuting pair:
///   (a-b)^dd = w^dd + a^dd sum_i (b a^dd)^i bPi - aPi sum_i (b^dd a)^i b^dd
/// with w = a a^dd (a-b) b b^dd. The right series carries the leading aPi
/// inside each term so the termination test sees the collapsing product.
struct DifferenceTrace {
  AlgebraElement w;
  AlgebraElement w_inverse;
  int series_left_terms = 0;
  int series_right_terms = 0;
  AlgebraElement result;
};

DifferenceTrace subtract_lambda(const LambdaPair& p, const SeriesPolicy& policy = {},
                                const Tolerances& tol = {}, OpTrace* trace = nullptr);

/// Closed finite form of the difference formula:
///   (a-b)^D = w^D + (1 - b b^D) [sum_{i<t} l^(i(i+1)/2) (a^D)^(i+1) b^i]
///                 - [sum_{i<s} l^(i(i+1)/2) a^i (b^D)^(i+1)] (1 - a a^D)
/// with s, t the indices of a, b lifted to at least 1.
AlgebraElement subtract_lambda_finite(const LambdaPair& p, const Tolerances& tol = {},
                                      OpTrace* trace = nullptr);

}  // namespace pdrazin
