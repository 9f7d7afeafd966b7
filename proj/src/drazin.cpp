#include "pdrazin/drazin.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <string>

namespace pdrazin {

namespace {

Eigen::JacobiSVD<Matrix> svd_of(const Matrix& m) {
  return Eigen::JacobiSVD<Matrix>(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
}

int rank_above(const Eigen::JacobiSVD<Matrix>& svd, double abs_cut) {
  const auto& sv = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > abs_cut && sv(i) > 0.0) ++r;
  return r;
}

Matrix pinv_above(const Matrix& m, double abs_cut) {
  const auto svd = svd_of(m);
  const auto& sv = svd.singularValues();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > abs_cut && sv(i) > 0.0) inv(i) = 1.0 / sv(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

// Pseudo inverse that keeps exactly the top `rank` singular directions. Used
// when the rank is already known from a better conditioned decision.
Matrix pinv_rank(const Matrix& m, int rank) {
  const auto svd = svd_of(m);
  const auto& sv = svd.singularValues();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < rank && i < sv.size(); ++i)
    if (sv(i) > 0.0) inv(i) = 1.0 / sv(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

double spectral_norm(const Matrix& m) {
  const auto sv = svd_of(m).singularValues();
  return sv.size() ? sv(0) : 0.0;
}

double rank_cut(const AlgebraContext& ctx, const Tolerances& tol) {
  return ctx.rep_dim() * tol.rank_rel;
}

struct IndexInfo {
  int index = 0;
  int core_rank = 0;  ///< stabilized rank of a^index
};

// Ranks of a^k are judged against sigma_max(a)^k, the scale repeated
// multiplication actually carries. Thresholding each power against its own
// largest singular value would read a power that is pure rounding noise
// (e.g. the square of a conjugated nilpotent) as full rank.
IndexInfo index_info(const AlgebraElement& a, const Tolerances& tol) {
  const int n = a.context.rep_dim();
  const double base = spectral_norm(a.matrix);
  const double rel = rank_cut(a.context, tol);
  Matrix power = Matrix::Identity(n, n);
  double scale = 1.0;
  int prev_rank = n;  // rank of a^0
  for (int k = 0; k < n; ++k) {
    power = power * a.matrix;  // a^(k+1)
    scale *= base;
    const int r = rank_above(svd_of(power), rel * scale);
    if (r == prev_rank) return {k, r};
    prev_rank = r;
  }
  return {n, 0};  // ranks strictly decreased n times, so a^n = 0
}

}  // namespace

int numerical_rank(const Matrix& m, double rel_tol) {
  const auto svd = svd_of(m);
  const auto& sv = svd.singularValues();
  return rank_above(svd, sv.size() ? rel_tol * sv(0) : 0.0);
}

Matrix pseudo_inverse(const Matrix& m, double rel_tol) {
  return pinv_above(m, rel_tol * spectral_norm(m));
}

int drazin_index(const AlgebraElement& a, const Tolerances& tol) {
  return index_info(a, tol).index;
}

namespace {

int radical_index_of(const AlgebraElement& a, const AlgebraElement& idempotent,
                     const Tolerances& tol) {
  const int n = a.context.rep_dim();
  // Scale aware for the same reason the rank cut is: the rounding floor of
  // a^k * idem grows like ||a||^k ||idem||, and an exactly-zero product must
  // not miss the radical because its residue exceeds an absolute cut.
  const double base = std::max(1.0, norm(a));
  double scale = std::max(1.0, norm(idempotent));
  AlgebraElement power = a;
  for (int k = 1; k <= n; ++k) {
    scale *= base;
    if (in_radical(power * idempotent, tol.tol_rad * scale)) return k;
    power = power * a;
  }
  throw ConsistencyError("no power of a times its spectral idempotent reaches the radical");
}

}  // namespace

PDrazinResult pdrazin(const AlgebraElement& a, const Tolerances& tol) {
  require_valid_element(a, tol.tol_pattern);
  const auto info = index_info(a, tol);
  const int l = info.index;

  // rank(a^(2l+1)) equals the stabilized rank the index search already
  // settled; pinning the pinv to it avoids a second threshold decision at a
  // high power, where genuine singular values of an ill conditioned element
  // can fall below the rounding floor of sigma_max(a)^(2l+1).
  const AlgebraElement al = element_power(a, l);
  const AlgebraElement a2l1 = element_power(a, 2 * l + 1);
  Matrix inv = al.matrix * pinv_rank(a2l1.matrix, info.core_rank) * al.matrix;
  AlgebraElement b{a.context, std::move(inv)};

  // a^dd is a polynomial in a, so it must land back in the pattern.
  if (!validate_element(b, tol.tol_pattern))
    throw ConsistencyError("computed inverse left the " + a.context.describe() + " pattern");

  // Check the two radical-free axioms before searching for the radical index:
  // when ill conditioning defeats the pinv, the search would fail downstream
  // with a message that hides the actual problem.
  if (rel_residual(norm(a * b - b * a), norm(a) * norm(b)) > tol.tol_res ||
      rel_residual(norm(b * a * b - b), norm(b)) > tol.tol_res)
    throw ConsistencyError("oracle output fails the defining axioms for " +
                           a.context.describe());

  AlgebraElement idem = identity_element(a.context) - a * b;
  const int rad_idx = radical_index_of(a, idem, tol);

  VerificationReport axioms = check_pdrazin_axioms(a, b, rad_idx, tol);
  if (!axioms.pass)
    throw ConsistencyError("oracle output fails the defining axioms for " +
                           a.context.describe());

  return PDrazinResult{std::move(b), l, rad_idx, std::move(idem)};
}

AlgebraElement group_inverse(const AlgebraElement& a, const Tolerances& tol) {
  PDrazinResult r = pdrazin(a, tol);
  if (r.drazin_index > 1)
    throw HypothesisError("not group invertible: index " + std::to_string(r.drazin_index));
  return r.inverse;
}

VerificationReport check_pdrazin_axioms(const AlgebraElement& a, const AlgebraElement& b,
                                        int k, const Tolerances& tol) {
  require_same_context(a, b);
  if (k < 1) throw StructuralError("axiom witness exponent must be >= 1");

  VerificationReport rep;
  rep.identity = "pdrazin-axioms";

  const double commute = rel_residual(norm(a * b - b * a), norm(a) * norm(b));
  const double inner = rel_residual(norm(b * a * b - b), norm(b));
  const AlgebraElement gap = element_power(a, k) - element_power(a, k + 1) * b;
  // relative to the scale the powers were computed at, not to ||gap|| itself,
  // which is pure rounding residue whenever the axiom holds exactly
  const double gap_scale =
      std::pow(norm(a), k) + std::pow(norm(a), k + 1) * norm(b);
  const double radical = rel_residual(radical_distance(gap), gap_scale);

  rep.axiom_residuals["commutation"] = commute;
  rep.axiom_residuals["inner"] = inner;
  rep.axiom_residuals["radical"] = radical;
  rep.tolerances_used["tol_res"] = tol.tol_res;
  rep.tolerances_used["tol_rad"] = tol.tol_rad;
  rep.pass = commute <= tol.tol_res && inner <= tol.tol_res && radical <= tol.tol_rad;
  return rep;
}

bool is_quasinilpotent(const AlgebraElement& a, const Tolerances& tol) {
  const int n = a.context.rep_dim();
  const double bound = tol.tol_res * std::pow(std::max(1.0, norm(a)), n);
  return norm(element_power(a, n)) <= bound;
}

QuasinilpotenceDiagnostics quasinilpotence_diagnostics(const AlgebraElement& a,
                                                       const Tolerances& tol) {
  QuasinilpotenceDiagnostics d;
  d.quasinilpotent = is_quasinilpotent(a, tol);
  const int n = a.context.rep_dim();
  AlgebraElement power = identity_element(a.context);
  for (int k = 1; k <= n; ++k) {
    power = power * a;
    d.root_norms.push_back(std::pow(norm(power), 1.0 / k));
  }
  return d;
}

}  // namespace pdrazin
