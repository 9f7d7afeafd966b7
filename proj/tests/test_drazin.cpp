#include <doctest.h>

#include <pdrazin/drazin.hpp>

#include "support.hpp"

using namespace pdrazin;
using testsupport::gap;
using testsupport::known_decomposition;

namespace {

AlgebraElement el2(const AlgebraContext& ctx, double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << Scalar(a), Scalar(b), Scalar(c), Scalar(d);
  return make_element(ctx, m);
}

const AlgebraContext full2 = AlgebraContext::full_matrix(2);

}  // namespace

TEST_CASE("numerical rank and pseudoinverse") {
  Matrix m(3, 3);
  m << Scalar(1), Scalar(0), Scalar(0),
       Scalar(0), Scalar(2), Scalar(0),
       Scalar(0), Scalar(0), Scalar(1e-14);
  CHECK(numerical_rank(m, 1e-10) == 2);
  CHECK(numerical_rank(m, 1e-16) == 3);

  const Matrix p = pseudo_inverse(m, 1e-10);
  CHECK(std::abs(p(0, 0).real() - 1.0) < 1e-14);
  CHECK(std::abs(p(1, 1).real() - 0.5) < 1e-14);
  CHECK(p(2, 2) == Scalar(0.0));  // cut, not inverted

  // Moore-Penrose axioms on a rank-deficient rectangular-free case
  Matrix r(3, 3);
  r << Scalar(1), Scalar(2), Scalar(3),
       Scalar(2), Scalar(4), Scalar(6),
       Scalar(0), Scalar(1), Scalar(-1);
  const Matrix rp = pseudo_inverse(r, 1e-12);
  CHECK((r * rp * r - r).norm() < 1e-12);
  CHECK((rp * r * rp - rp).norm() < 1e-12);
  CHECK((r * rp - (r * rp).adjoint()).norm() < 1e-12);
  CHECK((rp * r - (rp * r).adjoint()).norm() < 1e-12);
}

TEST_CASE("group invertible example with frozen inverse") {
  // a^2 = 2a, so a = 2p with p idempotent and a^# = a / 4
  const auto a = el2(full2, 2, 1, 0, 0);
  const auto r = pdrazin::pdrazin(a);
  CHECK(r.drazin_index == 1);
  CHECK(gap(r.inverse, el2(full2, 0.5, 0.25, 0, 0)) < 1e-14);
  CHECK(gap(r.spectral_idempotent, el2(full2, 0, -0.5, 0, 1)) < 1e-14);
  CHECK(r.radical_index == 1);

  const auto g = group_inverse(a);
  CHECK(gap(g, r.inverse) == 0.0);
}

TEST_CASE("nilpotent jordan block") {
  const auto j2 = el2(full2, 0, 1, 0, 0);
  const auto r = pdrazin::pdrazin(j2);
  CHECK(r.drazin_index == 2);
  CHECK(norm(r.inverse) == 0.0);
  CHECK(gap(r.spectral_idempotent, identity_element(full2)) == 0.0);
  CHECK(r.radical_index == 2);  // j2 itself is not 0, j2^2 is
  CHECK_THROWS_AS(group_inverse(j2), HypothesisError);
}

TEST_CASE("radical index drops in the triangular context") {
  // Same matrix, different algebra: the strictly upper part lies in the
  // radical of upper(2), so the spectral part is radical at the first power.
  const auto upper2 = AlgebraContext::upper_triangular(2);
  const auto j2 = el2(upper2, 0, 1, 0, 0);
  const auto r = pdrazin::pdrazin(j2);
  CHECK(r.drazin_index == 2);
  CHECK(r.radical_index == 1);
  CHECK(pdrazin::pdrazin(el2(full2, 0, 1, 0, 0)).radical_index == 2);
}

TEST_CASE("invertible element has index 0") {
  const auto a = el2(full2, 2, 0, 0, -4);
  const auto r = pdrazin::pdrazin(a);
  CHECK(r.drazin_index == 0);
  CHECK(r.radical_index == 1);
  CHECK(gap(r.inverse, el2(full2, 0.5, 0, 0, -0.25)) < 1e-15);
  CHECK(norm(r.spectral_idempotent) < 1e-15);
  CHECK(drazin_index(a) == 0);
}

TEST_CASE("oracle against closed-form decompositions") {
  for (const bool upper : {false, true}) {
    const auto kind = upper ? AlgebraContext::upper_triangular : AlgebraContext::full_matrix;
    for (int core = 0; core <= 3; ++core)
      for (int nilp = 0; nilp <= 3; ++nilp) {
        if (core + nilp < 1) continue;
        const auto ctx = kind(core + nilp);
        for (unsigned salt = 0; salt < 5; ++salt) {
          const auto kd = known_decomposition(ctx, core, nilp, salt);
          CAPTURE(ctx.describe());
          CAPTURE(core);
          CAPTURE(nilp);
          CAPTURE(salt);
          const auto r = pdrazin::pdrazin(kd.a);
          CHECK(r.drazin_index == (nilp == 0 ? 0 : std::max(nilp, 1)));
          CHECK(gap(r.inverse, kd.drazin) < 1e-10);
        }
      }
  }
}

TEST_CASE("axiom check accepts the oracle and rejects perturbations") {
  const auto kd = known_decomposition(AlgebraContext::full_matrix(4), 2, 2, 3);
  const auto r = pdrazin::pdrazin(kd.a);
  const auto ok = check_pdrazin_axioms(kd.a, r.inverse, std::max(r.drazin_index, 1));
  CHECK(ok.pass);

  AlgebraElement off = r.inverse;
  off.matrix(0, 0) += Scalar(1e-4, 0.0);
  const auto bad = check_pdrazin_axioms(kd.a, off, std::max(r.drazin_index, 1));
  CHECK_FALSE(bad.pass);
}

TEST_CASE("truncated polynomial: nilpotent of full index") {
  const auto ctx = AlgebraContext::truncated_polynomial(4);
  const auto a = polynomial_element(ctx, {Scalar(0), Scalar(1), Scalar(1)});  // x + x^2
  const auto r = pdrazin::pdrazin(a);
  CHECK(r.drazin_index == 4);
  CHECK(norm(r.inverse) == 0.0);
  CHECK(r.radical_index == 1);  // already in the radical of the local algebra

  const auto u = polynomial_element(ctx, {Scalar(2), Scalar(1)});  // invertible, c0 != 0
  const auto ru = pdrazin::pdrazin(u);
  CHECK(ru.drazin_index == 0);
  CHECK(gap(u * ru.inverse, identity_element(ctx)) < 1e-14);
}

TEST_CASE("direct sum takes blockwise inverses and the max index") {
  const auto ctx = AlgebraContext::direct_sum(
      {AlgebraContext::full_matrix(2), AlgebraContext::full_matrix(2)});
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = Scalar(2.0);  // invertible block
  m(1, 1) = Scalar(1.0);
  m(2, 3) = Scalar(1.0);  // nilpotent block
  const auto r = pdrazin::pdrazin(make_element(ctx, m));
  CHECK(r.drazin_index == 2);
  CHECK(std::abs(r.inverse.matrix(0, 0).real() - 0.5) < 1e-15);
  CHECK(std::abs(r.inverse.matrix(1, 1).real() - 1.0) < 1e-15);
  CHECK(r.inverse.matrix.block(2, 2, 2, 2).norm() == 0.0);
}

TEST_CASE("scale-aware index for conjugated nilpotents") {
  // Powers past the nilpotency order are rounding residue; the index search
  // must not read that residue as full rank.
  for (unsigned salt = 0; salt < 20; ++salt) {
    const auto ctx = AlgebraContext::full_matrix(3);
    auto kd = known_decomposition(ctx, 0, 3, salt);
    kd.a.matrix /= norm(kd.a);
    CHECK(drazin_index(kd.a) == 3);
    const auto r = pdrazin::pdrazin(kd.a);
    CHECK(norm(r.inverse) == 0.0);
  }
}

TEST_CASE("quasinilpotence diagnostics") {
  const auto j2 = el2(full2, 0, 1, 0, 0);
  CHECK(is_quasinilpotent(j2));
  const auto d = quasinilpotence_diagnostics(j2);
  CHECK(d.quasinilpotent);
  CHECK(d.root_norms.size() == 2);
  CHECK(d.root_norms[1] == 0.0);

  CHECK_FALSE(is_quasinilpotent(identity_element(full2)));
}
