#include <doctest.h>

#include <pdrazin/drazin.hpp>
#include <pdrazin/identities.hpp>

#include "support.hpp"

using namespace pdrazin;
using testsupport::gap;

namespace {

AlgebraElement el2(const AlgebraContext& ctx, double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << Scalar(a), Scalar(b), Scalar(c), Scalar(d);
  return make_element(ctx, m);
}

const AlgebraContext full1 = AlgebraContext::full_matrix(1);
const AlgebraContext full2 = AlgebraContext::full_matrix(2);

AlgebraElement scalar1(double v) {
  Matrix m(1, 1);
  m << Scalar(v);
  return make_element(full1, m);
}

}  // namespace

TEST_CASE("terminating series") {
  const auto id = identity_element(full2);
  const auto j2 = el2(full2, 0, 1, 0, 0);
  int terms = 0;

  SUBCASE("zero step stops after the leading term") {
    const auto s = terminating_series(zero_element(full2), id, SeriesPolicy{}, &terms);
    CHECK(gap(s, id) == 0.0);
    CHECK(terms == 1);
  }
  SUBCASE("nilpotent step sums the geometric series exactly") {
    const auto s = terminating_series(j2, id, SeriesPolicy{}, &terms);
    CHECK(gap(s, el2(full2, 1, 1, 0, 1)) == 0.0);
    CHECK(terms == 2);
  }
  SUBCASE("non-contracting step annihilated by the trailing idempotent") {
    // step = a a^+ has norm 1 forever; the trailing a^pi kills every term
    // after the first. Termination must test the full term, not the step.
    const auto a = el2(full2, 1, 0, 0, 0);
    const auto r = pdrazin::pdrazin(a);
    const auto s = terminating_series(a * r.inverse, r.spectral_idempotent,
                                      SeriesPolicy{}, &terms);
    CHECK(gap(s, r.spectral_idempotent) == 0.0);
    CHECK(terms == 1);
  }
  SUBCASE("leading idempotent participates in the termination test") {
    // Bare (step^i tail) has constant norm; with the lead factor the series
    // terminates immediately.
    const auto a = el2(full2, 1, 0, 0, 0);
    const auto r = pdrazin::pdrazin(a);  // a a^+ = a, a^pi = diag(0, 1)
    const auto s = terminating_series(a, el2(full2, 0, 0, 0, 2), r.spectral_idempotent,
                                      SeriesPolicy{}, &terms);
    CHECK(norm(s) == 0.0);
    CHECK(terms == 0);
  }
  SUBCASE("divergence raises") {
    CHECK_THROWS_AS(
        terminating_series(Scalar(2.0) * id, id, SeriesPolicy{}, &terms),
        SeriesDivergenceError);
  }
}

TEST_CASE("hypothesis gate: reject, warn, accept") {
  const auto a = el2(full2, 0, 1, 0, 0);
  const Tolerances tol;

  SUBCASE("clean hypothesis leaves no warning") {
    OpTrace trace;
    product_commuting(a, identity_element(full2), tol, &trace);
    CHECK(trace.warnings.empty());
    CHECK(trace.hypothesis_residuals.at("commutation") == 0.0);
  }
  SUBCASE("gray zone evaluates with a marginal warning") {
    auto b = identity_element(full2);
    b.matrix(1, 0) = Scalar(1e-6, 0.0);  // commutation residual ~ 1e-6
    OpTrace trace;
    product_commuting(a, b, tol, &trace);
    REQUIRE(trace.warnings.size() == 1);
    CHECK(trace.warnings[0].find("marginal") != std::string::npos);
  }
  SUBCASE("violation rejects") {
    const auto b = el2(full2, 1, 0, 0, 2);  // does not commute with j2
    CHECK_THROWS_AS(product_commuting(a, b, Tolerances{}, nullptr), HypothesisError);
  }
}

TEST_CASE("commuting product formula") {
  const auto a = el2(full2, 2, 1, 0, 0);
  const auto r = product_commuting(a, identity_element(full2), Tolerances{}, nullptr);
  CHECK(gap(r, el2(full2, 0.5, 0.25, 0, 0)) < 1e-14);
}

TEST_CASE("orthogonal sum formula") {
  const auto a = el2(full2, 3, 0, 0, 0);
  const auto b = el2(full2, 0, 0, 0, 2);
  OpTrace trace;
  const auto s = add_orthogonal(a, b, Tolerances{}, &trace);
  CHECK(trace.hypothesis_residuals.at("ab_zero") == 0.0);
  CHECK(trace.hypothesis_residuals.at("ba_zero") == 0.0);
  CHECK(gap(s, el2(full2, 1.0 / 3, 0, 0, 0.5)) < 1e-15);

  const std::vector<AlgebraElement> triple = {a, b, zero_element(full2)};
  const auto s3 = add_orthogonal_n(triple, Tolerances{}, nullptr);
  CHECK(gap(s3, s) == 0.0);

  CHECK_THROWS_AS(add_orthogonal(a, identity_element(full2), Tolerances{}, nullptr),
                  HypothesisError);
}

TEST_CASE("commuting sum formula, frozen cases") {
  SUBCASE("nilpotent plus identity inverts 1 + j2") {
    const auto a = el2(full2, 0, 1, 0, 0);
    OpTrace trace;
    const auto s = add_commuting(a, identity_element(full2), SeriesPolicy{}, Tolerances{},
                                 &trace);
    CHECK(gap(s, el2(full2, 1, -1, 0, 1)) < 1e-14);
    CHECK(trace.series_terms.at("sum_series") <= 3);
  }
  SUBCASE("coinciding idempotents halve") {
    const auto p = el2(full2, 1, 0, 0, 0);
    const auto s = add_commuting(p, p, SeriesPolicy{}, Tolerances{}, nullptr);
    CHECK(gap(s, el2(full2, 0.5, 0, 0, 0)) < 1e-14);
  }
  SUBCASE("recovering the one-plus inverse from the sum") {
    const auto a = el2(full2, 0, 1, 0, 0);
    const auto b = identity_element(full2);
    const auto sum_inv = pdrazin::pdrazin(a + b).inverse;
    const auto back = one_plus_inverse_from_sum(a, b, sum_inv, Tolerances{}, nullptr);
    CHECK(gap(back, identity_element(full2)) < 1e-14);  // (1 + a^+ b)^+ = 1 here
  }
}

TEST_CASE("specialized commuting cases") {
  SUBCASE("quasinilpotent case, corrected form") {
    const auto a = el2(full2, 0, 1, 0, 0);
    const auto s = add_commuting_case(a, identity_element(full2),
                                      SpecialCase::quasinilpotent, SeriesPolicy{},
                                      Tolerances{}, nullptr);
    CHECK(gap(s, el2(full2, 1, -1, 0, 1)) < 1e-14);  // not b^+ = 1
  }
  SUBCASE("invertible case, corrected form") {
    const auto s = add_commuting_case(scalar1(1.0), scalar1(1.0), SpecialCase::invertible,
                                      SeriesPolicy{}, Tolerances{}, nullptr);
    CHECK(std::abs(s.matrix(0, 0).real() - 0.5) < 1e-15);  // printed form would add 1
  }
  SUBCASE("group case matches the blockwise inverse") {
    const auto a = el2(full2, 1, 0, 0, 0);
    const auto b = el2(full2, 0, 0, 0, 2);
    const auto s = add_commuting_case(a, b, SpecialCase::group, SeriesPolicy{},
                                      Tolerances{}, nullptr);
    CHECK(gap(s, el2(full2, 1, 0, 0, 0.5)) < 1e-14);
  }
  SUBCASE("case hypotheses gate") {
    CHECK_THROWS_AS(add_commuting_case(scalar1(1.0), scalar1(1.0),
                                       SpecialCase::quasinilpotent, SeriesPolicy{},
                                       Tolerances{}, nullptr),
                    HypothesisError);
    CHECK_THROWS_AS(add_commuting_case(el2(full2, 0, 1, 0, 0), identity_element(full2),
                                       SpecialCase::invertible, SeriesPolicy{},
                                       Tolerances{}, nullptr),
                    HypothesisError);
  }
}

TEST_CASE("lambda pairs") {
  const auto a = el2(full2, 2, 0, 0, 1);
  const auto b = el2(full2, 0, 1, 0, 0);
  // a b = 2 b a by construction

  SUBCASE("pair construction checks the relation") {
    OpTrace trace;
    const auto pair = make_lambda_pair(a, b, Scalar(2.0), Tolerances{}, &trace);
    CHECK(trace.hypothesis_residuals.at("lambda_commutation") < 1e-15);
    CHECK(lambda_commutation_residual(pair) < 1e-15);
    CHECK_THROWS_AS(make_lambda_pair(a, b, Scalar(3.0), Tolerances{}, nullptr),
                    HypothesisError);
    CHECK_THROWS_AS(make_lambda_pair(a, b, Scalar(0.0), Tolerances{}, nullptr),
                    StructuralError);
  }
  SUBCASE("power identities hold and report every form") {
    const auto pair = make_lambda_pair(a, b, Scalar(2.0), Tolerances{}, nullptr);
    for (int n = 1; n <= 4; ++n) {
      const auto rep = lambda_power_identities(pair, n, Tolerances{});
      CHECK(rep.pass);
      CHECK(rep.formula_residuals.size() == 10);
      for (const auto& [name, r] : rep.formula_residuals) {
        CAPTURE(name);
        CHECK(r < 1e-12);
      }
    }
  }
  SUBCASE("swap relations") {
    const auto pair = make_lambda_pair(a, b, Scalar(2.0), Tolerances{}, nullptr);
    const auto rep = lambda_swap_relations(pair, Tolerances{});
    CHECK(rep.pass);
    for (const auto& [name, r] : rep.formula_residuals) {
      CAPTURE(name);
      CHECK(r < 1e-12);
    }
  }
  SUBCASE("anticommuting product, frozen value") {
    const auto wa = el2(full2, 1, 0, 0, -1);
    const auto wb = el2(full2, 0, 1, 1, 0);
    const auto pair = make_lambda_pair(wa, wb, Scalar(-1.0), Tolerances{}, nullptr);
    const auto prod = product_lambda(pair, Tolerances{}, nullptr);
    CHECK(gap(prod, el2(full2, 0, -1, 1, 0)) < 1e-14);  // (ab)^-1
  }
}

TEST_CASE("lambda difference formula, frozen case") {
  const auto a = el2(full2, 2, 0, 0, 1);
  const auto b = el2(full2, 0, 1, 0, 0);
  const auto pair = make_lambda_pair(a, b, Scalar(2.0), Tolerances{}, nullptr);

  OpTrace trace;
  const auto dt = subtract_lambda(pair, SeriesPolicy{}, Tolerances{}, &trace);
  CHECK(gap(dt.result, el2(full2, 0.5, 0.5, 0, 1)) < 1e-14);  // (a - b)^-1
  CHECK(dt.series_left_terms <= 3);
  CHECK(dt.series_right_terms <= 3);

  const auto finite = subtract_lambda_finite(pair, Tolerances{}, &trace);
  CHECK(gap(finite, dt.result) < 1e-14);
}

TEST_CASE("lambda = 1 reduces to the commuting theory") {
  const auto a = el2(full2, 2, 1, 0, 0);
  const auto b = identity_element(full2);
  const auto pair = make_lambda_pair(a, b, Scalar(1.0), Tolerances{}, nullptr);

  const auto prod = product_lambda(pair, Tolerances{}, nullptr);
  CHECK(gap(prod, product_commuting(a, b, Tolerances{}, nullptr)) < 1e-14);

  const auto dt = subtract_lambda(pair, SeriesPolicy{}, Tolerances{}, nullptr);
  const auto direct = pdrazin::pdrazin(a - b).inverse;
  CHECK(gap(dt.result, direct) < 1e-12);
}
