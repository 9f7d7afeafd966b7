#include "pdrazin/identities.hpp"

#include <cmath>
#include <sstream>

namespace pdrazin {

namespace {

// lambda^e for integer e, exact integer exponentiation.
Scalar ipow(Scalar base, long long e) {
  if (e < 0) return ipow(1.0 / base, -e);
  Scalar acc{1.0, 0.0};
  Scalar b = base;
  while (e > 0) {
    if (e & 1) acc *= b;
    b *= b;
    e >>= 1;
  }
  return acc;
}

double pair_scale(const AlgebraElement& a, const AlgebraElement& b) {
  return norm(a) * norm(b);
}

double equality_residual(const AlgebraElement& lhs, const AlgebraElement& rhs) {
  return norm(lhs - rhs) / std::max({1.0, norm(lhs), norm(rhs)});
}

}  // namespace

void require_hypothesis(const std::string& name, double residual, const Tolerances& tol,
                        OpTrace* trace) {
  if (trace) trace->hypothesis_residuals[name] = residual;
  if (residual >= tol.hypothesis_reject) {
    std::ostringstream os;
    os << "hypothesis '" << name << "' rejected: residual " << residual;
    throw HypothesisError(os.str());
  }
  if (residual > tol.tol_res && trace) {
    std::ostringstream os;
    os << "marginal hypothesis '" << name << "': residual " << residual << " between "
       << tol.tol_res << " and " << tol.hypothesis_reject;
    trace->warnings.push_back(os.str());
  }
}

double commutation_residual(const AlgebraElement& a, const AlgebraElement& b) {
  return rel_residual(norm(a * b - b * a), pair_scale(a, b));
}

// ============================================================================
// Terminating series
// ============================================================================

AlgebraElement terminating_series(const AlgebraElement& step, const AlgebraElement& tail,
                                  const SeriesPolicy& policy, int* terms_out) {
  return terminating_series(identity_element(step.context), step, tail, policy, terms_out);
}

AlgebraElement terminating_series(const AlgebraElement& lead, const AlgebraElement& step,
                                  const AlgebraElement& tail, const SeriesPolicy& policy,
                                  int* terms_out) {
  require_same_context(lead, step);
  require_same_context(step, tail);
  const int max_terms = policy.resolve_max_terms(step.context.rep_dim());

  AlgebraElement partial = tail;  // step^i * tail
  AlgebraElement term = lead * partial;
  const double threshold = policy.term_tol * std::max(1.0, norm(term));

  AlgebraElement sum = zero_element(step.context);
  for (int i = 0; i < max_terms; ++i) {
    if (norm(term) <= threshold) {
      if (terms_out) *terms_out = i;
      return sum;
    }
    sum = sum + term;
    partial = step * partial;
    term = lead * partial;
  }
  if (norm(term) <= threshold) {
    if (terms_out) *terms_out = max_terms;
    return sum;
  }
  std::ostringstream os;
  os << "series did not terminate within " << max_terms << " terms (last term norm "
     << norm(term) << ", threshold " << threshold << ")";
  throw SeriesDivergenceError(os.str());
}

// ============================================================================
// Commuting and orthogonal combinations
// ============================================================================

AlgebraElement product_commuting(const AlgebraElement& a, const AlgebraElement& b,
                                 const Tolerances& tol, OpTrace* trace) {
  require_same_context(a, b);
  require_hypothesis("commutation", commutation_residual(a, b), tol, trace);
  return pdrazin(a, tol).inverse * pdrazin(b, tol).inverse;
}

AlgebraElement add_orthogonal(const AlgebraElement& a, const AlgebraElement& b,
                              const Tolerances& tol, OpTrace* trace) {
  require_same_context(a, b);
  const double scale = pair_scale(a, b);
  require_hypothesis("ab_zero", rel_residual(norm(a * b), scale), tol, trace);
  require_hypothesis("ba_zero", rel_residual(norm(b * a), scale), tol, trace);
  return pdrazin(a, tol).inverse + pdrazin(b, tol).inverse;
}

AlgebraElement add_orthogonal_n(std::span<const AlgebraElement> elements, const Tolerances& tol,
                                OpTrace* trace) {
  if (elements.empty()) throw StructuralError("orthogonal sum needs at least one element");
  for (std::size_t i = 0; i < elements.size(); ++i)
    for (std::size_t j = i + 1; j < elements.size(); ++j) {
      const double scale = pair_scale(elements[i], elements[j]);
      std::ostringstream name;
      name << "orthogonality(a" << i + 1 << ",a" << j + 1 << ")";
      const double r = std::max(rel_residual(norm(elements[i] * elements[j]), scale),
                                rel_residual(norm(elements[j] * elements[i]), scale));
      require_hypothesis(name.str(), r, tol, trace);
    }
  AlgebraElement sum = zero_element(elements.front().context);
  for (const auto& e : elements) sum = sum + pdrazin(e, tol).inverse;
  return sum;
}

AlgebraElement add_commuting(const AlgebraElement& a, const AlgebraElement& b,
                             const SeriesPolicy& policy, const Tolerances& tol, OpTrace* trace) {
  require_same_context(a, b);
  require_hypothesis("commutation", commutation_residual(a, b), tol, trace);

  const PDrazinResult ra = pdrazin(a, tol);
  const PDrazinResult rb = pdrazin(b, tol);
  const AlgebraElement one = identity_element(a.context);

  const AlgebraElement c = one + ra.inverse * b;
  const AlgebraElement c_inv = pdrazin(c, tol).inverse;

  int terms = 0;
  const AlgebraElement step = -(rb.inverse * (a * ra.spectral_idempotent));
  const AlgebraElement series =
      terminating_series(step, ra.spectral_idempotent, policy, &terms);
  if (trace) trace->series_terms["sum_series"] = terms;

  return c_inv * ra.inverse + rb.inverse * series;
}

AlgebraElement one_plus_inverse_from_sum(const AlgebraElement& a, const AlgebraElement& b,
                                         const AlgebraElement& sum_inv, const Tolerances& tol,
                                         OpTrace* trace) {
  require_same_context(a, b);
  require_same_context(a, sum_inv);
  require_hypothesis("commutation", commutation_residual(a, b), tol, trace);

  // sum_inv must actually invert a+b in the pseudo-Drazin sense.
  const AlgebraElement s = a + b;
  bool checked = false;
  for (int k = 1; k <= s.context.rep_dim(); ++k) {
    const VerificationReport axioms = check_pdrazin_axioms(s, sum_inv, k, tol);
    if (axioms.pass) {
      checked = true;
      break;
    }
    // commutation/inner failures cannot be fixed by a different exponent
    if (axioms.axiom_residuals.at("commutation") > tol.tol_res ||
        axioms.axiom_residuals.at("inner") > tol.tol_res)
      break;
  }
  if (!checked)
    throw ConsistencyError("sum_inv fails the defining axioms for a+b");

  const PDrazinResult ra = pdrazin(a, tol);
  return ra.spectral_idempotent + (a * a) * ra.inverse * sum_inv;
}

AlgebraElement add_commuting_case(const AlgebraElement& a, const AlgebraElement& b,
                                  SpecialCase which, const SeriesPolicy& policy,
                                  const Tolerances& tol, OpTrace* trace) {
  require_same_context(a, b);
  require_hypothesis("commutation", commutation_residual(a, b), tol, trace);

  const PDrazinResult rb = pdrazin(b, tol);
  const AlgebraElement one = identity_element(a.context);

  switch (which) {
    case SpecialCase::quasinilpotent: {
      const int n = a.context.rep_dim();
      const double qres =
          norm(element_power(a, n)) / std::pow(std::max(1.0, norm(a)), n);
      require_hypothesis("a_quasinilpotent", qres, tol, trace);
      int terms = 0;
      const AlgebraElement series =
          terminating_series(-(rb.inverse * a), one, policy, &terms);
      if (trace) trace->series_terms["case_series"] = terms;
      return rb.inverse * series;
    }
    case SpecialCase::invertible: {
      const PDrazinResult ra = pdrazin(a, tol);
      require_hypothesis("a_invertible", norm(ra.spectral_idempotent) / std::max(1.0, norm(a)),
                         tol, trace);
      const AlgebraElement a_inv = ra.inverse;
      return pdrazin(one + a_inv * b, tol).inverse * a_inv;
    }
    case SpecialCase::group: {
      const PDrazinResult ra = pdrazin(a, tol);
      require_hypothesis("a_group_invertible",
                         rel_residual(norm(a * ra.spectral_idempotent), norm(a)), tol, trace);
      return pdrazin(one + ra.inverse * b, tol).inverse * ra.inverse +
             rb.inverse * ra.spectral_idempotent;
    }
  }
  throw StructuralError("unknown specialized case");
}

// ============================================================================
// Lambda-commuting pairs
// ============================================================================

double lambda_commutation_residual(const LambdaPair& p) {
  return rel_residual(norm(p.a * p.b - p.lambda * (p.b * p.a)), pair_scale(p.a, p.b));
}

LambdaPair make_lambda_pair(AlgebraElement a, AlgebraElement b, Scalar lambda,
                            const Tolerances& tol, OpTrace* trace) {
  require_same_context(a, b);
  if (lambda == Scalar{0.0, 0.0}) throw StructuralError("lambda must be nonzero");
  LambdaPair p{std::move(a), std::move(b), lambda};
  require_hypothesis("lambda_commutation", lambda_commutation_residual(p), tol, trace);
  return p;
}

VerificationReport lambda_power_identities(const LambdaPair& p, int n, const Tolerances& tol) {
  if (n < 1) throw StructuralError("power identities need n >= 1");
  VerificationReport rep;
  rep.identity = "lambda-power-identities";
  rep.hypothesis_residuals["lambda_commutation"] = lambda_commutation_residual(p);

  const Scalar l = p.lambda;
  const AlgebraElement an = element_power(p.a, n);
  const AlgebraElement bn = element_power(p.b, n);
  const AlgebraElement ab = p.a * p.b;
  const AlgebraElement ba = p.b * p.a;
  const PDrazinResult ra = pdrazin(p.a, tol);
  const PDrazinResult rb = pdrazin(p.b, tol);
  const AlgebraElement adn = element_power(ra.inverse, n);
  const AlgebraElement bdn = element_power(rb.inverse, n);

  const long long nn = n;
  const Scalar rise = ipow(l, nn * (nn - 1) / 2);   // l^(n(n-1)/2)
  const Scalar fall = ipow(l, -nn * (nn + 1) / 2);  // l^(-n(n+1)/2)

  auto put = [&rep](const std::string& name, const AlgebraElement& lhs,
                    const AlgebraElement& rhs) {
    rep.formula_residuals[name] = equality_residual(lhs, rhs);
  };

  put("a.b^n", p.a * bn, ipow(l, nn) * (bn * p.a));
  put("a^n.b", an * p.b, ipow(l, nn) * (p.b * an));
  put("(ab)^n=a^n.b^n", element_power(ab, n), (1.0 / rise) * (an * bn));
  put("(ab)^n=b^n.a^n", element_power(ab, n), (1.0 / fall) * (bn * an));
  put("(ba)^n=b^n.a^n", element_power(ba, n), rise * (bn * an));
  put("(ba)^n=a^n.b^n", element_power(ba, n), fall * (an * bn));
  put("(a'.b)^n=a'^n.b^n", element_power(ra.inverse * p.b, n), rise * (adn * bn));
  put("(a'.b)^n=b^n.a'^n", element_power(ra.inverse * p.b, n), fall * (bn * adn));
  put("(a.b')^n=a^n.b'^n", element_power(p.a * rb.inverse, n), rise * (an * bdn));
  put("(a.b')^n=b'^n.a^n", element_power(p.a * rb.inverse, n), fall * (bdn * an));

  double worst = 0.0;
  for (const auto& [name, r] : rep.formula_residuals) worst = std::max(worst, r);
  rep.formula_residual = worst;
  rep.tolerances_used["tol_acc"] = tol.tol_acc;
  rep.tolerances_used["tol_res"] = tol.tol_res;
  rep.pass = worst <= tol.tol_acc &&
             rep.hypothesis_residuals.at("lambda_commutation") <= tol.hypothesis_reject;
  return rep;
}

VerificationReport lambda_swap_relations(const LambdaPair& p, const Tolerances& tol) {
  VerificationReport rep;
  rep.identity = "lambda-swap-relations";
  rep.hypothesis_residuals["lambda_commutation"] = lambda_commutation_residual(p);

  const PDrazinResult ra = pdrazin(p.a, tol);
  const PDrazinResult rb = pdrazin(p.b, tol);
  const Scalar linv = 1.0 / p.lambda;
  const AlgebraElement aad = p.a * ra.inverse;
  const AlgebraElement bbd = p.b * rb.inverse;

  rep.formula_residuals["aa'.b=b.aa'"] = equality_residual(aad * p.b, p.b * aad);
  rep.formula_residuals["bb'.a=a.bb'"] = equality_residual(bbd * p.a, p.a * bbd);
  rep.formula_residuals["a'.b=l^-1.b.a'"] =
      equality_residual(ra.inverse * p.b, linv * (p.b * ra.inverse));
  rep.formula_residuals["a.b'=l^-1.b'.a"] =
      equality_residual(p.a * rb.inverse, linv * (rb.inverse * p.a));

  double worst = 0.0;
  for (const auto& [name, r] : rep.formula_residuals) worst = std::max(worst, r);
  rep.formula_residual = worst;
  rep.tolerances_used["tol_acc"] = tol.tol_acc;
  rep.pass = worst <= tol.tol_acc &&
             rep.hypothesis_residuals.at("lambda_commutation") <= tol.hypothesis_reject;
  return rep;
}

AlgebraElement product_lambda(const LambdaPair& p, const Tolerances& tol, OpTrace* trace) {
  require_hypothesis("lambda_commutation", lambda_commutation_residual(p), tol, trace);
  const AlgebraElement ad = pdrazin(p.a, tol).inverse;
  const AlgebraElement bd = pdrazin(p.b, tol).inverse;
  const AlgebraElement result = bd * ad;
  if (trace)
    trace->extra_residuals["b'a'_vs_scaled_a'b'"] =
        equality_residual(result, (1.0 / p.lambda) * (ad * bd));
  return result;
}

DifferenceTrace subtract_lambda(const LambdaPair& p, const SeriesPolicy& policy,
                                const Tolerances& tol, OpTrace* trace) {
  require_hypothesis("lambda_commutation", lambda_commutation_residual(p), tol, trace);

  const PDrazinResult ra = pdrazin(p.a, tol);
  const PDrazinResult rb = pdrazin(p.b, tol);
  const AlgebraElement diff = p.a - p.b;

  DifferenceTrace out{zero_element(p.a.context), zero_element(p.a.context), 0, 0,
                      zero_element(p.a.context)};
  out.w = snap_zero((p.a * ra.inverse) * diff * (p.b * rb.inverse),
                    norm(p.a * ra.inverse) * norm(diff) * norm(p.b * rb.inverse), tol);
  out.w_inverse = pdrazin(out.w, tol).inverse;

  const AlgebraElement left =
      terminating_series(p.b * ra.inverse, rb.spectral_idempotent, policy,
                         &out.series_left_terms);
  // The right series needs its leading idempotent inside the termination
  // test: (b'a)^i b' alone never decays when both elements are invertible.
  const AlgebraElement right =
      terminating_series(ra.spectral_idempotent, rb.inverse * p.a, rb.inverse, policy,
                         &out.series_right_terms);

  if (trace) {
    trace->series_terms["difference_series_left"] = out.series_left_terms;
    trace->series_terms["difference_series_right"] = out.series_right_terms;
  }
  out.result = out.w_inverse + ra.inverse * left - right;
  return out;
}

AlgebraElement subtract_lambda_finite(const LambdaPair& p, const Tolerances& tol,
                                      OpTrace* trace) {
  require_hypothesis("lambda_commutation", lambda_commutation_residual(p), tol, trace);

  const PDrazinResult ra = pdrazin(p.a, tol);
  const PDrazinResult rb = pdrazin(p.b, tol);
  const int s = std::max(ra.drazin_index, 1);
  const int t = std::max(rb.drazin_index, 1);

  const AlgebraElement w =
      snap_zero((p.a * ra.inverse) * (p.a - p.b) * (p.b * rb.inverse),
                norm(p.a * ra.inverse) * (norm(p.a) + norm(p.b)) * norm(p.b * rb.inverse), tol);
  const AlgebraElement w_inv = pdrazin(w, tol).inverse;

  AlgebraElement left_sum = zero_element(p.a.context);
  for (long long i = 0; i < t; ++i)
    left_sum = left_sum + ipow(p.lambda, i * (i + 1) / 2) *
                              (element_power(ra.inverse, static_cast<int>(i) + 1) *
                               element_power(p.b, static_cast<int>(i)));
  AlgebraElement right_sum = zero_element(p.a.context);
  for (long long i = 0; i < s; ++i)
    right_sum = right_sum + ipow(p.lambda, i * (i + 1) / 2) *
                                (element_power(p.a, static_cast<int>(i)) *
                                 element_power(rb.inverse, static_cast<int>(i) + 1));

  if (trace) {
    trace->series_terms["finite_left_terms"] = t;
    trace->series_terms["finite_right_terms"] = s;
  }
  return w_inv + rb.spectral_idempotent * left_sum - right_sum * ra.spectral_idempotent;
}

}  // namespace pdrazin
