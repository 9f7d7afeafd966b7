#include "pdrazin/generators.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <string>

#include "pdrazin/drazin.hpp"

namespace pdrazin {

namespace {

// ============================================================================
// Deterministic randomness
// ============================================================================

// Uniform doubles straight from the raw engine bits, so identical specs give
// bit-identical instances independent of the standard library's distribution
// implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int lo, int hi) {  // inclusive
    const int span = hi - lo + 1;
    int v = lo + static_cast<int>(uniform() * span);
    return std::min(v, hi);
  }

  bool chance(double p) { return uniform() < p; }

  Scalar phase() {
    const double t = 2.0 * std::numbers::pi * uniform();
    return Scalar{std::cos(t), std::sin(t)};
  }

  /// Magnitude in [lo, hi], uniform random phase.
  Scalar cnum(double lo, double hi) { return uniform(lo, hi) * phase(); }

  double gauss() {
    const double u = std::max(uniform(), 1e-300);
    const double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
  }

  Scalar cgauss() { return Scalar{gauss(), gauss()}; }

  std::uint64_t fork() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

// ============================================================================
// Matrix building blocks
// ============================================================================

Matrix random_unitary(Rng& rng, int n) {
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.cgauss();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const Scalar d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

// Invertible similarity with condition number <= ~1.6, inverse assembled from
// the same factors so S * S_inv is the identity to rounding.
struct Similarity {
  Matrix s;
  Matrix s_inv;
};

Similarity make_similarity(Rng& rng, int n) {
  const Matrix u = random_unitary(rng, n);
  const Matrix v = random_unitary(rng, n);
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d(i) = rng.uniform(0.8, 1.25);
  Similarity out;
  out.s = u * d.asDiagonal() * v.adjoint();
  out.s_inv = v * d.cwiseInverse().asDiagonal() * u.adjoint();
  return out;
}

// Invertible block with singular values in [1.5, 3]: kept well above the
// nilpotent-chain scale so inverses stay small after normalization.
Matrix invertible_core(Rng& rng, int k) {
  if (k == 0) return Matrix(0, 0);
  const Matrix u = random_unitary(rng, k);
  const Matrix v = random_unitary(rng, k);
  Eigen::VectorXd d(k);
  for (int i = 0; i < k; ++i) d(i) = rng.uniform(1.5, 3.0);
  return u * d.asDiagonal() * v.adjoint();
}

// Jordan-type nilpotent chain: superdiagonal entries of moderate size.
Matrix nilpotent_chain(Rng& rng, int c) {
  Matrix n = Matrix::Zero(c, c);
  for (int i = 0; i + 1 < c; ++i) n(i, i + 1) = rng.cnum(0.7, 1.3);
  return n;
}

Matrix toeplitz_block(int d, const std::vector<Scalar>& coeffs) {
  Matrix m = Matrix::Zero(d, d);
  for (int k = 0; k < static_cast<int>(coeffs.size()) && k < d; ++k)
    for (int i = 0; i + k < d; ++i) m(i, i + k) = coeffs[k];
  return m;
}

// Truncated-polynomial coefficients with the constant term either zero
// (nilpotent, lowest degree nu) or dominant (invertible with a tame inverse).
std::vector<Scalar> random_poly_coeffs(Rng& rng, int order, bool invertible, int nu = 1) {
  std::vector<Scalar> c(order, Scalar{0.0, 0.0});
  if (invertible) {
    c[0] = rng.cnum(0.8, 2.2);
    for (int d = 1; d < order; ++d)
      if (rng.chance(0.6)) c[d] = rng.cnum(0.0, 0.4 * std::max(std::abs(c[0]), 1.0));
  } else if (nu < order) {
    c[nu] = rng.cnum(0.7, 1.3);
    for (int d = nu + 1; d < order; ++d)
      if (rng.chance(0.5)) c[d] = rng.cnum(0.0, 0.5 * std::abs(c[nu]));
  }
  return c;
}

AlgebraElement normalized(AlgebraElement e) {
  const double n = norm(e);
  if (n > 0.0) e.matrix /= n;
  return e;
}

AlgebraElement conjugated(const AlgebraContext& ctx, const Matrix& block_form,
                          const Similarity* sim) {
  if (!sim) return AlgebraElement{ctx, block_form};
  return AlgebraElement{ctx, sim->s * block_form * sim->s_inv};
}

bool pattern_allows_similarity(const AlgebraContext& ctx) {
  return ctx.kind() == AlgebraContext::Kind::full_matrix;
}

// Random valid dense draw, used for second operands and radical members.
// Nonzero entries keep modulus >= 0.3: a draw whose zero pattern happens to
// be triangular takes its eigenvalues straight from the diagonal, and an
// epsilon-close-to-singular invertible direction is not certifiable by the
// oracle at the working tolerances. Entries are either exactly zero or tame.
Matrix random_pattern_matrix(Rng& rng, const AlgebraContext& ctx) {
  const int n = ctx.rep_dim();
  Matrix m = Matrix::Zero(n, n);
  switch (ctx.kind()) {
    case AlgebraContext::Kind::full_matrix:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (rng.chance(0.85)) m(i, j) = rng.cnum(0.3, 1.0);
      break;
    case AlgebraContext::Kind::upper_triangular:
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
          if (rng.chance(0.85)) m(i, j) = rng.cnum(0.3, 1.0);
      break;
    case AlgebraContext::Kind::truncated_polynomial: {
      std::vector<Scalar> c(n);
      for (int d = 0; d < n; ++d) c[d] = rng.chance(0.85) ? rng.cnum(0.3, 1.0) : Scalar{};
      m = toeplitz_block(n, c);
      break;
    }
    case AlgebraContext::Kind::direct_sum: {
      int off = 0;
      for (const auto& s : ctx.summands()) {
        const int d = s.rep_dim();
        m.block(off, off, d, d) = random_pattern_matrix(rng, s);
        off += d;
      }
      break;
    }
  }
  return m;
}

int index_of_nilpotent_poly(int order, int nu) { return (order + nu - 1) / nu; }

}  // namespace

// ============================================================================
// Achievable indices
// ============================================================================

std::vector<int> achievable_indices(const AlgebraContext& ctx) {
  std::set<int> out{0};
  switch (ctx.kind()) {
    case AlgebraContext::Kind::full_matrix:
    case AlgebraContext::Kind::upper_triangular:
      for (int t = 1; t <= ctx.rep_dim(); ++t) out.insert(t);
      break;
    case AlgebraContext::Kind::truncated_polynomial:
      for (int nu = 1; nu <= ctx.dim(); ++nu) out.insert(index_of_nilpotent_poly(ctx.dim(), nu));
      break;
    case AlgebraContext::Kind::direct_sum:
      for (const auto& s : ctx.summands())
        for (int t : achievable_indices(s)) out.insert(t);
      break;
  }
  return {out.begin(), out.end()};
}

// ============================================================================
// gen_with_index
// ============================================================================

namespace {

void require_achievable(const AlgebraContext& ctx, int target) {
  const auto idx = achievable_indices(ctx);
  if (std::find(idx.begin(), idx.end(), target) == idx.end())
    throw StructuralError("index " + std::to_string(target) + " is not achievable in " +
                          ctx.describe());
}

// Chain layout for matrix kinds: one chain of the target size plus optional
// shorter chains, invertible core on the rest.
std::vector<int> chain_sizes(Rng& rng, int n, int target) {
  std::vector<int> chains;
  if (target == 0) return chains;
  chains.push_back(target);
  int leftover = n - target;
  while (leftover >= 2 && rng.chance(0.3)) {
    const int c = rng.uniform_int(1, std::min(target, leftover - 1));
    chains.push_back(c);
    leftover -= c;
  }
  return chains;
}

AlgebraElement gen_with_index_matrix(Rng& rng, const AlgebraContext& ctx, int target) {
  const int n = ctx.rep_dim();
  const bool full = ctx.kind() == AlgebraContext::Kind::full_matrix;
  const auto chains = chain_sizes(rng, n, target);
  int nil_total = 0;
  for (int c : chains) nil_total += c;
  const int core = n - nil_total;

  Matrix d = Matrix::Zero(n, n);
  if (full) {
    d.block(0, 0, core, core) = invertible_core(rng, core);
  } else {
    // upper triangular core: dominant diagonal, modest strictly-upper fill
    for (int i = 0; i < core; ++i) {
      d(i, i) = rng.cnum(1.5, 3.0);
      for (int j = i + 1; j < core; ++j)
        if (rng.chance(0.7)) d(i, j) = rng.cnum(0.0, 0.4);
    }
  }
  int off = core;
  for (int c : chains) {
    d.block(off, off, c, c) = nilpotent_chain(rng, c);
    off += c;
  }
  if (!full && core > 0 && nil_total > 0) {
    // couple the core to the chains; chains stay uncoupled from each other
    for (int i = 0; i < core; ++i)
      for (int j = core; j < n; ++j)
        if (rng.chance(0.5)) d(i, j) = rng.cnum(0.0, 0.4);
  }

  if (full) {
    const Similarity sim = make_similarity(rng, n);
    return normalized(conjugated(ctx, d, &sim));
  }
  return normalized(AlgebraElement{ctx, d});
}

AlgebraElement gen_with_index_trunc(Rng& rng, const AlgebraContext& ctx, int target) {
  const int m = ctx.dim();
  if (target == 0)
    return normalized(AlgebraElement{ctx, toeplitz_block(m, random_poly_coeffs(rng, m, true))});
  std::vector<int> nus;
  for (int nu = 1; nu <= m; ++nu)
    if (index_of_nilpotent_poly(m, nu) == target) nus.push_back(nu);
  if (nus.empty())
    throw StructuralError("index " + std::to_string(target) + " is not achievable in " +
                          ctx.describe());
  const int nu = nus[rng.uniform_int(0, static_cast<int>(nus.size()) - 1)];
  return normalized(
      AlgebraElement{ctx, toeplitz_block(m, random_poly_coeffs(rng, m, false, nu))});
}

AlgebraElement gen_with_index_impl(Rng& rng, const AlgebraContext& ctx, int target) {
  switch (ctx.kind()) {
    case AlgebraContext::Kind::full_matrix:
    case AlgebraContext::Kind::upper_triangular:
      return gen_with_index_matrix(rng, ctx, target);
    case AlgebraContext::Kind::truncated_polynomial:
      return gen_with_index_trunc(rng, ctx, target);
    case AlgebraContext::Kind::direct_sum: {
      // one summand carries the target, the rest draw achievable indices <= target
      const auto& parts = ctx.summands();
      std::vector<int> carriers;
      for (int i = 0; i < static_cast<int>(parts.size()); ++i) {
        const auto ach = achievable_indices(parts[i]);
        if (std::find(ach.begin(), ach.end(), target) != ach.end()) carriers.push_back(i);
      }
      if (carriers.empty())
        throw StructuralError("index " + std::to_string(target) + " is not achievable in " +
                              ctx.describe());
      const int carrier = carriers[rng.uniform_int(0, static_cast<int>(carriers.size()) - 1)];
      Matrix m = Matrix::Zero(ctx.rep_dim(), ctx.rep_dim());
      int off = 0;
      for (int i = 0; i < static_cast<int>(parts.size()); ++i) {
        const int d = parts[i].rep_dim();
        int sub_target = target;
        if (i != carrier) {
          std::vector<int> small;
          for (int t : achievable_indices(parts[i]))
            if (t <= target) small.push_back(t);
          sub_target = small[rng.uniform_int(0, static_cast<int>(small.size()) - 1)];
        }
        m.block(off, off, d, d) = gen_with_index_impl(rng, parts[i], sub_target).matrix;
        off += d;
      }
      return normalized(AlgebraElement{ctx, std::move(m)});
    }
  }
  throw StructuralError("unknown context kind");
}

}  // namespace

AlgebraElement gen_with_index(const RandomSpec& spec) {
  require_achievable(spec.context, spec.target_index);
  Rng rng(spec.seed);
  AlgebraElement out = gen_with_index_impl(rng, spec.context, spec.target_index);
  const int got = drazin_index(out);
  if (got != spec.target_index)
    throw ConsistencyError("generator produced index " + std::to_string(got) + " instead of " +
                           std::to_string(spec.target_index) + " in " +
                           spec.context.describe());
  return out;
}

// ============================================================================
// Commuting pairs
// ============================================================================

namespace {

enum class BlockProfile { free_draw, invertible, nilpotent, zero };

std::vector<Scalar> profiled_coeffs(Rng& rng, int size, BlockProfile profile) {
  switch (profile) {
    case BlockProfile::invertible:
      return random_poly_coeffs(rng, size, true);
    case BlockProfile::nilpotent:
      return random_poly_coeffs(rng, size, false, 1 + (rng.chance(0.3) && size > 2 ? 1 : 0));
    case BlockProfile::zero:
      return std::vector<Scalar>(size, Scalar{0.0, 0.0});
    case BlockProfile::free_draw:
      return random_poly_coeffs(rng, size, rng.chance(0.65));
  }
  return {};
}

// After each element of a pair is normalized separately, the sum's core
// eigenvalues are ca[0]/|a| + cb[0]/|b| blockwise (eigenvalues are
// similarity invariant). The commuting-sum identities invert a + b and
// 1 + a^ddag b, so a near cancellation there leaves a genuinely invertible
// direction the oracle cannot certify at the working tolerances; offending
// constant terms of b are redrawn against the actual norms. Exact zeros
// (nilpotent blocks) never cancel and stay untouched.
bool cancellation_free(const Scalar& ca0, const Scalar& cb0, double na, double nb) {
  if (std::abs(ca0) == 0.0 || std::abs(cb0) == 0.0) return true;
  const Scalar u = ca0 / na, v = cb0 / nb;
  return std::abs(u + v) >= 0.35 * std::max(std::abs(u), std::abs(v));
}

// Shared block partition; per-block Toeplitz draws commute exactly blockwise.
// a_target >= 0 pins a's Drazin index exactly: the first block carries a
// nilpotent chain of that order, all other a-blocks stay invertible.
// a_profile (when set) overrides the per-block profile of a.
struct PairPlan {
  int a_target = -1;
  std::optional<BlockProfile> a_profile;
};

std::pair<AlgebraElement, AlgebraElement> gen_commuting_impl(Rng& rng,
                                                             const AlgebraContext& ctx,
                                                             const PairPlan& plan) {
  switch (ctx.kind()) {
    case AlgebraContext::Kind::truncated_polynomial: {
      const int m = ctx.dim();
      std::vector<Scalar> ca;
      if (plan.a_profile) {
        ca = profiled_coeffs(rng, m, *plan.a_profile);
        if (*plan.a_profile == BlockProfile::zero && m > 1 && rng.chance(0.5))
          ca = profiled_coeffs(rng, m, BlockProfile::invertible);
      } else if (plan.a_target >= 0) {
        if (plan.a_target == 0) {
          ca = random_poly_coeffs(rng, m, true);
        } else {
          std::vector<int> nus;
          for (int nu = 1; nu <= m; ++nu)
            if (index_of_nilpotent_poly(m, nu) == plan.a_target) nus.push_back(nu);
          if (nus.empty())
            throw StructuralError("pair index target not achievable in " + ctx.describe());
          ca = random_poly_coeffs(rng, m, false,
                                  nus[rng.uniform_int(0, static_cast<int>(nus.size()) - 1)]);
        }
      } else {
        ca = profiled_coeffs(rng, m, BlockProfile::free_draw);
      }
      auto cb = profiled_coeffs(rng, m, BlockProfile::free_draw);
      AlgebraElement ea{ctx, toeplitz_block(m, ca)};
      AlgebraElement eb{ctx, toeplitz_block(m, cb)};
      for (int round = 0; round < 8; ++round) {
        if (cancellation_free(ca[0], cb[0], norm(ea), norm(eb))) break;
        cb[0] = rng.cnum(0.8, 2.2);
        eb = AlgebraElement{ctx, toeplitz_block(m, cb)};
      }
      return {normalized(std::move(ea)), normalized(std::move(eb))};
    }
    case AlgebraContext::Kind::full_matrix:
    case AlgebraContext::Kind::upper_triangular: {
      const int n = ctx.rep_dim();
      std::vector<int> sizes;
      int used = 0;
      if (plan.a_target >= 1) {
        sizes.push_back(plan.a_target);  // chain block carrying a's index
        used = plan.a_target;
      }
      while (used < n) {
        const int s = rng.uniform_int(1, std::min(4, n - used));
        sizes.push_back(s);
        used += s;
      }

      std::vector<std::vector<Scalar>> cas(sizes.size()), cbs(sizes.size());
      for (std::size_t bi = 0; bi < sizes.size(); ++bi) {
        const int s = sizes[bi];
        BlockProfile pa = BlockProfile::free_draw;
        if (plan.a_profile) {
          pa = *plan.a_profile;
          if (pa == BlockProfile::zero && !rng.chance(0.4)) pa = BlockProfile::invertible;
        } else if (plan.a_target >= 0) {
          pa = BlockProfile::invertible;
        }
        if (plan.a_target >= 1 && bi == 0 && !plan.a_profile) {
          cas[bi] = random_poly_coeffs(rng, s, false, 1);  // nu = 1: index exactly s
        } else {
          cas[bi] = profiled_coeffs(rng, s, pa);
        }
        cbs[bi] = profiled_coeffs(rng, s, BlockProfile::free_draw);
      }

      std::optional<Similarity> sim;
      if (pattern_allows_similarity(ctx)) sim = make_similarity(rng, n);
      const auto assemble = [&](const std::vector<std::vector<Scalar>>& cs) {
        Matrix d = Matrix::Zero(n, n);
        int off = 0;
        for (std::size_t bi = 0; bi < sizes.size(); ++bi) {
          d.block(off, off, sizes[bi], sizes[bi]) = toeplitz_block(sizes[bi], cs[bi]);
          off += sizes[bi];
        }
        return conjugated(ctx, d, sim ? &*sim : nullptr);
      };

      AlgebraElement ea = assemble(cas);
      AlgebraElement eb = assemble(cbs);
      for (int round = 0; round < 8; ++round) {
        const double na = norm(ea), nb = norm(eb);
        bool redrew = false;
        for (std::size_t bi = 0; bi < sizes.size(); ++bi) {
          if (!cancellation_free(cas[bi][0], cbs[bi][0], na, nb)) {
            cbs[bi][0] = rng.cnum(0.8, 2.2);
            redrew = true;
          }
        }
        if (!redrew) break;
        eb = assemble(cbs);
      }
      return {normalized(std::move(ea)), normalized(std::move(eb))};
    }
    case AlgebraContext::Kind::direct_sum: {
      Matrix ma = Matrix::Zero(ctx.rep_dim(), ctx.rep_dim());
      Matrix mb = ma;
      int off = 0;
      for (const auto& s : ctx.summands()) {
        const int d = s.rep_dim();
        PairPlan sub = plan;
        if (plan.a_target >= 1) {
          // only summands that can reach the target carry it
          const auto ach = achievable_indices(s);
          sub.a_target =
              std::find(ach.begin(), ach.end(), plan.a_target) != ach.end() ? plan.a_target : 0;
        }
        auto [pa, pb] = gen_commuting_impl(rng, s, sub);
        ma.block(off, off, d, d) = pa.matrix;
        mb.block(off, off, d, d) = pb.matrix;
        off += d;
      }
      return {normalized(AlgebraElement{ctx, ma}), normalized(AlgebraElement{ctx, mb})};
    }
  }
  throw StructuralError("unknown context kind");
}

}  // namespace

std::pair<AlgebraElement, AlgebraElement> gen_commuting_pair(const RandomSpec& spec) {
  Rng rng(spec.seed);
  PairPlan plan;
  plan.a_target = spec.target_index;
  if (spec.target_index > 0) require_achievable(spec.context, spec.target_index);
  return gen_commuting_impl(rng, spec.context, plan);
}

std::pair<AlgebraElement, AlgebraElement> gen_commuting_pair_case(const RandomSpec& spec,
                                                                  SpecialCase which) {
  Rng rng(spec.seed);
  PairPlan plan;
  switch (which) {
    case SpecialCase::quasinilpotent: plan.a_profile = BlockProfile::nilpotent; break;
    case SpecialCase::invertible: plan.a_profile = BlockProfile::invertible; break;
    case SpecialCase::group: plan.a_profile = BlockProfile::zero; break;
  }
  return gen_commuting_impl(rng, spec.context, plan);
}

// ============================================================================
// Orthogonal families
// ============================================================================

namespace {

std::vector<AlgebraElement> gen_orthogonal_impl(Rng& rng, const AlgebraContext& ctx, int n) {
  std::vector<AlgebraElement> out;
  switch (ctx.kind()) {
    case AlgebraContext::Kind::full_matrix:
    case AlgebraContext::Kind::upper_triangular: {
      const int dim = ctx.rep_dim();
      // assign each coordinate to one of the n parts; empty parts give zero
      // elements, which are orthogonal to everything
      std::vector<int> part(dim);
      for (int i = 0; i < dim; ++i) part[i] = rng.uniform_int(0, n - 1);
      if (n >= 2 && dim >= 2) {
        part[0] = 0;  // keep the first two parts nonempty when possible
        part[1] = 1;
      }
      for (int p = 0; p < n; ++p) {
        const Matrix m = random_pattern_matrix(rng, ctx);
        Matrix masked = Matrix::Zero(dim, dim);
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j)
            if (part[i] == p && part[j] == p) masked(i, j) = m(i, j);
        out.push_back(normalized(AlgebraElement{ctx, std::move(masked)}));
      }
      break;
    }
    case AlgebraContext::Kind::truncated_polynomial: {
      const int m = ctx.dim();
      // lowest degrees nu_p with nu_p + nu_q >= m pairwise
      const int base = (m + 1) / 2;
      for (int p = 0; p < n; ++p) {
        if (base >= m) {  // order 1: only the zero element is nilpotent
          out.push_back(zero_element(ctx));
          continue;
        }
        const int nu = rng.uniform_int(base, m - 1);
        out.push_back(
            normalized(AlgebraElement{ctx, toeplitz_block(m, random_poly_coeffs(rng, m, false, nu))}));
      }
      break;
    }
    case AlgebraContext::Kind::direct_sum: {
      std::vector<Matrix> mats(n, Matrix::Zero(ctx.rep_dim(), ctx.rep_dim()));
      int off = 0;
      for (const auto& s : ctx.summands()) {
        const int d = s.rep_dim();
        auto sub = gen_orthogonal_impl(rng, s, n);
        for (int p = 0; p < n; ++p) mats[p].block(off, off, d, d) = sub[p].matrix;
        off += d;
      }
      for (int p = 0; p < n; ++p)
        out.push_back(normalized(AlgebraElement{ctx, std::move(mats[p])}));
      break;
    }
  }
  return out;
}

}  // namespace

std::pair<AlgebraElement, AlgebraElement> gen_orthogonal_pair(const RandomSpec& spec) {
  if (spec.context.rep_dim() < 2)
    throw StructuralError("orthogonal pairs need rep_dim >= 2");
  Rng rng(spec.seed);
  auto v = gen_orthogonal_impl(rng, spec.context, 2);
  return {std::move(v[0]), std::move(v[1])};
}

std::vector<AlgebraElement> gen_orthogonal_n(const RandomSpec& spec, int n) {
  if (n < 1) throw StructuralError("orthogonal family needs n >= 1");
  Rng rng(spec.seed);
  return gen_orthogonal_impl(rng, spec.context, n);
}

// ============================================================================
// Lambda pairs
// ============================================================================

namespace {

// Largest shift-block size whose diagonal stays within condition ~4; the
// lambda relation pins the diagonal ratio, so cond = |lambda|^(d-1).
int lambda_block_cap(Scalar lambda, int n) {
  const double mag = std::abs(lambda);
  const double skew = std::max(mag, 1.0 / mag);
  int d = 2;
  while (d < std::min(n, 6) && std::pow(skew, d) <= 4.0) ++d;
  return d;
}

int root_of_unity_order(Scalar lambda) {
  Scalar p{1.0, 0.0};
  for (int q = 1; q <= 6; ++q) {
    p *= lambda;
    if (std::abs(p - Scalar{1.0, 0.0}) < 1e-9) return q;
  }
  return 0;
}

void lambda_shift_block(Rng& rng, Scalar lambda, int d, Matrix& a, Matrix& b, int off) {
  // a = alpha * diag(lambda^(d-1) ... lambda, 1), b = beta * shift
  const Scalar alpha = rng.cnum(0.8, 1.25);
  const Scalar beta = rng.cnum(0.8, 1.25);
  Scalar p{1.0, 0.0};
  for (int i = d - 1; i >= 0; --i) {
    a(off + i, off + i) = alpha * p;
    p *= lambda;
  }
  for (int i = 0; i + 1 < d; ++i) b(off + i, off + i + 1) = beta;
}

void lambda_reversed_block(Rng& rng, Scalar lambda, int d, Matrix& a, Matrix& b, int off) {
  // a = alpha * shift, b = beta * diag(1, lambda, ..., lambda^(d-1))
  const Scalar alpha = rng.cnum(0.8, 1.25);
  const Scalar beta = rng.cnum(0.8, 1.25);
  for (int i = 0; i + 1 < d; ++i) a(off + i, off + i + 1) = alpha;
  Scalar p{1.0, 0.0};
  for (int i = 0; i < d; ++i) {
    b(off + i, off + i) = beta * p;
    p *= lambda;
  }
}

void lambda_weyl_block(Rng& rng, Scalar lambda, int q, Matrix& a, Matrix& b, int off) {
  // a = alpha * cyclic shift, b = beta * clock; needs lambda^q = 1, and then
  // (ab)(i, i+1 mod q) = lambda^(i+1 mod q) = lambda * (ba)(i, i+1 mod q).
  const Scalar alpha = rng.cnum(0.8, 1.25);
  const Scalar beta = rng.cnum(0.8, 1.25);
  for (int i = 0; i < q; ++i) a(off + i, off + (i + 1) % q) = alpha;
  Scalar p{1.0, 0.0};
  for (int i = 0; i < q; ++i) {
    b(off + i, off + i) = beta * p;
    p *= lambda;
  }
}

LambdaPair gen_lambda_impl(Rng& rng, const AlgebraContext& ctx, Scalar lambda) {
  if (lambda == Scalar{1.0, 0.0}) {
    auto [a, b] = gen_commuting_impl(rng, ctx, PairPlan{});
    return LambdaPair{std::move(a), std::move(b), lambda};
  }
  switch (ctx.kind()) {
    case AlgebraContext::Kind::truncated_polynomial: {
      // commutative: (1 - lambda) ab = 0 forces ab = 0, a degree split
      auto v = gen_orthogonal_impl(rng, ctx, 2);
      return LambdaPair{std::move(v[0]), std::move(v[1]), lambda};
    }
    case AlgebraContext::Kind::full_matrix:
    case AlgebraContext::Kind::upper_triangular: {
      const int n = ctx.rep_dim();
      const bool full = ctx.kind() == AlgebraContext::Kind::full_matrix;
      const int cap = lambda_block_cap(lambda, n);
      const int weyl = full ? root_of_unity_order(lambda) : 0;

      Matrix a = Matrix::Zero(n, n);
      Matrix b = Matrix::Zero(n, n);
      int off = 0;
      bool first = true;
      while (off < n) {
        const int room = n - off;
        enum { shift, reversed, weyl_block, scalar } type;
        if (room >= 2) {
          const double roll = rng.uniform();
          if (weyl >= 2 && weyl <= room && roll < 0.25) type = weyl_block;
          else if (roll < 0.55) type = shift;
          else if (roll < 0.85) type = reversed;
          else type = scalar;
          if (first && type == scalar) type = shift;  // keep one nontrivial block
        } else {
          type = scalar;
        }
        switch (type) {
          case shift: {
            const int d = rng.uniform_int(2, std::min(cap, room));
            lambda_shift_block(rng, lambda, d, a, b, off);
            off += d;
            break;
          }
          case reversed: {
            const int d = rng.uniform_int(2, std::min(cap, room));
            lambda_reversed_block(rng, lambda, d, a, b, off);
            off += d;
            break;
          }
          case weyl_block: {
            lambda_weyl_block(rng, lambda, weyl, a, b, off);
            off += weyl;
            break;
          }
          case scalar: {
            if (rng.chance(0.5)) a(off, off) = rng.cnum(0.5, 1.5);
            else b(off, off) = rng.cnum(0.5, 1.5);
            off += 1;
            break;
          }
        }
        first = false;
      }

      AlgebraElement ea{ctx, a}, eb{ctx, b};
      if (full) {
        const Similarity sim = make_similarity(rng, n);
        ea = conjugated(ctx, a, &sim);
        eb = conjugated(ctx, b, &sim);
      }
      return LambdaPair{normalized(std::move(ea)), normalized(std::move(eb)), lambda};
    }
    case AlgebraContext::Kind::direct_sum: {
      Matrix ma = Matrix::Zero(ctx.rep_dim(), ctx.rep_dim());
      Matrix mb = ma;
      int off = 0;
      for (const auto& s : ctx.summands()) {
        const int d = s.rep_dim();
        LambdaPair sub = gen_lambda_impl(rng, s, lambda);
        ma.block(off, off, d, d) = sub.a.matrix;
        mb.block(off, off, d, d) = sub.b.matrix;
        off += d;
      }
      return LambdaPair{normalized(AlgebraElement{ctx, std::move(ma)}),
                        normalized(AlgebraElement{ctx, std::move(mb)}), lambda};
    }
  }
  throw StructuralError("unknown context kind");
}

}  // namespace

LambdaPair gen_lambda_pair(const RandomSpec& spec) {
  const Scalar lambda = spec.lambda.value_or(Scalar{1.0, 0.0});
  if (lambda == Scalar{0.0, 0.0}) throw StructuralError("lambda must be nonzero");
  Rng rng(spec.seed);
  return gen_lambda_impl(rng, spec.context, lambda);
}

// ============================================================================
// Radical members and free elements
// ============================================================================

AlgebraElement gen_radical_member(const RandomSpec& spec) {
  Rng rng(spec.seed);
  const Matrix m = random_pattern_matrix(rng, spec.context);
  Matrix r = radical_project(spec.context, m);
  AlgebraElement e{spec.context, std::move(r)};
  if (norm(e) > 0.0) return normalized(std::move(e));
  return e;  // full_matrix: the radical is {0}
}

AlgebraElement gen_element(const RandomSpec& spec) {
  Rng rng(spec.seed);
  const auto ach = achievable_indices(spec.context);
  const int t = ach[rng.uniform_int(0, static_cast<int>(ach.size()) - 1)];
  RandomSpec sub = spec;
  sub.seed = rng.fork();
  sub.target_index = t;
  return gen_with_index(sub);
}

}  // namespace pdrazin
