#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "pdrazin/algebra.hpp"
#include "pdrazin/identities.hpp"

namespace pdrazin {

/// Everything a generator needs; identical specs yield bit-identical output.
struct RandomSpec {
  std::uint64_t seed = 0;
  AlgebraContext context = AlgebraContext::full_matrix(2);
  int target_index = 0;
  std::optional<Scalar> lambda;
};

/// Drazin indices reachable by gen_with_index in this context. All of
/// 0..rep_dim for the matrix kinds; truncated_polynomial is a local algebra,
/// so only {0} and {ceil(m/v) : v = 1..m} occur; direct sums take unions.
std::vector<int> achievable_indices(const AlgebraContext& ctx);

/// Element with drazin_index exactly spec.target_index: invertible core plus
/// nilpotent chains of order target_index, conjugated by a well-conditioned
/// similarity where the context pattern allows one (identity similarity for
/// the triangular kinds), normalized to norm 1 (when nonzero). Throws
/// StructuralError for unreachable targets.
AlgebraElement gen_with_index(const RandomSpec& spec);

/// Exactly commuting pair: blockwise Toeplitz draws on a shared block
/// structure under a shared similarity. spec.target_index biases the
/// nilpotent structure of the first component.
std::pair<AlgebraElement, AlgebraElement> gen_commuting_pair(const RandomSpec& spec);

/// Commuting pair whose first component satisfies the requested specialized
/// case exactly (quasinilpotent / invertible / group-invertible).
std::pair<AlgebraElement, AlgebraElement> gen_commuting_pair_case(const RandomSpec& spec,
                                                                  SpecialCase which);

/// Pair with ab = ba = 0 as exact structural zeros: complementary coordinate
/// projections in the matrix kinds, a degree split in the polynomial kind.
std::pair<AlgebraElement, AlgebraElement> gen_orthogonal_pair(const RandomSpec& spec);

/// n pairwise orthogonal elements (structural zeros), n >= 1.
std::vector<AlgebraElement> gen_orthogonal_n(const RandomSpec& spec, int n);

/// Pair with ab = lambda * ba from weighted-shift blocks, scalar blocks and
/// (for root-of-unity lambda) invertible clock/shift blocks, sharing one
/// similarity. lambda = 1 reduces to a commuting pair; in the commutative
/// polynomial kind lambda != 1 forces ab = 0 and a degree split is used.
LambdaPair gen_lambda_pair(const RandomSpec& spec);

/// Random member of the radical of the context (exactly in-pattern), for
/// radical-stability checks. The zero element in full_matrix.
AlgebraElement gen_radical_member(const RandomSpec& spec);

/// Random valid element with no index constraint (used for second operands).
AlgebraElement gen_element(const RandomSpec& spec);

}  // namespace pdrazin
