#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "expandim/family.hpp"
#include "expandim/poly.hpp"

namespace expandim {

/// Möbius action of A = [[1,1],[0,1]] and B = [[0,1],[-1,0]] on the
/// projective line {0, ..., p-1, ∞}; ∞ has index p.
PermutationAction sl2p_projective_action(std::uint64_t p);

/// Restriction of a permutation action to the sum-zero vectors, in the basis
/// f_i = e_i - e_last (i < last). Operators act on coordinate columns with
/// P_g e_i = e_{g(i)}, so the operator of "g then h" is M(h) M(g).
OperatorFamily perm_to_sumzero_family(const PermutationAction& act, FieldSpec field);

/// perm_to_sumzero_family of the projective-line action, tagged "sl2p".
OperatorFamily sl2p_family(std::uint64_t p, FieldSpec field = FieldSpec::rationals());

/// Matrix of a single permutation on the sum-zero basis above.
ExactMatrix sumzero_matrix(const std::vector<std::size_t>& perm, FieldSpec field);

struct SldGenerators {
  ExactMatrix a;
  ExactMatrix b;
};

/// A: e_1 -> e_1 + e_2; B: e_i -> e_{i+1}, e_d -> (-1)^{d-1} e_1. Over Q.
SldGenerators sld_generators(std::size_t d);

/// Canonical points of P^{d-1}(F_p): first nonzero coordinate 1, sorted.
std::vector<std::vector<std::uint64_t>> projective_points(std::size_t d, std::uint64_t p);

/// Action of A, B mod p on P^{d-1}(F_p).
PermutationAction sld_projective_action(std::size_t d, std::uint64_t p, std::uint64_t max_points = 100'000);

OperatorFamily sld_mod_p_projective_family(std::size_t d, std::uint64_t p, FieldSpec field,
                                           std::uint64_t max_points = 100'000);

/// Size of the group generated by the given d x d matrices mod p, found by
/// breadth-first search over words in the generators and their inverses.
std::size_t group_closure_size(const std::vector<ExactMatrix>& gens, std::uint64_t p,
                               std::size_t limit = 10'000'000);

/// Generators are one-line images of {1..n} (1-based). Empty gens selects
/// the transposition (1 2) and the cycle (1 2 ... n).
OperatorFamily symmetric_standard_family(std::size_t n, const std::vector<std::vector<std::size_t>>& gens,
                                         FieldSpec field);

struct CounterexampleInstance {
  OperatorFamily family;
  Subspace witness;
  PolyFp modulus;
};

/// Companion matrix of a monic polynomial: multiplication by x on
/// F_p[x]/(f) in the basis 1, x, ..., x^{n-1}.
ExactMatrix companion_matrix(const PolyFp& f);

/// Single companion operator of the smallest irreducible of degree n, with
/// witness span{1, x, ..., x^{⌊n/2⌋-1}}. literal_witness drops the constant
/// monomial: span{x, ..., x^{⌊n/2⌋-1}}.
CounterexampleInstance companion_counterexample(std::uint64_t p, std::size_t n, bool literal_witness = false);

/// companion ⊗ I_d on F_p^{nd} with witness W ⊗ F_p^d. Coordinates are
/// ordered (monomial index) * d + (block index).
CounterexampleInstance matrix_algebra_counterexample(std::uint64_t p, std::size_t n, std::size_t d);

/// k invertible operators: uniform over F_p, integers in [-bound, bound] over Q.
OperatorFamily random_family(FieldSpec field, std::size_t n, std::size_t k, std::uint64_t seed,
                             std::int64_t bound = kDefaultRationalBound);

}  // namespace expandim
