#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the RREF, enumeration or certification code paths it checks.

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include <gmpxx.h>

namespace oracle {

/// d-dimensional subspaces of F_q^n from the product formula
/// prod_{i<d} (q^{n-i} - 1) / (q^{i+1} - 1).
inline mpz_class gaussian_binomial_product(unsigned long q, unsigned long n, unsigned long d) {
  if (d > n) return 0;
  mpz_class num = 1, den = 1, t;
  for (unsigned long i = 0; i < d; ++i) {
    mpz_ui_pow_ui(t.get_mpz_t(), q, n - i);
    num *= t - 1;
    mpz_ui_pow_ui(t.get_mpz_t(), q, i + 1);
    den *= t - 1;
  }
  return num / den;
}

/// |SL_n(F_q)| = q^{n(n-1)/2} prod_{i=2..n} (q^i - 1).
inline mpz_class sl_order(unsigned long q, unsigned long n) {
  mpz_class order, t;
  mpz_ui_pow_ui(order.get_mpz_t(), q, n * (n - 1) / 2);
  for (unsigned long i = 2; i <= n; ++i) {
    mpz_ui_pow_ui(t.get_mpz_t(), q, i);
    order *= t - 1;
  }
  return order;
}

// GF(2) polynomials as bit masks (bit i = coefficient of x^i).
inline int gf2_degree(std::uint64_t a) { return a ? 63 - __builtin_clzll(a) : -1; }

inline std::uint64_t gf2_mod(std::uint64_t a, std::uint64_t m) {
  const int dm = gf2_degree(m);
  while (gf2_degree(a) >= dm) a ^= m << (gf2_degree(a) - dm);
  return a;
}

/// Trial division by every polynomial of degree 1..deg/2.
inline bool gf2_irreducible_bruteforce(std::uint64_t f) {
  const int n = gf2_degree(f);
  for (std::uint64_t g = 2; gf2_degree(g) <= n / 2; ++g) {
    if (gf2_mod(f, g) == 0) return false;
  }
  return n >= 1;
}

/// Span of vectors in F_2^n (n <= 6), as the set of its members encoded in a
/// 64-bit membership mask.
inline std::uint64_t gf2_span_members(const std::vector<std::uint32_t>& gens) {
  std::set<std::uint32_t> members{0};
  for (auto g : gens) {
    std::set<std::uint32_t> next = members;
    for (auto m : members) next.insert(m ^ g);
    members = std::move(next);
  }
  std::uint64_t mask = 0;
  for (auto m : members) mask |= std::uint64_t{1} << m;
  return mask;
}

inline std::vector<std::uint32_t> members_of(std::uint64_t mask) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t v = 0; v < 64; ++v) {
    if (mask >> v & 1) out.push_back(v);
  }
  return out;
}

/// Apply a GF(2) matrix (ops[r] = bitmask row r) to a vector bitmask.
inline std::uint32_t gf2_apply(const std::vector<std::uint32_t>& rows, std::uint32_t v) {
  std::uint32_t out = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) out |= static_cast<std::uint32_t>(__builtin_parity(rows[r] & v)) << r;
  return out;
}

struct NaiveResult {
  mpq_class epsilon;
};

/// Naive epsilon over F_2 for n <= 5: every subspace of dim 1..n/2 is the span
/// of some set of at most n/2 vectors; dedupe by member set and take the min
/// of |closure(W ∪ T_i W)| in dimension terms.
inline NaiveResult gf2_naive_epsilon(std::size_t n, const std::vector<std::vector<std::uint32_t>>& ops) {
  const std::uint32_t count = 1u << n;
  std::set<std::uint64_t> subspaces;
  std::vector<std::uint32_t> chosen;
  auto recurse = [&](auto&& self, std::uint32_t start) -> void {
    if (!chosen.empty()) subspaces.insert(gf2_span_members(chosen));
    if (chosen.size() == n / 2) return;
    for (std::uint32_t v = start; v < count; ++v) {
      chosen.push_back(v);
      self(self, v + 1);
      chosen.pop_back();
    }
  };
  recurse(recurse, 1);
  bool first = true;
  mpq_class best;
  for (auto w : subspaces) {
    const auto mem = members_of(w);
    const int dim = __builtin_ctzll(static_cast<std::uint64_t>(mem.size()));
    if (dim < 1 || static_cast<std::size_t>(dim) > n / 2) continue;
    std::vector<std::uint32_t> gens = mem;
    for (const auto& t : ops) {
      for (auto m : mem) gens.push_back(gf2_apply(t, m));
    }
    const auto total = members_of(gf2_span_members(gens)).size();
    const int sum_dim = __builtin_ctzll(static_cast<std::uint64_t>(total));
    mpq_class ratio(sum_dim, dim);
    ratio.canonicalize();
    if (first || ratio < best) best = ratio;
    first = false;
  }
  return {best - 1};
}

}  // namespace oracle
