#include "doctest.h"

#include "expandim/family.hpp"
#include "expandim/matrix.hpp"
#include "expandim/rng.hpp"
#include "expandim/subspace.hpp"
#include "oracles.hpp"

using namespace expandim;

namespace {

ExactMatrix random_matrix(const FieldSpec& f, std::size_t r, std::size_t c, Rng& rng, std::int64_t bound = 3) {
  ExactMatrix m(f, r, c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      m.set(i, j, f.is_rational() ? Scalar::from_int(f, rng.between(-bound, bound))
                                  : Scalar::residue(f, rng.below(f.p())));
    }
  }
  return m;
}

ExactMatrix row(const FieldSpec& f, std::initializer_list<std::int64_t> v) {
  return ExactMatrix::from_ints(f, 1, v.size(), v);
}

OperatorFamily family_of(const FieldSpec& f, std::size_t n, std::vector<ExactMatrix> ops) {
  OperatorFamily fam;
  fam.field = f;
  fam.n = n;
  fam.ops = std::move(ops);
  return fam;
}

}  // namespace

TEST_CASE("rref examples") {
  const auto q = FieldSpec::rationals();
  const auto f2 = FieldSpec::prime(2);
  auto id = ExactMatrix::identity(q, 4);
  CHECK(rref(id).reduced == id);
  CHECK(rref(id).rank == 4);
  ExactMatrix zero(q, 3, 3);
  CHECK(rref(zero).reduced == zero);
  CHECK(rref(zero).rank == 0);
  const auto r = rref(ExactMatrix::from_ints(f2, 2, 2, {1, 1, 1, 1}));
  CHECK(r.rank == 1);
  CHECK(r.reduced == ExactMatrix::from_ints(f2, 2, 2, {1, 1, 0, 0}));
}

TEST_CASE("span and sum examples") {
  const auto q = FieldSpec::rationals();
  const auto f2 = FieldSpec::prime(2);
  const auto w = span(ExactMatrix::from_ints(f2, 2, 3, {1, 0, 0, 1, 0, 0}));
  CHECK(w.dim() == 1);
  CHECK(w.basis() == row(f2, {1, 0, 0}));
  CHECK(span(ExactMatrix(q, 0, 3)).dim() == 0);
  CHECK(span(ExactMatrix::from_ints(q, 2, 2, {1, 2, 2, 4})).dim() == 1);

  const auto e1 = span(row(q, {1, 0})), e2 = span(row(q, {0, 1}));
  CHECK(subspace_sum(e1, e1) == e1);
  CHECK(subspace_sum(e1, e2).dim() == 2);
  CHECK(subspace_sum(span(row(f2, {1, 0})), span(row(f2, {1, 1}))).dim() == 2);
  CHECK_THROWS_AS(subspace_sum(e1, span(row(f2, {1, 0}))), Error);
  // Different generating sets of the same space compare equal.
  CHECK(span(ExactMatrix::from_ints(q, 2, 3, {1, 1, 0, 0, 1, 1})) ==
        span(ExactMatrix::from_ints(q, 2, 3, {1, 2, 1, 1, 0, -1})));
}

TEST_CASE("apply_operator and expansion_dim examples") {
  const auto q = FieldSpec::rationals();
  const auto f2 = FieldSpec::prime(2);
  const auto w = span(ExactMatrix::from_ints(q, 2, 3, {1, 2, 3, 0, 1, -1}));
  CHECK(apply_operator(ExactMatrix::identity(q, 3), w) == w);
  CHECK(apply_operator(ExactMatrix(q, 3, 3), w).dim() == 0);
  const auto swap = ExactMatrix::from_ints(q, 2, 2, {0, 1, 1, 0});
  CHECK(apply_operator(swap, span(row(q, {1, 0}))) == span(row(q, {0, 1})));
  CHECK_THROWS_AS(apply_operator(ExactMatrix::identity(q, 2), w), Error);

  const auto id3 = family_of(q, 3, {ExactMatrix::identity(q, 3), ExactMatrix::identity(q, 3)});
  CHECK(expansion_dim(id3, w) == 2);
  const auto swap2 = family_of(f2, 2, {ExactMatrix::from_ints(f2, 2, 2, {0, 1, 1, 0})});
  CHECK(expansion_dim(swap2, span(row(f2, {1, 0}))) == 2);
  CHECK(expansion_dim(swap2, span(row(f2, {1, 1}))) == 1);
  CHECK_THROWS_AS(expansion_dim(swap2, span(row(q, {1, 0}))), Error);
  CHECK_THROWS_AS(expansion_dim(swap2, span(row(f2, {1, 0, 0}))), Error);
}

TEST_CASE("enumeration examples") {
  const auto f2 = FieldSpec::prime(2);
  CHECK(enumerate_subspaces(f2, 3, 1).size() == 7);
  const auto all = enumerate_subspaces(f2, 4, 2);
  CHECK(all.size() == 35);
  CHECK(oracle::gaussian_binomial_product(2, 4, 2) == 35);
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL}) {
    const auto z = enumerate_subspaces(FieldSpec::prime(p), 4, 0);
    REQUIRE(z.size() == 1);
    CHECK(z[0].dim() == 0);
  }
  CHECK_THROWS_AS(SubspaceStream(FieldSpec::rationals(), 3, 1), Error);
  try {
    SubspaceStream(f2, 20, 10, 1000);
    FAIL("expected BudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BudgetExceeded);
  }
  // Order: pivot patterns lexicographic, first pattern {0,1} has all free
  // entries zero at the start.
  CHECK(all.front().pivots() == std::vector<std::size_t>{0, 1});
  CHECK(all.front().basis() == ExactMatrix::from_ints(f2, 2, 4, {1, 0, 0, 0, 0, 1, 0, 0}));
  CHECK(all.back().pivots() == std::vector<std::size_t>{2, 3});
}

TEST_CASE("enumeration counts match the product formula") {
  for (std::uint64_t p : {2ULL, 3ULL}) {
    for (std::size_t n = 0; n <= 6; ++n) {
      for (std::size_t d = 0; d <= n; ++d) {
        const auto expected = oracle::gaussian_binomial_product(p, n, d);
        REQUIRE(gaussian_binomial(p, n, d) == expected.get_ui());
        SubspaceStream s(FieldSpec::prime(p), n, d);
        std::uint64_t count = 0;
        std::optional<Subspace> prev;
        while (auto w = s.next()) {
          REQUIRE(w->dim() == d);
          if (prev) REQUIRE_FALSE(*prev == *w);
          prev = std::move(w);
          ++count;
        }
        REQUIRE(count == expected.get_ui());
      }
    }
  }
}

TEST_CASE("enumerated subspaces are pairwise distinct") {
  const auto f3 = FieldSpec::prime(3);
  const auto all = enumerate_subspaces(f3, 4, 2);
  std::set<std::string> seen;
  for (const auto& w : all) seen.insert(w.basis().to_string());
  CHECK(seen.size() == all.size());
}

TEST_CASE("random_subspace") {
  const auto q = FieldSpec::rationals();
  const auto f5 = FieldSpec::prime(5);
  for (const auto& f : {q, f5}) {
    CHECK(random_subspace(f, 5, 0, 9).dim() == 0);
    const auto full = random_subspace(f, 5, 5, 9);
    CHECK(full == Subspace::span(ExactMatrix::identity(f, 5)));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto a = random_subspace(f, 6, 3, seed);
      CHECK(a.dim() == 3);
      CHECK(a == random_subspace(f, 6, 3, seed));
    }
    CHECK_FALSE(random_subspace(f, 6, 3, 1) == random_subspace(f, 6, 3, 2));
  }
}

TEST_CASE("rref is idempotent and rank is transpose invariant") {
  Rng rng(11);
  for (const auto& f : {FieldSpec::rationals(), FieldSpec::prime(2), FieldSpec::prime(7)}) {
    for (int i = 0; i < 1000; ++i) {
      const auto r = 1 + rng.below(6), c = 1 + rng.below(6);
      auto m = random_matrix(f, r, c, rng, 2);
      // Force some rank deficiency now and then.
      if (r > 1 && rng.below(3) == 0) {
        for (std::size_t j = 0; j < c; ++j) m.set(r - 1, j, m.at(0, j) + m.at(1 % r, j));
      }
      const auto once = rref(m);
      REQUIRE(rref(once.reduced).reduced == once.reduced);
      REQUIRE(rank(m) == rank(m.transpose()));
      REQUIRE(once.rank == once.pivots.size());
    }
  }
}

TEST_CASE("intersection dimension identity") {
  Rng rng(5);
  for (const auto& f : {FieldSpec::rationals(), FieldSpec::prime(2), FieldSpec::prime(3)}) {
    for (int i = 0; i < 300; ++i) {
      const std::size_t n = 2 + rng.below(6);
      auto a = random_matrix(f, 1 + rng.below(n), n, rng, 2);
      auto b = random_matrix(f, 1 + rng.below(n), n, rng, 2);
      // Share a row so the intersection is often nontrivial.
      for (std::size_t j = 0; j < n; ++j) b.set(0, j, a.at(0, j));
      const auto w1 = span(a), w2 = span(b);
      const auto sum = subspace_sum(w1, w2);
      const auto meet = subspace_intersection(w1, w2);
      REQUIRE(sum.dim() + meet.dim() == w1.dim() + w2.dim());
      for (std::size_t r = 0; r < meet.dim(); ++r) {
        const auto v = meet.basis().row_slice(r, r + 1);
        REQUIRE(w1.contains(v));
        REQUIRE(w2.contains(v));
      }
    }
  }
}

TEST_CASE("kernel, inverse and determinant") {
  const auto q = FieldSpec::rationals();
  const auto m = ExactMatrix::from_ints(q, 2, 3, {1, 2, 3, 2, 4, 6});
  const auto k = kernel(m);
  CHECK(k.rows() == 2);
  CHECK(m * k.transpose() == ExactMatrix(q, 2, 2));
  const auto a = ExactMatrix::from_ints(q, 3, 3, {2, 1, 0, 1, 3, 1, 0, 1, 4});
  CHECK(determinant(a) == Scalar::from_int(q, 18));
  const auto inv = inverse(a);
  REQUIRE(inv);
  CHECK(a * *inv == ExactMatrix::identity(q, 3));
  CHECK_FALSE(inverse(m.transpose().row_slice(0, 2)).has_value());
  const auto f7 = FieldSpec::prime(7);
  CHECK(determinant(ExactMatrix::from_ints(f7, 2, 2, {3, 1, 1, 3})) == Scalar::from_int(f7, 8));
  CHECK(rank_mod(ExactMatrix::from_ints(q, 2, 2, {3, 1, 1, 3}), 2) == 1);
}

TEST_CASE("expansion_dim is monotone in the family") {
  Rng rng(17);
  for (const auto& f : {FieldSpec::rationals(), FieldSpec::prime(3)}) {
    for (int i = 0; i < 200; ++i) {
      const std::size_t n = 2 + rng.below(5);
      auto fam = family_of(f, n, {random_matrix(f, n, n, rng)});
      const auto w = random_subspace(f, n, 1 + rng.below(n / 2), rng.next());
      auto before = expansion_dim(fam, w);
      for (int extra = 0; extra < 3; ++extra) {
        fam.ops.push_back(random_matrix(f, n, n, rng));
        const auto after = expansion_dim(fam, w);
        REQUIRE(after >= before);
        before = after;
      }
    }
  }
}
