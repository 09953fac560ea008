#include "doctest.h"

#include <cmath>

#include "expandim/constructions.hpp"
#include "expandim/rng.hpp"
#include "expandim/spectral.hpp"

using namespace expandim;

namespace {

const FieldSpec kQ = FieldSpec::rationals();

CVector random_vector(Eigen::Index n, Rng& rng) {
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = {rng.normal(), rng.normal()};
  return v / v.norm();
}

CMatrix random_trace_zero(std::size_t n, Rng& rng) {
  const auto basis = trace_zero_basis(n);
  CMatrix t = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (const auto& b : basis) t += std::complex<double>(rng.normal(), rng.normal()) * b;
  return t;
}

CMatrix conjugate(const CMatrix& r, const CMatrix& t) { return r * t * r.adjoint(); }

// Coordinates of a trace-zero matrix in trace_zero_basis.
CVector coords(const CMatrix& t) {
  const auto basis = trace_zero_basis(static_cast<std::size_t>(t.rows()));
  CVector c(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t a = 0; a < basis.size(); ++a) c(static_cast<Eigen::Index>(a)) = (t * basis[a].adjoint()).trace();
  return c;
}

}  // namespace

TEST_CASE("unitarize permutation family") {
  PermutationAction id{{"a", "b", "c"}, {"e"}, {{0, 1, 2}}};
  const auto r = unitarize_permutation_family(id);
  CHECK(r.dim() == 2);
  CHECK((r.mats[0] - CMatrix::Identity(2, 2)).norm() < 1e-12);

  PermutationAction tr{{"a", "b", "c", "d"}, {"t"}, {{2, 1, 0, 3}}};
  const auto rt = unitarize_permutation_family(tr);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rt.mats[0]);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    CHECK(std::abs(std::abs(es.eigenvalues()(i)) - 1.0) < 1e-12);
  }

  const auto r5 = unitarize_permutation_family(sl2p_projective_action(5));
  CHECK(r5.dim() == 5);
  CHECK(r5.unitarity_defect < 1e-9);
  CHECK(unitarity_defect(r5.mats) < 1e-9);

  const auto h = helmert_basis(6);
  CHECK((h.transpose() * h - Eigen::MatrixXd::Identity(5, 5)).norm() < 1e-12);
  CHECK((Eigen::RowVectorXd::Ones(6) * h).norm() < 1e-12);
  CHECK_THROWS_AS(make_unitary_rep({"s"}, {CMatrix::Constant(2, 2, 1.0)}), Error);
}

TEST_CASE("unitary model is conjugate to the exact sum-zero model") {
  // Both realize the same representation, so traces of every word agree.
  const auto act = sl2p_projective_action(7);
  const auto exact = perm_to_sumzero_family(act, kQ);
  const auto uni = unitarize_permutation_family(act);
  auto to_double = [](const ExactMatrix& m) {
    Eigen::MatrixXd d(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j) d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m.q(i, j).get_d();
    }
    return d;
  };
  const Eigen::MatrixXd a = to_double(exact.ops[0]), b = to_double(exact.ops[1]);
  CHECK(std::abs(a.trace() - uni.mats[0].trace().real()) < 1e-9);
  CHECK(std::abs((a * b).trace() - (uni.mats[0] * uni.mats[1]).trace().real()) < 1e-9);
  CHECK(std::abs((a * b * b * a * b).trace() - (uni.mats[0] * uni.mats[1] * uni.mats[1] * uni.mats[0] * uni.mats[1]).trace().real()) < 1e-9);
}

TEST_CASE("trace-zero basis is orthonormal") {
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto b = trace_zero_basis(n);
    REQUIRE(b.size() == n * n - 1);
    for (std::size_t i = 0; i < b.size(); ++i) {
      REQUIRE(std::abs(b[i].trace()) < 1e-12);
      for (std::size_t j = 0; j < b.size(); ++j) {
        const auto ip = (b[i] * b[j].adjoint()).trace();
        REQUIRE(std::abs(ip - (i == j ? 1.0 : 0.0)) < 1e-12);
      }
    }
  }
}

TEST_CASE("adjoint representation examples") {
  const auto id = make_unitary_rep({"s"}, {CMatrix::Identity(3, 3)});
  const auto adj_id = adjoint_rep(id);
  CHECK(adj_id.dim() == 8);
  CHECK((adj_id.mats[0] - CMatrix::Identity(8, 8)).norm() < 1e-12);

  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 1;
  d(1, 1) = -1;
  const auto adj = adjoint_rep(make_unitary_rep({"s"}, {d}));
  // Basis order: E_01, E_10, diag(1,-1)/sqrt2.
  CMatrix expected = CMatrix::Zero(3, 3);
  expected(0, 0) = -1;
  expected(1, 1) = -1;
  expected(2, 2) = 1;
  CHECK((adj.mats[0] - expected).norm() < 1e-12);

  const auto adj5 = adjoint_rep(unitarize_permutation_family(sl2p_projective_action(5)));
  CHECK(adj5.dim() == 24);
  CHECK(adj5.unitarity_defect < 1e-9);
}

TEST_CASE("adjoint matrices act as conjugation and preserve the inner product") {
  Rng rng(99);
  const auto rep = unitarize_permutation_family(sl2p_projective_action(5));
  const auto adj = adjoint_rep(rep);
  for (int i = 0; i < 200; ++i) {
    const auto t1 = random_trace_zero(5, rng), t2 = random_trace_zero(5, rng);
    for (std::size_t s = 0; s < rep.mats.size(); ++s) {
      const auto c1 = conjugate(rep.mats[s], t1), c2 = conjugate(rep.mats[s], t2);
      REQUIRE(std::abs(c1.trace()) < 1e-9);
      const auto before = (t1 * t2.adjoint()).trace();
      const auto after = (c1 * c2.adjoint()).trace();
      REQUIRE(std::abs(before - after) < 1e-9);
      REQUIRE((adj.mats[s] * coords(t1) - coords(c1)).norm() < 1e-9);
    }
  }
}

TEST_CASE("laplacian examples") {
  const auto id = make_unitary_rep({"a", "b"}, {CMatrix::Identity(3, 3), CMatrix::Identity(3, 3)});
  const auto l0 = laplacian(id);
  CHECK(l0.laplacian.norm() < 1e-12);
  CHECK(l0.fixed_dim == 3);
  CHECK(l0.all_fixed);
  CHECK(l0.lambda_min_perp == 0.0);
  CHECK_THROWS_AS(kazhdan_bounds(id), Error);

  const auto neg = make_unitary_rep({"s"}, {-CMatrix::Identity(1, 1)});
  const auto l1 = laplacian(neg);
  CHECK(std::abs(l1.lambda_min_perp - 4.0) < 1e-12);
  CHECK(l1.fixed_dim == 0);

  Rng rng(1);
  const auto rep = unitarize_permutation_family(sl2p_projective_action(7));
  const auto l = laplacian(rep);
  CHECK(((l.laplacian - l.laplacian.adjoint()).cwiseAbs().maxCoeff()) < 1e-10);
  for (int i = 0; i < 500; ++i) {
    const auto v = random_vector(7, rng);
    double sum = 0;
    for (const auto& r : rep.mats) sum += (r * v - v).squaredNorm();
    REQUIRE(std::abs((v.adjoint() * l.laplacian * v)(0).real() - sum) < 1e-9);
  }
}

TEST_CASE("kazhdan bounds examples") {
  const auto one = kazhdan_bounds(make_unitary_rep({"s"}, {-CMatrix::Identity(1, 1)}));
  CHECK(std::abs(one.kappa_lower - 2.0) < 1e-12);
  CHECK(std::abs(one.kappa_upper - 2.0) < 1e-12);
  const auto two = kazhdan_bounds(make_unitary_rep({"s", "t"}, {-CMatrix::Identity(1, 1), -CMatrix::Identity(1, 1)}));
  CHECK(std::abs(two.lambda_min_perp - 8.0) < 1e-12);
  CHECK(std::abs(two.kappa_lower - 2.0) < 1e-12);

  const auto adj5 = kazhdan_bounds(adjoint_rep(unitarize_permutation_family(sl2p_projective_action(5))), 1);
  CHECK(adj5.fixed_dim == 0);
  CHECK(adj5.kappa_lower > 0);
  CHECK(adj5.kappa_lower <= adj5.kappa_upper + 1e-9);
  // The extremal eigenvector is a trial vector, so the upper bound is at most
  // its displacement.
  CHECK(adj5.kappa_upper <= max_displacement(adjoint_rep(unitarize_permutation_family(sl2p_projective_action(5))),
                                             adj5.extremal_vector) + 1e-12);
}

TEST_CASE("kazhdan bounds are reproducible and ordered") {
  for (std::uint64_t p : {3ULL, 5ULL, 7ULL}) {
    const auto adj = adjoint_rep(unitarize_permutation_family(sl2p_projective_action(p)));
    const auto a = kazhdan_bounds(adj, 42), b = kazhdan_bounds(adj, 42);
    CHECK(a.kappa_upper == b.kappa_upper);
    CHECK(a.kappa_lower == b.kappa_lower);
    CHECK(a.kappa_lower <= a.kappa_upper + 1e-9);
  }
}

TEST_CASE("averaging inequality on random unit vectors") {
  Rng rng(2);
  for (std::uint64_t p : {5ULL, 7ULL}) {
    const auto adj = adjoint_rep(unitarize_permutation_family(sl2p_projective_action(p)));
    const auto l = laplacian(adj);
    const auto s = static_cast<double>(adj.mats.size());
    for (int i = 0; i < 1000; ++i) {
      const auto v = random_vector(static_cast<Eigen::Index>(adj.dim()), rng);
      const double md = max_displacement(adj, v);
      const double quad = (v.adjoint() * l.laplacian * v)(0).real();
      REQUIRE(md * md >= quad / s - 1e-9);
      REQUIRE(md >= std::sqrt(l.lambda_min_perp / s) - 1e-9);
    }
  }
}

TEST_CASE("epsilon from the adjoint Kazhdan bound") {
  CHECK(std::abs(epsilon_from_kappa(0.6) - 0.03) < 1e-15);
  CHECK(epsilon_from_kappa(0.0) == 0.0);
  const auto r7 = prop21_certificate(sl2p_family(7), 1);
  CHECK(r7.epsilon > 0);
  CHECK(r7.irreducibility.commutant_dim == 1);
  CHECK(std::abs(r7.epsilon - r7.adjoint.kappa_lower * r7.adjoint.kappa_lower / 12) < 1e-15);
  // Regression anchor for the SL_2(7) pipeline.
  CHECK(r7.epsilon == doctest::Approx(0.01051687568).epsilon(1e-9));

  CHECK_THROWS_AS(prop21_certificate(make_unitary_rep({"s"}, {CMatrix::Identity(1, 1)})), Error);
  auto no_action = sl2p_family(5);
  no_action.action.reset();
  CHECK_THROWS_AS(prop21_certificate(no_action), Error);
  CHECK_THROWS_AS(prop21_certificate(sl2p_family(5, FieldSpec::prime(7))), Error);
}

TEST_CASE("irreducibility examples") {
  OperatorFamily id;
  id.n = 3;
  id.ops = {ExactMatrix::identity(kQ, 3)};
  const auto r = irreducibility_check(id);
  CHECK(r.commutant_dim == 9);
  CHECK_FALSE(r.irreducible);
  CHECK(r.numeric_commutant_dim == 9);

  const auto s5 = irreducibility_check(sl2p_family(5));
  CHECK(s5.commutant_dim == 1);
  CHECK(s5.irreducible);
  CHECK(s5.numeric_commutant_dim == 1);

  // Two copies of the SL_2(5) model side by side.
  const auto base = sl2p_family(5);
  OperatorFamily twice;
  twice.n = 10;
  for (const auto& t : base.ops) {
    ExactMatrix m(kQ, 10, 10);
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t j = 0; j < 5; ++j) {
        m.q(i, j) = t.q(i, j);
        m.q(i + 5, j + 5) = t.q(i, j);
      }
    }
    twice.ops.push_back(m);
  }
  const auto tw = irreducibility_check(twice);
  CHECK(tw.commutant_dim == 4);
  CHECK(tw.numeric_commutant_dim == 4);

  auto with_action = twice;
  with_action.action = base.action;
  CHECK_THROWS_AS(prop21_certificate(with_action), Error);

  // Sym(n) standard representation with (1 2) and the n-cycle is irreducible.
  for (std::size_t n = 3; n <= 6; ++n) CHECK(irreducibility_check(symmetric_standard_family(n, {}, kQ)).irreducible);
  // The 3-cycle alone on three points splits over C into two characters.
  CHECK(irreducibility_check(symmetric_standard_family(3, {{2, 3, 1}}, kQ)).commutant_dim == 2);
  CHECK_THROWS_AS(irreducibility_check(sl2p_family(5, FieldSpec::prime(7))), Error);
}

TEST_CASE("projection lemma examples") {
  const auto w = span(ExactMatrix::from_ints(kQ, 2, 4, {1, 2, 0, -1, 0, 1, 1, 1}));
  const auto pw = orthogonal_projection(w);
  const auto same = projection_lemma_check(make_projection_pair(pw, pw), w, w);
  CHECK(std::abs(same.lhs - 2.0) < 1e-9);
  CHECK(same.rhs == 2.0);
  CHECK(same.holds);

  const auto a = span(ExactMatrix::from_ints(kQ, 2, 4, {1, 0, 0, 0, 0, 1, 0, 0}));
  const auto b = span(ExactMatrix::from_ints(kQ, 2, 4, {0, 0, 1, 0, 0, 0, 0, 1}));
  const auto perp = projection_lemma_check(make_projection_pair(orthogonal_projection(a), orthogonal_projection(b)), a, b);
  CHECK(std::abs(perp.lhs) < 1e-12);
  CHECK(perp.rhs == -4.0);
  CHECK(perp.holds);

  const auto one = span(ExactMatrix::from_ints(kQ, 1, 4, {1, 0, 0, 0}));
  CHECK_THROWS_AS(make_projection_pair(orthogonal_projection(a), orthogonal_projection(one)), Error);
  CHECK_THROWS_AS(make_projection_pair(CMatrix::Constant(2, 2, 1.0), CMatrix::Constant(2, 2, 1.0)), Error);
}

TEST_CASE("projection lemma holds on random pairs") {
  Rng rng(10);
  for (int i = 0; i < 2000; ++i) {
    const std::size_t n = 2 + rng.below(9);
    const std::size_t m = 1 + rng.below(n / 2);
    const auto w = random_subspace(kQ, n, m, rng.next(), 3);
    // Reuse r basis rows of W so the pairs overlap to a varying degree.
    const std::size_t r = rng.below(m + 1);
    ExactMatrix rows = w.basis().row_slice(0, r);
    if (m > r) rows.append_rows(random_subspace(kQ, n, m - r, rng.next(), 3).basis());
    const auto w2 = span(rows);
    if (w2.dim() != m) continue;
    const auto res = projection_lemma_check(make_projection_pair(orthogonal_projection(w), orthogonal_projection(w2)), w, w2);
    REQUIRE(res.holds);
  }
}

TEST_CASE("Q norm identity for all n <= 32") {
  const auto zero = q_norm_identity_check(5, Subspace(kQ, 5));
  CHECK(zero.lhs == doctest::Approx(0.0));
  CHECK(zero.rhs == 0.0);
  const auto half = q_norm_identity_check(2, span(ExactMatrix::from_ints(kQ, 1, 2, {1, 3})));
  CHECK(std::abs(half.lhs - 0.5) < 1e-12);
  CHECK(half.rhs == 0.5);
  const auto full = q_norm_identity_check(3, span(ExactMatrix::identity(kQ, 3)));
  CHECK(std::abs(full.lhs) < 1e-12);
  CHECK(full.rhs == 0.0);

  for (std::size_t n = 1; n <= 32; ++n) {
    for (std::size_t m = 0; m <= n; ++m) {
      const auto res = q_norm_identity_check(n, random_subspace(kQ, n, m, n * 100 + m, 2));
      REQUIRE(std::abs(res.lhs - res.rhs) < 1e-9);
      REQUIRE(std::abs(res.trace) < 1e-9);
    }
  }
}
