#include "expandim/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "expandim/constructions.hpp"
#include "expandim/rng.hpp"

namespace expandim {

double unitarity_defect(const std::vector<CMatrix>& mats) {
  double worst = 0.0;
  for (const auto& m : mats) {
    const CMatrix d = m * m.adjoint() - CMatrix::Identity(m.rows(), m.cols());
    worst = std::max(worst, d.cwiseAbs().maxCoeff());
  }
  return worst;
}

UnitaryRep make_unitary_rep(std::vector<std::string> labels, std::vector<CMatrix> mats, double tol) {
  if (labels.size() != mats.size()) throw Error(ErrorCode::DimensionMismatch, "one matrix per label");
  for (const auto& m : mats) {
    if (m.rows() != m.cols() || m.rows() != mats.front().rows()) {
      throw Error(ErrorCode::DimensionMismatch, "representation matrices must be square and equal-sized");
    }
  }
  UnitaryRep rep{std::move(labels), std::move(mats), 0.0};
  rep.unitarity_defect = rep.mats.empty() ? 0.0 : unitarity_defect(rep.mats);
  if (rep.unitarity_defect > tol) {
    throw Error(ErrorCode::NumericalFailure, "unitarity defect " + std::to_string(rep.unitarity_defect));
  }
  return rep;
}

Eigen::MatrixXd helmert_basis(std::size_t big_n) {
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(big_n), static_cast<Eigen::Index>(big_n - 1));
  for (std::size_t k = 1; k < big_n; ++k) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(k * (k + 1)));
    for (std::size_t i = 0; i < k; ++i) u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k - 1)) = scale;
    u(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k - 1)) = -static_cast<double>(k) * scale;
  }
  return u;
}

UnitaryRep unitarize_permutation_family(const PermutationAction& act) {
  act.validate();
  const auto big = static_cast<Eigen::Index>(act.size());
  if (big < 2) throw Error(ErrorCode::DimensionTooSmall, "sum-zero space needs at least two points");
  const Eigen::MatrixXd u = helmert_basis(act.size());
  std::vector<CMatrix> mats;
  for (const auto& img : act.images) {
    Eigen::MatrixXd perm = Eigen::MatrixXd::Zero(big, big);
    for (Eigen::Index i = 0; i < big; ++i) perm(static_cast<Eigen::Index>(img[static_cast<std::size_t>(i)]), i) = 1.0;
    mats.emplace_back((u.transpose() * perm * u).cast<std::complex<double>>());
  }
  return make_unitary_rep(act.labels, std::move(mats));
}

std::vector<CMatrix> trace_zero_basis(std::size_t n) {
  const auto dim = static_cast<Eigen::Index>(n);
  std::vector<CMatrix> basis;
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      if (i == j) continue;
      CMatrix e = CMatrix::Zero(dim, dim);
      e(i, j) = 1.0;
      basis.push_back(std::move(e));
    }
  }
  for (Eigen::Index k = 1; k < dim; ++k) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(k * (k + 1)));
    CMatrix h = CMatrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < k; ++i) h(i, i) = scale;
    h(k, k) = -static_cast<double>(k) * scale;
    basis.push_back(std::move(h));
  }
  return basis;
}

UnitaryRep adjoint_rep(const UnitaryRep& rep) {
  const auto n = static_cast<Eigen::Index>(rep.dim());
  const auto basis = trace_zero_basis(rep.dim());
  const auto dim = static_cast<Eigen::Index>(basis.size());
  const Eigen::Index off_diag = n * (n - 1);
  // Coordinates of Y in the orthonormal basis: c_a = tr(Y B_a^*).
  auto coordinates = [&](const CMatrix& y, CMatrix& out, Eigen::Index col) {
    Eigen::Index a = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i != j) out(a++, col) = y(i, j);
      }
    }
    for (Eigen::Index k = 1; k < n; ++k) {
      const double scale = 1.0 / std::sqrt(static_cast<double>(k * (k + 1)));
      std::complex<double> s = 0.0;
      for (Eigen::Index i = 0; i < k; ++i) s += y(i, i);
      s -= static_cast<double>(k) * y(k, k);
      out(off_diag + k - 1, col) = s * scale;
    }
  };
  std::vector<CMatrix> mats;
  for (const auto& rho : rep.mats) {
    CMatrix adj(dim, dim);
    const CMatrix rho_star = rho.adjoint();
    for (Eigen::Index b = 0; b < dim; ++b) {
      const CMatrix y = rho * basis[static_cast<std::size_t>(b)] * rho_star;
      coordinates(y, adj, b);
    }
    mats.push_back(std::move(adj));
  }
  return make_unitary_rep(rep.labels, std::move(mats));
}

SpectralData laplacian(const UnitaryRep& rep, const SpectralTolerances& tol) {
  const auto n = static_cast<Eigen::Index>(rep.dim());
  SpectralData out;
  CMatrix l = CMatrix::Zero(n, n);
  for (const auto& rho : rep.mats) {
    l += 2.0 * CMatrix::Identity(n, n) - rho - rho.adjoint();
  }
  const double asym = n == 0 ? 0.0 : (l - l.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol.hermitian) throw Error(ErrorCode::NumericalFailure, "Laplacian is not Hermitian");
  l = 0.5 * (l + l.adjoint());
  out.laplacian = l;
  if (n == 0) {
    out.all_fixed = true;
    return out;
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(l);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::NumericalFailure, "eigensolver did not converge");
  const auto& evals = solver.eigenvalues();
  Eigen::Index fixed = 0;
  while (fixed < n && evals(fixed) <= tol.kernel_eigenvalue) ++fixed;
  out.fixed_dim = static_cast<std::size_t>(fixed);
  if (fixed == n) {
    out.all_fixed = true;
    out.lambda_min_perp = 0.0;
    return out;
  }
  out.lambda_min_perp = std::max(0.0, evals(fixed));
  out.extremal_vector = solver.eigenvectors().col(fixed);
  return out;
}

double max_displacement(const UnitaryRep& rep, const CVector& v) {
  const double norm = v.norm();
  double worst = 0.0;
  for (const auto& rho : rep.mats) worst = std::max(worst, (rho * v - v).norm());
  return worst / norm;
}

SpectralData kazhdan_bounds(const UnitaryRep& rep, std::uint64_t seed, std::size_t trial_count,
                            const SpectralTolerances& tol) {
  if (rep.mats.empty()) throw Error(ErrorCode::TrivialRepresentation, "no generators");
  SpectralData data = laplacian(rep, tol);
  if (data.all_fixed) {
    throw Error(ErrorCode::TrivialRepresentation, "every vector is fixed by the generators");
  }
  const double s = static_cast<double>(rep.mats.size());
  data.kappa_lower = std::sqrt(data.lambda_min_perp / s);

  const auto n = data.laplacian.rows();
  CMatrix fixed_basis;
  if (data.fixed_dim > 0) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(data.laplacian);
    fixed_basis = solver.eigenvectors().leftCols(static_cast<Eigen::Index>(data.fixed_dim));
  }
  auto project = [&](CVector v) {
    if (data.fixed_dim > 0) v -= fixed_basis * (fixed_basis.adjoint() * v);
    return v;
  };

  double best = max_displacement(rep, data.extremal_vector);
  Rng rng(seed);
  for (std::size_t t = 0; t < trial_count; ++t) {
    CVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      v(i) = {re, im};
    }
    v = project(std::move(v));
    if (v.norm() < 1e-12) continue;
    best = std::min(best, max_displacement(rep, v));
  }
  data.kappa_upper = best;
  if (data.kappa_lower > data.kappa_upper + tol.clamp) {
    throw Error(ErrorCode::NumericalFailure, "kappa_lower exceeds kappa_upper");
  }
  return data;
}

double epsilon_from_kappa(double kappa) { return kappa * kappa / 12.0; }

namespace {

ExactMatrix commutant_system(const OperatorFamily& fam) {
  const std::size_t n = fam.n, nn = n * n;
  ExactMatrix sys(fam.field, fam.k() * nn, nn);
  std::size_t row = 0;
  for (const auto& t : fam.ops) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j, ++row) {
        // (T X)_ij - (X T)_ij = sum_k T_ik X_kj - X_ik T_kj.
        for (std::size_t k = 0; k < n; ++k) {
          if (sgn(t.q(i, k)) != 0) sys.q(row, k * n + j) += t.q(i, k);
          if (sgn(t.q(k, j)) != 0) sys.q(row, i * n + k) -= t.q(k, j);
        }
      }
    }
  }
  return sys;
}

constexpr std::uint64_t kCertificationPrimes[] = {2147483629ULL, 2147483587ULL, 2147483579ULL};

}  // namespace

IrreducibilityReport irreducibility_check(const OperatorFamily& fam) {
  if (!fam.field.is_rational()) throw Error(ErrorCode::FieldMismatch, "irreducibility is decided over Q");
  fam.validate();
  const std::size_t nn = fam.n * fam.n;
  const ExactMatrix sys = commutant_system(fam);
  IrreducibilityReport rep;

  // The identity always commutes, so rank <= n^2 - 1 over Q; a reduction mod q
  // never raises the rank, so reaching n^2 - 1 mod q settles it exactly.
  bool settled = false;
  if (sys.has_integer_entries()) {
    for (auto q : kCertificationPrimes) {
      if (rank_mod(sys, q) + 1 == nn) {
        rep.commutant_dim = 1;
        settled = true;
        break;
      }
    }
  }
  if (!settled) rep.commutant_dim = nn - rank(sys);
  rep.irreducible = rep.commutant_dim == 1;

  Eigen::MatrixXd dense(static_cast<Eigen::Index>(sys.rows()), static_cast<Eigen::Index>(nn));
  for (std::size_t i = 0; i < sys.rows(); ++i) {
    for (std::size_t j = 0; j < nn; ++j) {
      dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = sys.q(i, j).get_d();
    }
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(dense);
  const auto& sv = svd.singularValues();
  const double cutoff = 1e-8 * std::max(1.0, sv.size() ? sv(0) : 0.0);
  std::size_t numeric_rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++numeric_rank;
  }
  rep.numeric_commutant_dim = nn - numeric_rank;
  return rep;
}

Prop21Result prop21_certificate(const UnitaryRep& rep, std::uint64_t seed, const SpectralTolerances& tol) {
  if (rep.dim() < 2) throw Error(ErrorCode::TrivialRepresentation, "trace-zero space of a rank-1 representation is zero");
  Prop21Result out;
  out.n = rep.dim();
  out.adjoint = kazhdan_bounds(adjoint_rep(rep), seed, 100, tol);
  out.epsilon = epsilon_from_kappa(out.adjoint.kappa_lower);
  return out;
}

Prop21Result prop21_certificate(const OperatorFamily& fam, std::uint64_t seed, const SpectralTolerances& tol) {
  if (!fam.field.is_rational()) {
    throw Error(ErrorCode::StrategyUnavailable, "spectral certificate needs a family over Q");
  }
  if (!fam.action) throw Error(ErrorCode::StrategyUnavailable, "spectral certificate needs a permutation action");
  const OperatorFamily model = perm_to_sumzero_family(*fam.action, fam.field);
  if (model.ops != fam.ops) {
    throw Error(ErrorCode::StrategyUnavailable, "operators do not match the recorded permutation action");
  }
  const auto irr = irreducibility_check(fam);
  if (!irr.irreducible) {
    throw Error(ErrorCode::NotIrreducible, "commutant has dimension " + std::to_string(irr.commutant_dim));
  }
  Prop21Result out = prop21_certificate(unitarize_permutation_family(*fam.action), seed, tol);
  out.irreducibility = irr;
  return out;
}

CMatrix orthogonal_projection(const Subspace& w) {
  if (!w.field().is_rational()) throw Error(ErrorCode::FieldMismatch, "projections are built from subspaces over Q");
  const auto n = static_cast<Eigen::Index>(w.ambient());
  const auto m = static_cast<Eigen::Index>(w.dim());
  if (m == 0) return CMatrix::Zero(n, n);
  Eigen::MatrixXd cols(n, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      cols(j, i) = w.basis().q(static_cast<std::size_t>(i), static_cast<std::size_t>(j)).get_d();
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(cols);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, m);
  return (q * q.transpose()).cast<std::complex<double>>();
}

ProjectionPair make_projection_pair(CMatrix p, CMatrix p_prime, double tol) {
  if (p.rows() != p_prime.rows() || p.rows() != p.cols() || p_prime.rows() != p_prime.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "projection shapes");
  }
  for (const CMatrix* x : {&p, &p_prime}) {
    if (x->rows() == 0) continue;
    if ((*x * *x - *x).cwiseAbs().maxCoeff() > tol || (*x - x->adjoint()).cwiseAbs().maxCoeff() > tol) {
      throw Error(ErrorCode::NumericalFailure, "not an orthogonal projection");
    }
  }
  const double tr = p.trace().real(), tr_prime = p_prime.trace().real();
  const double m = std::round(tr);
  if (std::abs(tr - m) > tol || std::abs(tr_prime - m) > tol) {
    throw Error(ErrorCode::RankMismatch, "projection traces differ");
  }
  return {std::move(p), std::move(p_prime), static_cast<std::size_t>(m)};
}

LemmaCheck projection_lemma_check(const ProjectionPair& pair, const Subspace& w, const Subspace& w_prime, double tol) {
  if (w.dim() != w_prime.dim() || w.dim() != pair.m) {
    throw Error(ErrorCode::RankMismatch, "subspaces and projections must share one rank");
  }
  LemmaCheck out;
  out.lhs = (pair.p * pair.p_prime.adjoint()).trace().real();
  const auto sum_dim = static_cast<double>(subspace_sum(w, w_prime).dim());
  out.rhs = 4.0 * static_cast<double>(pair.m) - 3.0 * sum_dim;
  out.holds = out.lhs >= out.rhs - tol;
  return out;
}

QNormCheck q_norm_identity_check(std::size_t n, const Subspace& w) {
  if (w.ambient() != n) throw Error(ErrorCode::DimensionMismatch, "subspace ambient dimension");
  const auto dim = static_cast<Eigen::Index>(n);
  const double m = static_cast<double>(w.dim());
  const CMatrix q = orthogonal_projection(w) - (m / static_cast<double>(n)) * CMatrix::Identity(dim, dim);
  QNormCheck out;
  out.lhs = (q * q.adjoint()).trace().real();
  out.rhs = m - m * m / static_cast<double>(n);
  out.trace = q.trace().real();
  return out;
}

}  // namespace expandim
