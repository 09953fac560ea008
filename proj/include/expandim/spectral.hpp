#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "expandim/family.hpp"

namespace expandim {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Numerical tolerances of the spectral route.
struct SpectralTolerances {
  double unitarity = 1e-9;
  double hermitian = 1e-10;
  double kernel_eigenvalue = 1e-8;
  double clamp = 1e-9;
};

/// Unitary matrices rho(s), one per generator label.
struct UnitaryRep {
  std::vector<std::string> labels;
  std::vector<CMatrix> mats;
  double unitarity_defect = 0.0;

  std::size_t dim() const { return mats.empty() ? 0 : static_cast<std::size_t>(mats.front().rows()); }
};

/// Builds a UnitaryRep and records its defect; throws NumericalFailure when
/// any matrix is further than tol from unitary.
UnitaryRep make_unitary_rep(std::vector<std::string> labels, std::vector<CMatrix> mats,
                            double tol = SpectralTolerances{}.unitarity);

/// max over s of the entrywise max of |rho(s) rho(s)^* - I|.
double unitarity_defect(const std::vector<CMatrix>& mats);

struct SpectralData {
  CMatrix laplacian;
  std::size_t fixed_dim = 0;
  /// Smallest eigenvalue of L off its kernel; 0 when the kernel is everything.
  double lambda_min_perp = 0.0;
  bool all_fixed = false;
  double kappa_lower = 0.0;
  double kappa_upper = 0.0;
  /// Unit eigenvector for lambda_min_perp.
  CVector extremal_vector;
};

/// Orthonormal basis of the sum-zero vectors of C^N as columns:
/// u_k = (e_1 + ... + e_k - k e_{k+1}) / sqrt(k(k+1)).
Eigen::MatrixXd helmert_basis(std::size_t big_n);

/// Permutation matrices (P_g e_i = e_{g(i)}) restricted to the sum-zero
/// subspace in the Helmert basis.
UnitaryRep unitarize_permutation_family(const PermutationAction& act);

/// Orthonormal basis of the trace-zero n x n matrices under <X,Y> = tr(X Y^*):
/// E_ij for i != j in row-major order, then the normalized nested diagonal
/// differences diag(1,..,1,-k,0,..)/sqrt(k(k+1)), k = 1..n-1.
std::vector<CMatrix> trace_zero_basis(std::size_t n);

/// Conjugation T -> rho T rho^{-1} on trace-zero matrices, in trace_zero_basis.
UnitaryRep adjoint_rep(const UnitaryRep& rep);

/// L = sum_s (2I - rho(s) - rho(s)^*) with its kernel and smallest nonzero
/// eigenvalue. kappa fields are left at zero.
SpectralData laplacian(const UnitaryRep& rep, const SpectralTolerances& tol = {});

/// kappa_lower = sqrt(lambda_min_perp / |S|); kappa_upper is the best of the
/// extremal eigenvector and trial_count seeded random unit vectors, all
/// projected off the fixed subspace.
SpectralData kazhdan_bounds(const UnitaryRep& rep, std::uint64_t seed = 0, std::size_t trial_count = 100,
                            const SpectralTolerances& tol = {});

/// max over s of ||rho(s) v - v|| / ||v||.
double max_displacement(const UnitaryRep& rep, const CVector& v);

/// kappa^2 / 12.
double epsilon_from_kappa(double kappa);

struct IrreducibilityReport {
  bool irreducible = false;
  std::size_t commutant_dim = 0;
  /// Same dimension from the singular values of the double-precision system.
  std::size_t numeric_commutant_dim = 0;
};

/// Exact dimension of {X : T_i X = X T_i for all i} over Q.
IrreducibilityReport irreducibility_check(const OperatorFamily& fam);

struct Prop21Result {
  double epsilon = 0.0;
  IrreducibilityReport irreducibility;
  SpectralData adjoint;
  std::size_t n = 0;
};

/// epsilon = kappa_lower(adj rho)^2 / 12 for an irreducible permutation-derived
/// family over Q. Throws NotIrreducible or StrategyUnavailable.
Prop21Result prop21_certificate(const OperatorFamily& fam, std::uint64_t seed = 0, const SpectralTolerances& tol = {});

/// Same, for a unitary rep already known to be irreducible.
Prop21Result prop21_certificate(const UnitaryRep& rep, std::uint64_t seed = 0, const SpectralTolerances& tol = {});

/// Orthogonal projection onto the complex span of a subspace over Q.
CMatrix orthogonal_projection(const Subspace& w);

struct ProjectionPair {
  CMatrix p;
  CMatrix p_prime;
  std::size_t m = 0;
};

/// Validates idempotence, self-adjointness and equal trace m.
ProjectionPair make_projection_pair(CMatrix p, CMatrix p_prime, double tol = 1e-9);

struct LemmaCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// lhs = Re tr(P P'^*), rhs = 4m - 3 dim(W + W') with the sum dimension exact.
LemmaCheck projection_lemma_check(const ProjectionPair& pair, const Subspace& w, const Subspace& w_prime,
                                  double tol = 1e-9);

struct QNormCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double trace = 0.0;
};

/// For Q = P - (m/n) I: lhs = tr(Q Q^*), rhs = m - m^2/n, trace = tr Q.
QNormCheck q_norm_identity_check(std::size_t n, const Subspace& w);

}  // namespace expandim
