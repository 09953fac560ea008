#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "expandim/family.hpp"
#include "expandim/spectral.hpp"

namespace expandim {

enum class Method { ExactBruteForce, SampledProbe, SpectralProp21 };
enum class Strategy { Auto, Exact, Sampled, Spectral };

std::string_view to_string(Method m);
std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view name);

/// An epsilon value: exact rational (brute force, sampling) or a decimal
/// (spectral).
struct EpsilonValue {
  std::optional<mpq_class> exact;
  double decimal = 0.0;

  static EpsilonValue rational(const mpq_class& q) { return {q, q.get_d()}; }
  static EpsilonValue real(double v) { return {std::nullopt, v}; }
  /// "1/3" for exact values, 12 significant digits otherwise.
  std::string to_string() const;
};

struct SpectralSummary {
  std::size_t commutant_dim = 0;
  std::size_t fixed_dim = 0;
  double lambda_min_perp = 0.0;
  double kappa_lower = 0.0;
  double kappa_upper = 0.0;
  double epsilon = 0.0;
};

struct Certificate {
  Method method = Method::SampledProbe;
  std::optional<EpsilonValue> epsilon_lower;
  std::optional<EpsilonValue> epsilon_upper;
  /// Which route produced epsilon_upper: "exact", "sampled" or "construction".
  std::string upper_source;
  std::optional<Subspace> witness;
  /// dim(W + sum T_i W) at the witness.
  std::size_t witness_expansion = 0;
  std::optional<SpectralSummary> spectral;

  std::size_t n = 0;
  std::size_t k = 0;
  std::string field;
  std::string construction;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> trials;
  std::uint64_t budget = 0;
  std::int64_t runtime_ms = 0;
};

struct CertifyOptions {
  std::uint64_t budget = kDefaultEnumerationBudget;
  std::uint64_t trials = 10'000;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0: hardware concurrency
  std::int64_t rational_bound = kDefaultRationalBound;
  /// A known subspace (e.g. the constructed counterexample witness) whose
  /// ratio also bounds epsilon from above.
  std::optional<Subspace> hint_witness;
  SpectralTolerances tolerances;
};

/// Total number of subspaces with 1 <= dim <= n/2 (saturating).
std::uint64_t brute_force_count(const FieldSpec& field, std::size_t n);

/// Exact min over 1 <= dim W <= n/2 of dim(W + sum T_i W)/dim W, minus one.
/// Witness: first minimizer in enumeration order (dimension ascending, then
/// SubspaceStream order).
Certificate brute_force_epsilon(const OperatorFamily& fam, const CertifyOptions& opts = {});

/// Empirical upper bound from random subspaces of each dimension 1..n/2.
Certificate sampled_epsilon(const OperatorFamily& fam, const CertifyOptions& opts = {});

Certificate certify(const OperatorFamily& fam, Strategy strategy, const CertifyOptions& opts = {});

}  // namespace expandim
