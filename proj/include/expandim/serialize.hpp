#pragma once

#include <string>

#include "json.hpp"

#include "expandim/certify.hpp"

namespace expandim {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

/// Matrix interchange: {field: "Q"|"Fp", p?, rows, cols, entries: [strings]}.
Json matrix_to_json(const ExactMatrix& m);
ExactMatrix matrix_from_json(const Json& j);

/// A matrix plus its dimension; the basis is the canonical RREF.
Json subspace_to_json(const Subspace& w);
Subspace subspace_from_json(const Json& j);

/// {field, p?, n, k, ops: [matrix], meta: {construction, params, labels},
///  action?: {points, labels, images}}.
Json family_to_json(const OperatorFamily& fam);
OperatorFamily family_from_json(const Json& j);

/// {method, epsilon_lower?, epsilon_upper?, witness_basis?, n, k, field,
///  construction, seed, trials?, budget, runtime_ms, ...}.
Json certificate_to_json(const Certificate& cert, const SpectralTolerances& tol = {});

/// {construction, params, n, S, fixed_dim, lambda_min_perp, kappa_lower,
///  kappa_upper, epsilon_prop21, tolerances, seed}.
Json spectral_report_to_json(const OperatorFamily& fam, const Prop21Result& r, std::uint64_t seed,
                             const SpectralTolerances& tol = {});

/// Floats are emitted rounded to 12 significant digits.
double round12(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace expandim
