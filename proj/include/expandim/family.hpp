#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "expandim/subspace.hpp"

namespace expandim {

/// A finite set acted on by labelled generators. images[g][i] is the index of
/// the image of point i under generator g.
struct PermutationAction {
  std::vector<std::string> points;
  std::vector<std::string> labels;
  std::vector<std::vector<std::size_t>> images;

  std::size_t size() const { return points.size(); }
  /// Throws InvalidPermutation on non-bijective images or duplicate labels.
  void validate() const;
};

struct Provenance {
  std::string construction;
  std::map<std::string, std::string> params;
  std::vector<std::string> labels;
};

/// The certified object: operators T_1..T_k acting on column vectors of F^n.
struct OperatorFamily {
  FieldSpec field = FieldSpec::rationals();
  std::size_t n = 0;
  std::vector<ExactMatrix> ops;
  Provenance meta;
  /// Present for permutation-derived families; enables the spectral route.
  std::optional<PermutationAction> action;

  std::size_t k() const { return ops.size(); }
  void validate() const;
};

/// dim(W + T_1 W + ... + T_k W) from one RREF of the stacked (k+1)m rows.
std::size_t expansion_dim(const OperatorFamily& fam, const Subspace& w);

}  // namespace expandim
