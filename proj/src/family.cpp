#include "expandim/family.hpp"

#include <set>

namespace expandim {

void PermutationAction::validate() const {
  if (labels.size() != images.size()) throw Error(ErrorCode::InvalidPermutation, "one image per generator label");
  std::set<std::string> seen(labels.begin(), labels.end());
  if (seen.size() != labels.size()) throw Error(ErrorCode::InvalidPermutation, "duplicate generator labels");
  for (std::size_t g = 0; g < images.size(); ++g) {
    const auto& img = images[g];
    if (img.size() != points.size()) throw Error(ErrorCode::InvalidPermutation, labels[g] + ": wrong length");
    std::vector<bool> hit(points.size(), false);
    for (auto x : img) {
      if (x >= points.size() || hit[x]) throw Error(ErrorCode::InvalidPermutation, labels[g] + " is not a bijection");
      hit[x] = true;
    }
  }
}

void OperatorFamily::validate() const {
  if (ops.empty()) throw Error(ErrorCode::DimensionMismatch, "family needs at least one operator");
  for (const auto& t : ops) {
    if (!(t.field() == field)) throw Error(ErrorCode::FieldMismatch, "operator over " + t.field().name());
    if (t.rows() != n || t.cols() != n) throw Error(ErrorCode::DimensionMismatch, "operator is not n x n");
  }
  if (action) action->validate();
}

std::size_t expansion_dim(const OperatorFamily& fam, const Subspace& w) {
  if (!(w.field() == fam.field)) throw Error(ErrorCode::FieldMismatch, "subspace over " + w.field().name());
  if (w.ambient() != fam.n) throw Error(ErrorCode::DimensionMismatch, "subspace ambient dimension");
  if (w.dim() == 0) return 0;
  ExactMatrix stacked = w.basis();
  for (const auto& t : fam.ops) stacked.append_rows(w.basis() * t.transpose());
  return rank(stacked);
}

}  // namespace expandim
