#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "expandim/matrix.hpp"

namespace expandim {

/// A subspace W of F^n, stored as its canonical RREF basis (rows). Two
/// Subspace values are equal iff they describe the same subspace.
class Subspace {
 public:
  /// The zero subspace of F^n.
  Subspace(FieldSpec field, std::size_t ambient);

  /// Row space of the given vectors.
  static Subspace span(const ExactMatrix& vectors);
  /// Wraps a matrix the caller guarantees to be in RREF with no zero rows.
  static Subspace from_rref_unchecked(ExactMatrix basis, std::vector<std::size_t> pivots);

  const FieldSpec& field() const { return basis_.field(); }
  std::size_t ambient() const { return basis_.cols(); }
  std::size_t dim() const { return basis_.rows(); }
  const ExactMatrix& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  bool contains(const ExactMatrix& vector_row) const;

  friend bool operator==(const Subspace& a, const Subspace& b) { return a.basis_ == b.basis_; }

 private:
  Subspace(ExactMatrix basis, std::vector<std::size_t> pivots) : basis_(std::move(basis)), pivots_(std::move(pivots)) {}

  ExactMatrix basis_;
  std::vector<std::size_t> pivots_;
};

Subspace span(const ExactMatrix& vectors);
Subspace subspace_sum(const Subspace& a, const Subspace& b);
/// Intersection via the kernel of [A; -B]^T: x A = y B.
Subspace subspace_intersection(const Subspace& a, const Subspace& b);
/// T W for a square operator T acting on column vectors.
Subspace apply_operator(const ExactMatrix& op, const Subspace& w);

/// Number of d-dimensional subspaces of F_q^n, saturating at UINT64_MAX.
std::uint64_t gaussian_binomial(std::uint64_t q, std::size_t n, std::size_t d);

constexpr std::uint64_t kDefaultEnumerationBudget = 100'000'000;

/// Streams every d-dimensional subspace of F_p^n exactly once as a canonical
/// RREF basis. Order: pivot-column sets in lexicographic order; within one
/// pivot set, free entries form an odometer whose most significant digit is
/// the first free entry of the first row (row-major).
class SubspaceStream {
 public:
  SubspaceStream(FieldSpec field, std::size_t n, std::size_t d,
                 std::uint64_t budget = kDefaultEnumerationBudget);

  std::optional<Subspace> next();

  /// All pivot patterns in stream order.
  static std::vector<std::vector<std::size_t>> pivot_patterns(std::size_t n, std::size_t d);

 private:
  bool advance_free();
  bool advance_pattern();
  void reset_free();

  FieldSpec field_;
  std::size_t n_;
  std::size_t d_;
  std::vector<std::size_t> pivots_;
  // (row, col) positions of free entries, row-major.
  std::vector<std::pair<std::size_t, std::size_t>> free_;
  std::vector<std::uint64_t> digits_;
  bool started_ = false;
  bool done_ = false;
};

/// Free (row, column) positions of an RREF matrix with the given pivots.
std::vector<std::pair<std::size_t, std::size_t>> free_positions(std::size_t n,
                                                                const std::vector<std::size_t>& pivots);

std::vector<Subspace> enumerate_subspaces(FieldSpec field, std::size_t n, std::size_t d,
                                          std::uint64_t budget = kDefaultEnumerationBudget);

constexpr std::int64_t kDefaultRationalBound = 10;

/// Uniformly random full-rank d x n matrix (integers in [-bound, bound] over
/// Q, uniform residues over F_p), resampled until rank d; returns its span.
Subspace random_subspace(FieldSpec field, std::size_t n, std::size_t d, std::uint64_t seed,
                         std::int64_t bound = kDefaultRationalBound);

}  // namespace expandim
