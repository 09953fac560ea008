#include "expandim/subspace.hpp"

#include <limits>

#include "expandim/rng.hpp"

namespace expandim {

Subspace::Subspace(FieldSpec field, std::size_t ambient) : basis_(field, 0, ambient) {}

Subspace Subspace::span(const ExactMatrix& vectors) {
  auto res = rref(vectors);
  return Subspace(res.reduced.row_slice(0, res.rank), std::move(res.pivots));
}

Subspace Subspace::from_rref_unchecked(ExactMatrix basis, std::vector<std::size_t> pivots) {
  return Subspace(std::move(basis), std::move(pivots));
}

bool Subspace::contains(const ExactMatrix& vector_row) const {
  ExactMatrix stacked = basis_;
  stacked.append_rows(vector_row);
  return rank(stacked) == dim();
}

Subspace span(const ExactMatrix& vectors) { return Subspace::span(vectors); }

namespace {

void check_compatible(const Subspace& a, const Subspace& b) {
  if (!(a.field() == b.field())) throw Error(ErrorCode::FieldMismatch, a.field().name() + " vs " + b.field().name());
  if (a.ambient() != b.ambient()) throw Error(ErrorCode::DimensionMismatch, "subspaces of different ambient spaces");
}

}  // namespace

Subspace subspace_sum(const Subspace& a, const Subspace& b) {
  check_compatible(a, b);
  ExactMatrix stacked = a.basis();
  stacked.append_rows(b.basis());
  return Subspace::span(stacked);
}

Subspace subspace_intersection(const Subspace& a, const Subspace& b) {
  check_compatible(a, b);
  const std::size_t ma = a.dim(), mb = b.dim(), n = a.ambient();
  if (ma == 0 || mb == 0) return Subspace(a.field(), n);
  ExactMatrix stacked = a.basis();
  ExactMatrix neg_b(b.field(), mb, n);
  neg_b = neg_b - b.basis();
  stacked.append_rows(neg_b);
  const ExactMatrix coeffs = kernel(stacked.transpose());  // rows (x, y) with xA = yB
  if (coeffs.rows() == 0) return Subspace(a.field(), n);
  const ExactMatrix x = coeffs.transpose().row_slice(0, ma).transpose();
  return Subspace::span(x * a.basis());
}

Subspace apply_operator(const ExactMatrix& op, const Subspace& w) {
  if (!(op.field() == w.field())) throw Error(ErrorCode::FieldMismatch, "operator over " + op.field().name());
  if (!op.is_square() || op.rows() != w.ambient()) {
    throw Error(ErrorCode::DimensionMismatch, "operator is not " + std::to_string(w.ambient()) + "x" +
                                                   std::to_string(w.ambient()));
  }
  // Basis vectors are rows, so T w corresponds to w T^T.
  return Subspace::span(w.basis() * op.transpose());
}

std::uint64_t gaussian_binomial(std::uint64_t q, std::size_t n, std::size_t d) {
  if (d > n) return 0;
  // q-Pascal: [n, k] = [n-1, k-1] + q^k [n-1, k].
  std::vector<mpz_class> row(d + 1, 0);
  row[0] = 1;
  for (std::size_t m = 1; m <= n; ++m) {
    for (std::size_t k = std::min(m, d); k >= 1; --k) {
      mpz_class qk;
      mpz_ui_pow_ui(qk.get_mpz_t(), q, k);
      row[k] = row[k - 1] + qk * row[k];
    }
  }
  if (!row[d].fits_ulong_p()) return std::numeric_limits<std::uint64_t>::max();
  return row[d].get_ui();
}

std::vector<std::pair<std::size_t, std::size_t>> free_positions(std::size_t n,
                                                                const std::vector<std::size_t>& pivots) {
  std::vector<bool> is_pivot(n, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    for (std::size_t c = pivots[i] + 1; c < n; ++c) {
      if (!is_pivot[c]) out.emplace_back(i, c);
    }
  }
  return out;
}

SubspaceStream::SubspaceStream(FieldSpec field, std::size_t n, std::size_t d, std::uint64_t budget)
    : field_(field), n_(n), d_(d) {
  if (!field.is_finite()) throw Error(ErrorCode::InfiniteField, "cannot enumerate subspaces over Q");
  if (d > n) throw Error(ErrorCode::DimensionMismatch, "d > n");
  const auto count = gaussian_binomial(field.p(), n, d);
  if (count > budget) {
    throw Error(ErrorCode::BudgetExceeded, std::to_string(count) + " subspaces exceed budget " + std::to_string(budget));
  }
  pivots_.resize(d);
  for (std::size_t i = 0; i < d; ++i) pivots_[i] = i;
  reset_free();
}

void SubspaceStream::reset_free() {
  free_ = free_positions(n_, pivots_);
  digits_.assign(free_.size(), 0);
}

bool SubspaceStream::advance_free() {
  for (std::size_t k = digits_.size(); k-- > 0;) {
    if (++digits_[k] < field_.p()) return true;
    digits_[k] = 0;
  }
  return false;
}

bool SubspaceStream::advance_pattern() {
  // Next d-combination of {0..n-1} in lexicographic order.
  std::size_t i = d_;
  while (i > 0) {
    --i;
    if (pivots_[i] < n_ - d_ + i) {
      ++pivots_[i];
      for (std::size_t j = i + 1; j < d_; ++j) pivots_[j] = pivots_[j - 1] + 1;
      reset_free();
      return true;
    }
  }
  return false;
}

std::optional<Subspace> SubspaceStream::next() {
  if (done_) return std::nullopt;
  if (!started_) {
    started_ = true;
  } else if (!advance_free() && !advance_pattern()) {
    done_ = true;
    return std::nullopt;
  }
  ExactMatrix basis(field_, d_, n_);
  for (std::size_t i = 0; i < d_; ++i) basis.r(i, pivots_[i]) = 1;
  for (std::size_t k = 0; k < free_.size(); ++k) basis.r(free_[k].first, free_[k].second) = digits_[k];
  return Subspace::from_rref_unchecked(std::move(basis), pivots_);
}

std::vector<std::vector<std::size_t>> SubspaceStream::pivot_patterns(std::size_t n, std::size_t d) {
  std::vector<std::vector<std::size_t>> out;
  if (d > n) return out;
  std::vector<std::size_t> c(d);
  for (std::size_t i = 0; i < d; ++i) c[i] = i;
  while (true) {
    out.push_back(c);
    std::size_t i = d;
    bool moved = false;
    while (i > 0) {
      --i;
      if (c[i] < n - d + i) {
        ++c[i];
        for (std::size_t j = i + 1; j < d; ++j) c[j] = c[j - 1] + 1;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  return out;
}

std::vector<Subspace> enumerate_subspaces(FieldSpec field, std::size_t n, std::size_t d, std::uint64_t budget) {
  SubspaceStream stream(field, n, d, budget);
  std::vector<Subspace> out;
  while (auto w = stream.next()) out.push_back(std::move(*w));
  return out;
}

Subspace random_subspace(FieldSpec field, std::size_t n, std::size_t d, std::uint64_t seed, std::int64_t bound) {
  if (d > n) throw Error(ErrorCode::DimensionMismatch, "d > n");
  if (d == 0) return Subspace(field, n);
  Rng rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    ExactMatrix m(field, d, n);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (field.is_rational()) {
          m.q(i, j) = static_cast<long>(rng.between(-bound, bound));
        } else {
          m.r(i, j) = rng.below(field.p());
        }
      }
    }
    Subspace w = Subspace::span(m);
    if (w.dim() == d) return w;
  }
  throw Error(ErrorCode::InternalError, "random_subspace: no full-rank sample in 1000 attempts");
}

}  // namespace expandim
