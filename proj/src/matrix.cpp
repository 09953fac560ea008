#include "expandim/matrix.hpp"

#include <sstream>

namespace expandim {

ExactMatrix::ExactMatrix(FieldSpec field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols) {
  if (field_.is_rational()) {
    qdata_.assign(rows * cols, mpq_class(0));
  } else {
    rdata_.assign(rows * cols, 0);
  }
}

ExactMatrix ExactMatrix::identity(FieldSpec field, std::size_t n) {
  ExactMatrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (field.is_rational()) {
      m.q(i, i) = 1;
    } else {
      m.r(i, i) = 1;
    }
  }
  return m;
}

ExactMatrix ExactMatrix::from_ints(FieldSpec field, std::size_t rows, std::size_t cols,
                                   std::span<const std::int64_t> entries) {
  if (entries.size() != rows * cols) {
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(rows * cols) + " entries");
  }
  ExactMatrix m(field, rows, cols);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (field.is_rational()) {
      m.qdata_[k] = static_cast<long>(entries[k]);
    } else {
      m.rdata_[k] = modp::reduce(entries[k], field.p());
    }
  }
  return m;
}

Scalar ExactMatrix::at(std::size_t i, std::size_t j) const {
  if (field_.is_rational()) return Scalar::rational(q(i, j));
  return Scalar::residue(field_, r(i, j));
}

void ExactMatrix::set(std::size_t i, std::size_t j, const Scalar& v) {
  if (!(v.field() == field_)) throw Error(ErrorCode::FieldMismatch, "entry over " + v.field().name());
  if (field_.is_rational()) {
    q(i, j) = v.as_rational();
  } else {
    r(i, j) = v.as_residue();
  }
}

bool ExactMatrix::is_zero_entry(std::size_t i, std::size_t j) const {
  return field_.is_rational() ? sgn(q(i, j)) == 0 : r(i, j) == 0;
}

bool ExactMatrix::is_zero_row(std::size_t i) const {
  for (std::size_t j = 0; j < cols_; ++j) {
    if (!is_zero_entry(i, j)) return false;
  }
  return true;
}

bool ExactMatrix::has_integer_entries() const {
  if (!field_.is_rational()) return true;
  for (const auto& x : qdata_) {
    if (x.get_den() != 1) return false;
  }
  return true;
}

ExactMatrix ExactMatrix::transpose() const {
  ExactMatrix t(field_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      if (field_.is_rational()) {
        t.q(j, i) = q(i, j);
      } else {
        t.r(j, i) = r(i, j);
      }
    }
  }
  return t;
}

ExactMatrix ExactMatrix::row_slice(std::size_t begin, std::size_t end) const {
  ExactMatrix s(field_, end - begin, cols_);
  if (field_.is_rational()) {
    std::copy(qdata_.begin() + static_cast<std::ptrdiff_t>(begin * cols_),
              qdata_.begin() + static_cast<std::ptrdiff_t>(end * cols_), s.qdata_.begin());
  } else {
    std::copy(rdata_.begin() + static_cast<std::ptrdiff_t>(begin * cols_),
              rdata_.begin() + static_cast<std::ptrdiff_t>(end * cols_), s.rdata_.begin());
  }
  return s;
}

void ExactMatrix::append_rows(const ExactMatrix& other) {
  if (!(other.field_ == field_)) throw Error(ErrorCode::FieldMismatch, "append_rows");
  if (other.rows_ == 0) return;
  if (other.cols_ != cols_) throw Error(ErrorCode::DimensionMismatch, "append_rows: column count");
  qdata_.insert(qdata_.end(), other.qdata_.begin(), other.qdata_.end());
  rdata_.insert(rdata_.end(), other.rdata_.begin(), other.rdata_.end());
  rows_ += other.rows_;
}

ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
  if (!(a.field_ == b.field_)) throw Error(ErrorCode::FieldMismatch, "matrix product");
  if (a.cols_ != b.rows_) throw Error(ErrorCode::DimensionMismatch, "matrix product shapes");
  ExactMatrix c(a.field_, a.rows_, b.cols_);
  if (a.field_.is_rational()) {
    mpq_class t;
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const auto& aik = a.q(i, k);
        if (sgn(aik) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          if (sgn(b.q(k, j)) == 0) continue;
          t = aik * b.q(k, j);
          c.q(i, j) += t;
        }
      }
    }
  } else {
    const auto p = a.field_.p();
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const auto aik = a.r(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          c.r(i, j) = modp::add(c.r(i, j), modp::mul(aik, b.r(k, j), p), p);
        }
      }
    }
  }
  return c;
}

namespace {

ExactMatrix elementwise(const ExactMatrix& a, const ExactMatrix& b, bool subtract) {
  if (!(a.field() == b.field())) throw Error(ErrorCode::FieldMismatch, "matrix sum");
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error(ErrorCode::DimensionMismatch, "matrix sum shapes");
  ExactMatrix c(a.field(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a.field().is_rational()) {
        c.q(i, j) = subtract ? mpq_class(a.q(i, j) - b.q(i, j)) : mpq_class(a.q(i, j) + b.q(i, j));
      } else {
        const auto p = a.field().p();
        c.r(i, j) = subtract ? modp::sub(a.r(i, j), b.r(i, j), p) : modp::add(a.r(i, j), b.r(i, j), p);
      }
    }
  }
  return c;
}

}  // namespace

ExactMatrix operator+(const ExactMatrix& a, const ExactMatrix& b) { return elementwise(a, b, false); }
ExactMatrix operator-(const ExactMatrix& a, const ExactMatrix& b) { return elementwise(a, b, true); }

bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
  return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.qdata_ == b.qdata_ &&
         a.rdata_ == b.rdata_;
}

std::string ExactMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << at(i, j).to_string();
    os << "]";
  }
  os << "]";
  return os.str();
}

namespace {

using ZRow = std::vector<mpz_class>;

void remove_content(ZRow& row) {
  mpz_class g = 0;
  for (const auto& x : row) {
    if (sgn(x) != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 1) return;
  }
  if (g > 1) {
    for (auto& x : row) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  }
}

// Gauss-Jordan over Z on denominator-cleared rows. Rows are rescaled freely;
// the row space over Q is unchanged. Dividing pivot rows by their pivot at the
// end yields the unique RREF.
RrefResult rref_rational(const ExactMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<ZRow> a(rows, ZRow(cols));
  mpz_class l;
  for (std::size_t i = 0; i < rows; ++i) {
    l = 1;
    for (std::size_t j = 0; j < cols; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m.q(i, j).get_den_mpz_t());
    for (std::size_t j = 0; j < cols; ++j) {
      a[i][j] = m.q(i, j).get_num() * (l / m.q(i, j).get_den());
    }
    remove_content(a[i]);
  }

  std::vector<std::size_t> pivots;
  std::size_t rank = 0;
  mpz_class g, mp, mi;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t i = rank; i < rows; ++i) {
      if (sgn(a[i][c]) != 0) {
        piv = i;
        break;
      }
    }
    if (piv == rows) continue;
    std::swap(a[rank], a[piv]);
    const ZRow& prow = a[rank];
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == rank || sgn(a[i][c]) == 0) continue;
      mpz_gcd(g.get_mpz_t(), prow[c].get_mpz_t(), a[i][c].get_mpz_t());
      mp = prow[c] / g;
      mi = a[i][c] / g;
      for (std::size_t j = 0; j < cols; ++j) {
        if (sgn(prow[j]) == 0) {
          if (sgn(a[i][j]) != 0) a[i][j] *= mp;
        } else {
          a[i][j] = a[i][j] * mp - prow[j] * mi;
        }
      }
      remove_content(a[i]);
    }
    pivots.push_back(c);
    ++rank;
  }

  ExactMatrix out(m.field(), rows, cols);
  for (std::size_t i = 0; i < rank; ++i) {
    const mpz_class& pv = a[i][pivots[i]];
    for (std::size_t j = 0; j < cols; ++j) {
      if (sgn(a[i][j]) == 0) continue;
      out.q(i, j) = mpq_class(a[i][j], pv);
      out.q(i, j).canonicalize();
    }
  }
  return {std::move(out), rank, std::move(pivots)};
}

RrefResult rref_prime(ExactMatrix a) {
  const std::size_t rows = a.rows(), cols = a.cols();
  const auto p = a.field().p();
  std::vector<std::size_t> pivots;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t i = rank; i < rows; ++i) {
      if (a.r(i, c) != 0) {
        piv = i;
        break;
      }
    }
    if (piv == rows) continue;
    if (piv != rank) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(a.r(rank, j), a.r(piv, j));
    }
    const auto inv = modp::inv(a.r(rank, c), p);
    for (std::size_t j = c; j < cols; ++j) a.r(rank, j) = modp::mul(a.r(rank, j), inv, p);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == rank) continue;
      const auto f = a.r(i, c);
      if (f == 0) continue;
      for (std::size_t j = c; j < cols; ++j) {
        a.r(i, j) = modp::sub(a.r(i, j), modp::mul(f, a.r(rank, j), p), p);
      }
    }
    pivots.push_back(c);
    ++rank;
  }
  return {std::move(a), rank, std::move(pivots)};
}

}  // namespace

RrefResult rref(const ExactMatrix& m) {
  if (m.field().is_rational()) return rref_rational(m);
  return rref_prime(m);
}

std::size_t rank(const ExactMatrix& m) { return rref(m).rank; }

std::size_t rank_mod(const ExactMatrix& m, std::uint64_t p) {
  if (!m.field().is_rational()) throw Error(ErrorCode::FieldMismatch, "rank_mod expects a rational matrix");
  const FieldSpec fp = FieldSpec::prime(p);
  ExactMatrix red(fp, m.rows(), m.cols());
  const mpz_class pz(static_cast<unsigned long>(p));
  mpz_class t;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m.q(i, j).get_den() != 1) throw Error(ErrorCode::DimensionMismatch, "rank_mod needs integer entries");
      mpz_fdiv_r(t.get_mpz_t(), m.q(i, j).get_num_mpz_t(), pz.get_mpz_t());
      red.r(i, j) = t.get_ui();
    }
  }
  return rref_prime(std::move(red)).rank;
}

ExactMatrix kernel(const ExactMatrix& m) {
  const auto res = rref(m);
  const std::size_t cols = m.cols();
  std::vector<bool> is_pivot(cols, false);
  for (auto c : res.pivots) is_pivot[c] = true;
  ExactMatrix basis(m.field(), cols - res.rank, cols);
  std::size_t k = 0;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    // x_f = 1, x_pivot(i) = -R[i][f].
    basis.set(k, f, Scalar::one(m.field()));
    for (std::size_t i = 0; i < res.rank; ++i) {
      basis.set(k, res.pivots[i], -res.reduced.at(i, f));
    }
    ++k;
  }
  return basis;
}

std::optional<ExactMatrix> inverse(const ExactMatrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "inverse of a non-square matrix");
  const std::size_t n = m.rows();
  // RREF of [M | I] is [I | M^{-1}] exactly when M is invertible.
  ExactMatrix aug(m.field(), n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug.set(i, j, m.at(i, j));
    aug.set(i, n + i, Scalar::one(m.field()));
  }
  const auto res = rref(aug);
  if (res.rank < n || res.pivots[n - 1] != n - 1) return std::nullopt;
  ExactMatrix inv(m.field(), n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) inv.set(i, j, res.reduced.at(i, n + j));
  }
  return inv;
}

Scalar determinant(const ExactMatrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "determinant of a non-square matrix");
  const std::size_t n = m.rows();
  // Plain elimination on Scalars; used only for small generator matrices.
  std::vector<std::vector<Scalar>> a(n, std::vector<Scalar>(n, Scalar::zero(m.field())));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m.at(i, j);
  }
  Scalar det = Scalar::one(m.field());
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = n;
    for (std::size_t i = c; i < n; ++i) {
      if (!a[i][c].is_zero()) {
        piv = i;
        break;
      }
    }
    if (piv == n) return Scalar::zero(m.field());
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det = det * a[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a[i][c].is_zero()) continue;
      const Scalar f = a[i][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[i][j] = a[i][j] - f * a[c][j];
    }
  }
  return det;
}

}  // namespace expandim
