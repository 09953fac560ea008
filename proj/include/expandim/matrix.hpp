#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "expandim/field.hpp"

namespace expandim {

/// Dense row-major matrix over a FieldSpec. Rational entries live in an
/// mpq_class buffer, residues in a uint64 buffer; only the one matching the
/// field is populated.
class ExactMatrix {
 public:
  ExactMatrix(FieldSpec field, std::size_t rows, std::size_t cols);

  static ExactMatrix identity(FieldSpec field, std::size_t n);
  /// Entries given row-major as small integers.
  static ExactMatrix from_ints(FieldSpec field, std::size_t rows, std::size_t cols,
                               std::span<const std::int64_t> entries);
  static ExactMatrix from_ints(FieldSpec field, std::size_t rows, std::size_t cols,
                               std::initializer_list<std::int64_t> entries) {
    return from_ints(field, rows, cols, std::span<const std::int64_t>(entries.begin(), entries.size()));
  }

  const FieldSpec& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Scalar at(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, const Scalar& v);

  // Typed access; the caller must know the field kind.
  mpq_class& q(std::size_t i, std::size_t j) { return qdata_[i * cols_ + j]; }
  const mpq_class& q(std::size_t i, std::size_t j) const { return qdata_[i * cols_ + j]; }
  std::uint64_t& r(std::size_t i, std::size_t j) { return rdata_[i * cols_ + j]; }
  std::uint64_t r(std::size_t i, std::size_t j) const { return rdata_[i * cols_ + j]; }

  bool is_zero_entry(std::size_t i, std::size_t j) const;
  bool is_zero_row(std::size_t i) const;
  /// True when every entry is an integer (always true over F_p).
  bool has_integer_entries() const;

  ExactMatrix transpose() const;
  /// Rows [begin, end).
  ExactMatrix row_slice(std::size_t begin, std::size_t end) const;
  /// Appends the rows of other (same field and column count).
  void append_rows(const ExactMatrix& other);

  friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b);
  friend ExactMatrix operator+(const ExactMatrix& a, const ExactMatrix& b);
  friend ExactMatrix operator-(const ExactMatrix& a, const ExactMatrix& b);
  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b);

  std::string to_string() const;

 private:
  FieldSpec field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<mpq_class> qdata_;
  std::vector<std::uint64_t> rdata_;
};

struct RrefResult {
  ExactMatrix reduced;
  std::size_t rank;
  std::vector<std::size_t> pivots;
};

/// Reduced row echelon form by Gauss-Jordan elimination with exact arithmetic.
RrefResult rref(const ExactMatrix& m);
std::size_t rank(const ExactMatrix& m);
/// Rank over F_p of an integer matrix given over Q (entries reduced mod p).
std::size_t rank_mod(const ExactMatrix& m, std::uint64_t p);
/// Basis of {x : M x = 0}, one vector per row.
ExactMatrix kernel(const ExactMatrix& m);
/// Inverse of a square matrix, or nullopt when singular.
std::optional<ExactMatrix> inverse(const ExactMatrix& m);
/// Exact determinant of a square matrix.
Scalar determinant(const ExactMatrix& m);

}  // namespace expandim
