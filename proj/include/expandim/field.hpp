#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include <gmpxx.h>

#include "expandim/error.hpp"

namespace expandim {

/// Exact scalar domain: the rationals or a prime field F_p.
class FieldSpec {
 public:
  enum class Kind { Rationals, PrimeField };

  // Prime moduli are capped so that products of two residues fit in 64 bits.
  static constexpr std::uint64_t kMaxModulus = (std::uint64_t{1} << 31);

  static FieldSpec rationals() { return FieldSpec(Kind::Rationals, 0); }
  /// Throws NotPrime unless p is a prime below kMaxModulus.
  static FieldSpec prime(std::uint64_t p);

  Kind kind() const { return kind_; }
  bool is_rational() const { return kind_ == Kind::Rationals; }
  bool is_finite() const { return kind_ == Kind::PrimeField; }
  /// Modulus; 0 for the rationals.
  std::uint64_t p() const { return p_; }
  /// 0 for the rationals.
  std::uint64_t characteristic() const { return p_; }

  /// "Q" or "F<p>".
  std::string name() const;

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;

 private:
  FieldSpec(Kind kind, std::uint64_t p) : kind_(kind), p_(p) {}

  Kind kind_;
  std::uint64_t p_;
};

bool is_prime(std::uint64_t n);

namespace modp {

inline std::uint64_t add(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  std::uint64_t s = a + b;
  return s >= p ? s - p : s;
}
inline std::uint64_t sub(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return a >= b ? a - b : a + p - b;
}
inline std::uint64_t mul(std::uint64_t a, std::uint64_t b, std::uint64_t p) { return (a * b) % p; }
inline std::uint64_t neg(std::uint64_t a, std::uint64_t p) { return a == 0 ? 0 : p - a; }
std::uint64_t pow(std::uint64_t a, std::uint64_t e, std::uint64_t p);
/// Inverse of a nonzero residue (extended Euclid).
std::uint64_t inv(std::uint64_t a, std::uint64_t p);
/// Canonical residue of a signed integer.
inline std::uint64_t reduce(std::int64_t v, std::uint64_t p) {
  std::int64_t r = v % static_cast<std::int64_t>(p);
  return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(p) : r);
}

}  // namespace modp

/// An element of a FieldSpec. Rationals are kept in lowest terms with a
/// positive denominator, residues in [0, p).
class Scalar {
 public:
  static Scalar zero(const FieldSpec& f);
  static Scalar one(const FieldSpec& f);
  static Scalar from_int(const FieldSpec& f, std::int64_t v);
  static Scalar rational(const mpq_class& q);
  static Scalar residue(const FieldSpec& f, std::uint64_t r);
  /// Parses "num/den" or "num" (rationals) or a decimal residue (prime field).
  static Scalar parse(const FieldSpec& f, const std::string& text);

  const FieldSpec& field() const { return field_; }
  bool is_zero() const;
  bool is_one() const;

  /// Precondition: field is the rationals.
  const mpq_class& as_rational() const { return std::get<mpq_class>(value_); }
  /// Precondition: field is a prime field.
  std::uint64_t as_residue() const { return std::get<std::uint64_t>(value_); }

  std::string to_string() const;

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  Scalar operator-() const;

  friend bool operator==(const Scalar& a, const Scalar& b);

 private:
  Scalar(FieldSpec f, std::variant<mpq_class, std::uint64_t> v) : field_(f), value_(std::move(v)) {}

  FieldSpec field_;
  std::variant<mpq_class, std::uint64_t> value_;
};

enum class ArithOp { Add, Sub, Mul, Div };

/// Dispatching form of the four field operations.
Scalar scalar_arith(const Scalar& a, const Scalar& b, ArithOp op);

}  // namespace expandim
