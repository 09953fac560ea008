#include "expandim/field.hpp"

#include <sstream>

namespace expandim {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::ZeroOrConstantPolynomial: return "ZeroOrConstantPolynomial";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::InternalError: return "InternalError";
    case ErrorCode::ModularDegeneracy: return "ModularDegeneracy";
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::InvalidPermutation: return "InvalidPermutation";
    case ErrorCode::DegreeTooSmall: return "DegreeTooSmall";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::TrivialRepresentation: return "TrivialRepresentation";
    case ErrorCode::NotIrreducible: return "NotIrreducible";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::InfiniteField: return "InfiniteField";
    case ErrorCode::StrategyUnavailable: return "StrategyUnavailable";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ConsistencyViolation: return "ConsistencyViolation";
  }
  return "Unknown";
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

FieldSpec FieldSpec::prime(std::uint64_t p) {
  if (p >= kMaxModulus) throw Error(ErrorCode::NotPrime, "modulus " + std::to_string(p) + " exceeds 2^31");
  if (!is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  return FieldSpec(Kind::PrimeField, p);
}

std::string FieldSpec::name() const {
  return is_rational() ? "Q" : "F" + std::to_string(p_);
}

namespace modp {

std::uint64_t pow(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mul(r, a, p);
    a = mul(a, a, p);
    e >>= 1;
  }
  return r;
}

std::uint64_t inv(std::uint64_t a, std::uint64_t p) {
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(p), new_r = static_cast<std::int64_t>(a % p);
  if (new_r == 0) throw Error(ErrorCode::DivisionByZero, "inverse of 0 mod " + std::to_string(p));
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    std::int64_t tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  return reduce(t, p);
}

}  // namespace modp

Scalar Scalar::zero(const FieldSpec& f) { return from_int(f, 0); }
Scalar Scalar::one(const FieldSpec& f) { return from_int(f, 1); }

Scalar Scalar::from_int(const FieldSpec& f, std::int64_t v) {
  if (f.is_rational()) return Scalar(f, mpq_class(static_cast<long>(v)));
  return Scalar(f, modp::reduce(v, f.p()));
}

Scalar Scalar::rational(const mpq_class& q) {
  mpq_class c(q);
  c.canonicalize();
  return Scalar(FieldSpec::rationals(), std::move(c));
}

Scalar Scalar::residue(const FieldSpec& f, std::uint64_t r) {
  if (!f.is_finite()) throw Error(ErrorCode::FieldMismatch, "residue over the rationals");
  return Scalar(f, r % f.p());
}

Scalar Scalar::parse(const FieldSpec& f, const std::string& text) {
  try {
    if (f.is_rational()) {
      mpq_class q;
      if (q.set_str(text, 10) != 0 || q.get_den() == 0) throw Error(ErrorCode::ParseError, "bad rational '" + text + "'");
      q.canonicalize();
      return Scalar(f, std::move(q));
    }
    mpz_class z;
    if (z.set_str(text, 10) != 0) throw Error(ErrorCode::ParseError, "bad residue '" + text + "'");
    mpz_class r = z % mpz_class(static_cast<unsigned long>(f.p()));
    if (r < 0) r += static_cast<unsigned long>(f.p());
    return Scalar(f, static_cast<std::uint64_t>(r.get_ui()));
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCode::ParseError, "bad scalar '" + text + "'");
  }
}

bool Scalar::is_zero() const {
  if (field_.is_rational()) return sgn(as_rational()) == 0;
  return as_residue() == 0;
}

bool Scalar::is_one() const {
  if (field_.is_rational()) return as_rational() == 1;
  return as_residue() == 1;
}

std::string Scalar::to_string() const {
  if (field_.is_rational()) return as_rational().get_str();
  return std::to_string(as_residue());
}

namespace {

void check_same(const Scalar& a, const Scalar& b) {
  if (!(a.field() == b.field())) {
    throw Error(ErrorCode::FieldMismatch, a.field().name() + " vs " + b.field().name());
  }
}

}  // namespace

Scalar operator+(const Scalar& a, const Scalar& b) {
  check_same(a, b);
  if (a.field_.is_rational()) return Scalar(a.field_, mpq_class(a.as_rational() + b.as_rational()));
  return Scalar(a.field_, modp::add(a.as_residue(), b.as_residue(), a.field_.p()));
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  check_same(a, b);
  if (a.field_.is_rational()) return Scalar(a.field_, mpq_class(a.as_rational() - b.as_rational()));
  return Scalar(a.field_, modp::sub(a.as_residue(), b.as_residue(), a.field_.p()));
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  check_same(a, b);
  if (a.field_.is_rational()) return Scalar(a.field_, mpq_class(a.as_rational() * b.as_rational()));
  return Scalar(a.field_, modp::mul(a.as_residue(), b.as_residue(), a.field_.p()));
}

Scalar operator/(const Scalar& a, const Scalar& b) {
  check_same(a, b);
  if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, a.to_string() + " / 0");
  if (a.field_.is_rational()) return Scalar(a.field_, mpq_class(a.as_rational() / b.as_rational()));
  const auto p = a.field_.p();
  return Scalar(a.field_, modp::mul(a.as_residue(), modp::inv(b.as_residue(), p), p));
}

Scalar Scalar::operator-() const {
  if (field_.is_rational()) return Scalar(field_, mpq_class(-as_rational()));
  return Scalar(field_, modp::neg(as_residue(), field_.p()));
}

bool operator==(const Scalar& a, const Scalar& b) {
  return a.field_ == b.field_ && a.value_ == b.value_;
}

Scalar scalar_arith(const Scalar& a, const Scalar& b, ArithOp op) {
  switch (op) {
    case ArithOp::Add: return a + b;
    case ArithOp::Sub: return a - b;
    case ArithOp::Mul: return a * b;
    case ArithOp::Div: return a / b;
  }
  throw Error(ErrorCode::InternalError, "unknown op");
}

}  // namespace expandim
