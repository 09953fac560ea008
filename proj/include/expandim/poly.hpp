#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "expandim/field.hpp"

namespace expandim {

/// Univariate polynomial over F_p. coeffs()[i] is the coefficient of x^i; the
/// last stored coefficient is nonzero, and the zero polynomial stores nothing.
class PolyFp {
 public:
  PolyFp(std::uint64_t p, std::vector<std::uint64_t> coeffs);

  static PolyFp zero(std::uint64_t p) { return PolyFp(p, {}); }
  static PolyFp monomial(std::uint64_t p, std::size_t degree, std::uint64_t c = 1);

  std::uint64_t p() const { return p_; }
  const std::vector<std::uint64_t>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  std::uint64_t leading() const { return coeffs_.empty() ? 0 : coeffs_.back(); }
  std::uint64_t coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : 0; }
  bool is_monic() const { return !coeffs_.empty() && coeffs_.back() == 1; }
  PolyFp monic() const;

  /// e.g. "x^4 + x + 1".
  std::string to_string() const;

  friend PolyFp operator+(const PolyFp& a, const PolyFp& b);
  friend PolyFp operator-(const PolyFp& a, const PolyFp& b);
  friend PolyFp operator*(const PolyFp& a, const PolyFp& b);
  friend bool operator==(const PolyFp&, const PolyFp&) = default;

 private:
  void trim();

  std::uint64_t p_;
  std::vector<std::uint64_t> coeffs_;
};

struct PolyDivision {
  PolyFp quotient;
  PolyFp remainder;
};

PolyFp poly_scale(const PolyFp& a, std::uint64_t c);
PolyDivision poly_divmod(const PolyFp& a, const PolyFp& b);
PolyFp poly_mod(const PolyFp& a, const PolyFp& m);
/// Monic gcd (zero if both inputs are zero).
PolyFp poly_gcd(PolyFp a, PolyFp b);
/// base^e mod m by repeated squaring.
PolyFp poly_powmod(const PolyFp& base, const mpz_class& e, const PolyFp& m);

/// gcd(f, x^{p^i} - x) = 1 for every i <= deg f / 2.
bool poly_is_irreducible(const PolyFp& f);
/// Exhaustive division by every monic polynomial of degree 1..deg f / 2.
bool poly_is_irreducible_trial_division(const PolyFp& f);

/// Smallest monic irreducible of the given degree, ordering candidates by
/// their coefficient vectors read from x^{n-1} down to x^0.
PolyFp find_irreducible(std::uint64_t p, std::size_t degree);

}  // namespace expandim
