#include "expandim/poly.hpp"

#include <algorithm>

namespace expandim {

PolyFp::PolyFp(std::uint64_t p, std::vector<std::uint64_t> coeffs) : p_(p), coeffs_(std::move(coeffs)) {
  if (!is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  for (auto& c : coeffs_) c %= p_;
  trim();
}

PolyFp PolyFp::monomial(std::uint64_t p, std::size_t degree, std::uint64_t c) {
  std::vector<std::uint64_t> v(degree + 1, 0);
  v[degree] = c;
  return PolyFp(p, std::move(v));
}

void PolyFp::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

PolyFp PolyFp::monic() const {
  if (is_zero()) return *this;
  return poly_scale(*this, modp::inv(leading(), p_));
}

std::string PolyFp::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  for (int i = degree(); i >= 0; --i) {
    const auto c = coeffs_[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    if (!out.empty()) out += " + ";
    if (c != 1 || i == 0) out += std::to_string(c);
    if (i >= 1) out += "x";
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out;
}

namespace {

void check_modulus(const PolyFp& a, const PolyFp& b) {
  if (a.p() != b.p()) throw Error(ErrorCode::FieldMismatch, "polynomials over different primes");
}

}  // namespace

PolyFp operator+(const PolyFp& a, const PolyFp& b) {
  check_modulus(a, b);
  std::vector<std::uint64_t> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = modp::add(a.coeff(i), b.coeff(i), a.p_);
  return PolyFp(a.p_, std::move(c));
}

PolyFp operator-(const PolyFp& a, const PolyFp& b) {
  check_modulus(a, b);
  std::vector<std::uint64_t> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = modp::sub(a.coeff(i), b.coeff(i), a.p_);
  return PolyFp(a.p_, std::move(c));
}

PolyFp operator*(const PolyFp& a, const PolyFp& b) {
  check_modulus(a, b);
  if (a.is_zero() || b.is_zero()) return PolyFp::zero(a.p_);
  std::vector<std::uint64_t> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
      c[i + j] = modp::add(c[i + j], modp::mul(a.coeffs_[i], b.coeffs_[j], a.p_), a.p_);
    }
  }
  return PolyFp(a.p_, std::move(c));
}

PolyFp poly_scale(const PolyFp& a, std::uint64_t c) {
  std::vector<std::uint64_t> v = a.coeffs();
  for (auto& x : v) x = modp::mul(x, c % a.p(), a.p());
  return PolyFp(a.p(), std::move(v));
}

PolyDivision poly_divmod(const PolyFp& a, const PolyFp& b) {
  check_modulus(a, b);
  if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, "polynomial division by zero");
  const auto p = a.p();
  std::vector<std::uint64_t> r = a.coeffs();
  const int db = b.degree();
  if (a.degree() < db) return {PolyFp::zero(p), a};
  std::vector<std::uint64_t> q(static_cast<std::size_t>(a.degree() - db + 1), 0);
  const auto lead_inv = modp::inv(b.leading(), p);
  for (int i = a.degree(); i >= db; --i) {
    const auto c = modp::mul(r[static_cast<std::size_t>(i)], lead_inv, p);
    if (c == 0) continue;
    q[static_cast<std::size_t>(i - db)] = c;
    for (int j = 0; j <= db; ++j) {
      auto& slot = r[static_cast<std::size_t>(i - db + j)];
      slot = modp::sub(slot, modp::mul(c, b.coeff(static_cast<std::size_t>(j)), p), p);
    }
  }
  return {PolyFp(p, std::move(q)), PolyFp(p, std::move(r))};
}

PolyFp poly_mod(const PolyFp& a, const PolyFp& m) { return poly_divmod(a, m).remainder; }

PolyFp poly_gcd(PolyFp a, PolyFp b) {
  check_modulus(a, b);
  while (!b.is_zero()) {
    PolyFp r = poly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

PolyFp poly_powmod(const PolyFp& base, const mpz_class& e, const PolyFp& m) {
  PolyFp result = poly_mod(PolyFp(base.p(), {1}), m);
  PolyFp b = poly_mod(base, m);
  const auto bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  if (e == 0) return result;
  for (std::size_t i = bits; i-- > 0;) {
    result = poly_mod(result * result, m);
    if (mpz_tstbit(e.get_mpz_t(), i)) result = poly_mod(result * b, m);
  }
  return result;
}

namespace {

void require_nonconstant(const PolyFp& f) {
  if (f.degree() < 1) throw Error(ErrorCode::ZeroOrConstantPolynomial, "irreducibility of '" + f.to_string() + "'");
}

}  // namespace

bool poly_is_irreducible(const PolyFp& f) {
  require_nonconstant(f);
  const PolyFp g = f.monic();
  const auto p = g.p();
  const int n = g.degree();
  const PolyFp x = PolyFp::monomial(p, 1);
  // Frobenius iterate: power = x^{p^i} mod g.
  PolyFp power = poly_mod(x, g);
  const mpz_class pz(static_cast<unsigned long>(p));
  for (int i = 1; i <= n / 2; ++i) {
    power = poly_powmod(power, pz, g);
    const PolyFp d = poly_gcd(g, power - x);
    if (d.degree() != 0) return false;
  }
  return true;
}

bool poly_is_irreducible_trial_division(const PolyFp& f) {
  require_nonconstant(f);
  const auto p = f.p();
  const int n = f.degree();
  for (int d = 1; d <= n / 2; ++d) {
    // Every monic polynomial of degree d, indexed by its lower coefficients.
    std::vector<std::uint64_t> low(static_cast<std::size_t>(d), 0);
    while (true) {
      std::vector<std::uint64_t> c = low;
      c.push_back(1);
      if (poly_mod(f, PolyFp(p, std::move(c))).is_zero()) return false;
      std::size_t k = 0;
      while (k < low.size() && ++low[k] == p) low[k++] = 0;
      if (k == low.size()) break;
    }
  }
  return true;
}

PolyFp find_irreducible(std::uint64_t p, std::size_t degree) {
  if (degree < 1) throw Error(ErrorCode::ZeroOrConstantPolynomial, "degree must be at least 1");
  // Odometer over (c_{n-1}, ..., c_0) with c_0 the fastest digit.
  std::vector<std::uint64_t> low(degree, 0);
  while (true) {
    std::vector<std::uint64_t> c = low;
    c.push_back(1);
    PolyFp f(p, std::move(c));
    if (poly_is_irreducible(f)) return f;
    std::size_t k = 0;
    while (k < low.size() && ++low[k] == p) low[k++] = 0;
    if (k == low.size()) throw Error(ErrorCode::InternalError, "no irreducible polynomial found");
  }
}

}  // namespace expandim
