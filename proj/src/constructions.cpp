#include "expandim/constructions.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "expandim/rng.hpp"

namespace expandim {

PermutationAction sl2p_projective_action(std::uint64_t p) {
  if (!is_prime(p) || p >= FieldSpec::kMaxModulus) throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  const std::size_t inf = p;
  PermutationAction act;
  for (std::uint64_t z = 0; z < p; ++z) act.points.push_back(std::to_string(z));
  act.points.push_back("inf");
  act.labels = {"A", "B"};

  std::vector<std::size_t> a(p + 1), b(p + 1);
  for (std::uint64_t z = 0; z < p; ++z) {
    a[z] = (z + 1) % p;
    b[z] = z == 0 ? inf : modp::neg(modp::inv(z, p), p);
  }
  a[inf] = inf;
  b[inf] = 0;
  act.images = {std::move(a), std::move(b)};
  return act;
}

ExactMatrix sumzero_matrix(const std::vector<std::size_t>& perm, FieldSpec field) {
  const std::size_t big = perm.size();
  if (big < 2) throw Error(ErrorCode::DimensionTooSmall, "sum-zero space needs at least two points");
  const std::size_t n = big - 1;
  ExactMatrix m(field, n, n);
  const Scalar one = Scalar::one(field);
  const std::size_t last_image = perm[n];
  for (std::size_t i = 0; i < n; ++i) {
    // P_g (e_i - e_last) = e_{g(i)} - e_{g(last)}.
    if (perm[i] < n) m.set(perm[i], i, m.at(perm[i], i) + one);
    if (last_image < n) m.set(last_image, i, m.at(last_image, i) - one);
  }
  return m;
}

OperatorFamily perm_to_sumzero_family(const PermutationAction& act, FieldSpec field) {
  act.validate();
  if (act.images.empty()) throw Error(ErrorCode::DimensionMismatch, "action has no generators");
  if (field.is_finite() && act.size() % field.p() == 0) {
    throw Error(ErrorCode::ModularDegeneracy,
                "characteristic " + std::to_string(field.p()) + " divides " + std::to_string(act.size()) + " points");
  }
  OperatorFamily fam;
  fam.field = field;
  fam.n = act.size() - 1;
  for (const auto& img : act.images) fam.ops.push_back(sumzero_matrix(img, field));
  fam.meta.labels = act.labels;
  fam.action = act;
  return fam;
}

OperatorFamily sl2p_family(std::uint64_t p, FieldSpec field) {
  OperatorFamily fam = perm_to_sumzero_family(sl2p_projective_action(p), field);
  fam.meta.construction = "sl2p";
  fam.meta.params = {{"p", std::to_string(p)}};
  return fam;
}

SldGenerators sld_generators(std::size_t d) {
  if (d < 3) throw Error(ErrorCode::DimensionTooSmall, "SL_d generators need d >= 3");
  const FieldSpec q = FieldSpec::rationals();
  ExactMatrix a = ExactMatrix::identity(q, d);
  a.q(1, 0) = 1;
  ExactMatrix b(q, d, d);
  for (std::size_t i = 0; i + 1 < d; ++i) b.q(i + 1, i) = 1;
  b.q(0, d - 1) = (d - 1) % 2 == 0 ? 1 : -1;
  return {std::move(a), std::move(b)};
}

std::vector<std::vector<std::uint64_t>> projective_points(std::size_t d, std::uint64_t p) {
  // Odometer over F_p^d in lexicographic order, keeping canonical representatives.
  std::vector<std::vector<std::uint64_t>> pts;
  std::vector<std::uint64_t> v(d, 0);
  while (true) {
    const auto lead = std::find_if(v.begin(), v.end(), [](std::uint64_t x) { return x != 0; });
    if (lead != v.end() && *lead == 1) pts.push_back(v);
    std::size_t k = d;
    while (k > 0 && ++v[k - 1] == p) v[--k] = 0;
    if (k == 0) break;
  }
  return pts;
}

namespace {

std::vector<std::uint64_t> normalize_projective(std::vector<std::uint64_t> v, std::uint64_t p) {
  for (auto x : v) {
    if (x != 0) {
      const auto inv = modp::inv(x, p);
      for (auto& y : v) y = modp::mul(y, inv, p);
      return v;
    }
  }
  throw Error(ErrorCode::InternalError, "zero vector has no projective point");
}

std::vector<std::vector<std::uint64_t>> reduce_mod(const ExactMatrix& m, std::uint64_t p) {
  std::vector<std::vector<std::uint64_t>> out(m.rows(), std::vector<std::uint64_t>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      out[i][j] = modp::reduce(m.q(i, j).get_num().get_si(), p);
    }
  }
  return out;
}

std::string point_label(const std::vector<std::uint64_t>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

}  // namespace

PermutationAction sld_projective_action(std::size_t d, std::uint64_t p, std::uint64_t max_points) {
  const auto gens = sld_generators(d);
  if (!is_prime(p) || p >= FieldSpec::kMaxModulus) throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  // (p^d - 1)/(p - 1) computed without overflow.
  mpz_class count;
  mpz_ui_pow_ui(count.get_mpz_t(), p, d);
  count = (count - 1) / (p - 1);
  if (count > max_points) {
    throw Error(ErrorCode::BudgetExceeded, count.get_str() + " projective points exceed budget " + std::to_string(max_points));
  }
  const auto pts = projective_points(d, p);
  PermutationAction act;
  for (const auto& v : pts) act.points.push_back(point_label(v));
  act.labels = {"A", "B"};
  for (const ExactMatrix* g : {&gens.a, &gens.b}) {
    const auto red = reduce_mod(*g, p);
    std::vector<std::size_t> img(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      std::vector<std::uint64_t> w(d, 0);
      for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) w[r] = modp::add(w[r], modp::mul(red[r][c], pts[i][c], p), p);
      }
      w = normalize_projective(std::move(w), p);
      img[i] = static_cast<std::size_t>(std::lower_bound(pts.begin(), pts.end(), w) - pts.begin());
    }
    act.images.push_back(std::move(img));
  }
  return act;
}

OperatorFamily sld_mod_p_projective_family(std::size_t d, std::uint64_t p, FieldSpec field, std::uint64_t max_points) {
  OperatorFamily fam = perm_to_sumzero_family(sld_projective_action(d, p, max_points), field);
  fam.meta.construction = "sld-mod-p";
  fam.meta.params = {{"d", std::to_string(d)}, {"p", std::to_string(p)}};
  return fam;
}

std::size_t group_closure_size(const std::vector<ExactMatrix>& gens, std::uint64_t p, std::size_t limit) {
  if (gens.empty()) return 1;
  const std::size_t d = gens.front().rows();
  const FieldSpec fp = FieldSpec::prime(p);
  using Flat = std::vector<std::uint64_t>;
  std::vector<Flat> step;
  for (const auto& g : gens) {
    const auto red = reduce_mod(g, p);
    ExactMatrix m(fp, d, d);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) m.r(i, j) = red[i][j];
    }
    const auto inv = inverse(m);
    if (!inv) throw Error(ErrorCode::InternalError, "generator is singular mod " + std::to_string(p));
    for (const ExactMatrix* x : {static_cast<const ExactMatrix*>(&m), &*inv}) {
      Flat f(d * d);
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) f[i * d + j] = x->r(i, j);
      }
      step.push_back(std::move(f));
    }
  }
  auto multiply = [&](const Flat& x, const Flat& y) {
    Flat z(d * d, 0);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t k = 0; k < d; ++k) {
        if (x[i * d + k] == 0) continue;
        for (std::size_t j = 0; j < d; ++j) {
          z[i * d + j] = modp::add(z[i * d + j], modp::mul(x[i * d + k], y[k * d + j], p), p);
        }
      }
    }
    return z;
  };
  Flat id(d * d, 0);
  for (std::size_t i = 0; i < d; ++i) id[i * d + i] = 1;
  std::set<Flat> seen{id};
  std::deque<Flat> queue{id};
  while (!queue.empty()) {
    Flat cur = std::move(queue.front());
    queue.pop_front();
    for (const auto& s : step) {
      Flat nxt = multiply(cur, s);
      if (seen.insert(nxt).second) {
        if (seen.size() > limit) throw Error(ErrorCode::BudgetExceeded, "group closure exceeds limit");
        queue.push_back(std::move(nxt));
      }
    }
  }
  return seen.size();
}

OperatorFamily symmetric_standard_family(std::size_t n, const std::vector<std::vector<std::size_t>>& gens,
                                         FieldSpec field) {
  if (n < 2) throw Error(ErrorCode::DimensionTooSmall, "symmetric group needs n >= 2");
  std::vector<std::vector<std::size_t>> one_based = gens;
  if (one_based.empty()) {
    std::vector<std::size_t> transposition(n), cycle(n);
    for (std::size_t i = 0; i < n; ++i) {
      transposition[i] = i + 1;
      cycle[i] = (i + 1) % n + 1;
    }
    std::swap(transposition[0], transposition[1]);
    one_based = {transposition, cycle};
  }
  PermutationAction act;
  for (std::size_t i = 1; i <= n; ++i) act.points.push_back(std::to_string(i));
  for (std::size_t g = 0; g < one_based.size(); ++g) {
    const auto& gen = one_based[g];
    if (gen.size() != n) throw Error(ErrorCode::InvalidPermutation, "generator " + std::to_string(g + 1) + " has wrong length");
    std::vector<std::size_t> img(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (gen[i] < 1 || gen[i] > n) throw Error(ErrorCode::InvalidPermutation, "image out of range");
      img[i] = gen[i] - 1;
    }
    act.labels.push_back("g" + std::to_string(g + 1));
    act.images.push_back(std::move(img));
  }
  OperatorFamily fam = perm_to_sumzero_family(act, field);
  fam.meta.construction = "sym-standard";
  fam.meta.params = {{"n", std::to_string(n)}};
  return fam;
}

ExactMatrix companion_matrix(const PolyFp& f) {
  if (!f.is_monic() || f.degree() < 1) throw Error(ErrorCode::ZeroOrConstantPolynomial, "companion of '" + f.to_string() + "'");
  const auto p = f.p();
  const auto n = static_cast<std::size_t>(f.degree());
  ExactMatrix c(FieldSpec::prime(p), n, n);
  for (std::size_t j = 0; j + 1 < n; ++j) c.r(j + 1, j) = 1;
  for (std::size_t i = 0; i < n; ++i) c.r(i, n - 1) = modp::neg(f.coeff(i), p);  // x^n = -sum c_i x^i
  return c;
}

CounterexampleInstance companion_counterexample(std::uint64_t p, std::size_t n, bool literal_witness) {
  if (n < 4) throw Error(ErrorCode::DegreeTooSmall, "companion counterexample needs n >= 4");
  const FieldSpec fp = FieldSpec::prime(p);
  PolyFp f = find_irreducible(p, n);
  OperatorFamily fam;
  fam.field = fp;
  fam.n = n;
  fam.ops.push_back(companion_matrix(f));
  fam.meta.construction = "companion";
  fam.meta.params = {{"p", std::to_string(p)}, {"n", std::to_string(n)}, {"modulus", f.to_string()}};
  fam.meta.labels = {"x"};
  if (literal_witness) fam.meta.params["witness"] = "literal";

  const std::size_t half = n / 2;
  const std::size_t first = literal_witness ? 1 : 0;
  ExactMatrix basis(fp, half - first, n);
  for (std::size_t e = first; e < half; ++e) basis.r(e - first, e) = 1;
  return {std::move(fam), Subspace::span(basis), std::move(f)};
}

CounterexampleInstance matrix_algebra_counterexample(std::uint64_t p, std::size_t n, std::size_t d) {
  if (d < 1) throw Error(ErrorCode::DimensionTooSmall, "block size must be at least 1");
  auto base = companion_counterexample(p, n);
  const FieldSpec fp = base.family.field;
  const ExactMatrix& c = base.family.ops.front();
  ExactMatrix big(fp, n * d, n * d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (c.r(i, j) == 0) continue;
      for (std::size_t b = 0; b < d; ++b) big.r(i * d + b, j * d + b) = c.r(i, j);
    }
  }
  const std::size_t m = base.witness.dim();
  ExactMatrix basis(fp, m * d, n * d);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t b = 0; b < d; ++b) basis.r(i * d + b, i * d + b) = 1;
  }
  OperatorFamily fam;
  fam.field = fp;
  fam.n = n * d;
  fam.ops.push_back(std::move(big));
  fam.meta.construction = "matrix-companion";
  fam.meta.params = {{"p", std::to_string(p)}, {"n", std::to_string(n)}, {"d", std::to_string(d)},
                     {"modulus", base.modulus.to_string()}};
  fam.meta.labels = {"x"};
  return {std::move(fam), Subspace::span(basis), std::move(base.modulus)};
}

OperatorFamily random_family(FieldSpec field, std::size_t n, std::size_t k, std::uint64_t seed, std::int64_t bound) {
  if (k < 1) throw Error(ErrorCode::DimensionMismatch, "random family needs k >= 1");
  if (n < 1) throw Error(ErrorCode::DimensionTooSmall, "random family needs n >= 1");
  OperatorFamily fam;
  fam.field = field;
  fam.n = n;
  for (std::size_t i = 0; i < k; ++i) {
    Rng rng(derive_seed(seed, i));
    bool found = false;
    for (int attempt = 0; attempt < 1000 && !found; ++attempt) {
      ExactMatrix m(field, n, n);
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
          if (field.is_rational()) {
            m.q(r, c) = static_cast<long>(rng.between(-bound, bound));
          } else {
            m.r(r, c) = rng.below(field.p());
          }
        }
      }
      if (rank(m) == n) {
        fam.ops.push_back(std::move(m));
        found = true;
      }
    }
    if (!found) throw Error(ErrorCode::InternalError, "random_family: no invertible sample in 1000 attempts");
    fam.meta.labels.push_back("T" + std::to_string(i + 1));
  }
  fam.meta.construction = "random";
  fam.meta.params = {{"field", field.name()}, {"n", std::to_string(n)}, {"k", std::to_string(k)},
                     {"seed", std::to_string(seed)}};
  return fam;
}

}  // namespace expandim
