#include "expandim/certify.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <limits>
#include <thread>

#include "expandim/rng.hpp"

namespace expandim {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::ExactBruteForce: return "exact";
    case Method::SampledProbe: return "sampled";
    case Method::SpectralProp21: return "spectral";
  }
  return "unknown";
}

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::Auto: return "auto";
    case Strategy::Exact: return "exact";
    case Strategy::Sampled: return "sampled";
    case Strategy::Spectral: return "spectral";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "auto") return Strategy::Auto;
  if (name == "exact") return Strategy::Exact;
  if (name == "sampled") return Strategy::Sampled;
  if (name == "spectral") return Strategy::Spectral;
  throw Error(ErrorCode::ParseError, "unknown strategy '" + std::string(name) + "'");
}

std::string EpsilonValue::to_string() const {
  if (exact) return exact->get_str();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", decimal);
  return buf;
}

namespace {

unsigned worker_count(unsigned requested) {
  if (requested) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

/// Runs body(i) for i in [0, count) on a pool of workers pulling indices.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body body) {
  const unsigned workers = std::min<std::size_t>(worker_count(threads), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      try {
        for (std::size_t i; !failed && (i = next++) < count;) body(i);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// Rank of a set of rows over F_p by incremental insertion into a reduced basis.
class RowBasisFp {
 public:
  RowBasisFp(std::size_t n, std::uint64_t p) : n_(n), p_(p), pivot_row_(n, npos) {}

  void clear() {
    std::fill(pivot_row_.begin(), pivot_row_.end(), npos);
    rows_.clear();
  }

  void insert(std::vector<std::uint64_t> v) {
    for (std::size_t c = 0; c < n_; ++c) {
      if (v[c] == 0) continue;
      if (pivot_row_[c] != npos) {
        const auto& b = rows_[pivot_row_[c]];
        const auto f = v[c];
        for (std::size_t j = c; j < n_; ++j) v[j] = modp::sub(v[j], modp::mul(f, b[j], p_), p_);
        continue;
      }
      const auto inv = modp::inv(v[c], p_);
      for (std::size_t j = c; j < n_; ++j) v[j] = modp::mul(v[j], inv, p_);
      pivot_row_[c] = rows_.size();
      rows_.push_back(std::move(v));
      return;
    }
  }

  std::size_t rank() const { return rows_.size(); }

 private:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  std::size_t n_;
  std::uint64_t p_;
  std::vector<std::size_t> pivot_row_;
  std::vector<std::vector<std::uint64_t>> rows_;
};

// Expansion dimension evaluator over F_p working on raw residue rows.
class FpEvaluator {
 public:
  explicit FpEvaluator(const OperatorFamily& fam) : n_(fam.n), p_(fam.field.p()), basis_(fam.n, fam.field.p()) {
    gf2_ = p_ == 2 && n_ <= 64;
    for (const auto& t : fam.ops) {
      std::vector<std::uint64_t> dense(n_ * n_);
      std::vector<std::uint64_t> cols(n_, 0);
      for (std::size_t r = 0; r < n_; ++r) {
        for (std::size_t c = 0; c < n_; ++c) {
          dense[r * n_ + c] = t.r(r, c);
          if (gf2_ && t.r(r, c)) cols[c] |= std::uint64_t{1} << r;
        }
      }
      ops_.push_back(std::move(dense));
      gf2_cols_.push_back(std::move(cols));
    }
  }

  /// rows: d vectors of length n.
  std::size_t expansion(const std::vector<std::vector<std::uint64_t>>& rows) {
    if (gf2_) return expansion_gf2(rows);
    basis_.clear();
    for (const auto& w : rows) basis_.insert(w);
    for (const auto& t : ops_) {
      for (const auto& w : rows) {
        std::vector<std::uint64_t> tw(n_, 0);
        for (std::size_t r = 0; r < n_; ++r) {
          std::uint64_t acc = 0;
          for (std::size_t c = 0; c < n_; ++c) {
            if (w[c]) acc = modp::add(acc, modp::mul(t[r * n_ + c], w[c], p_), p_);
          }
          tw[r] = acc;
        }
        basis_.insert(std::move(tw));
      }
    }
    return basis_.rank();
  }

 private:
  std::size_t expansion_gf2(const std::vector<std::vector<std::uint64_t>>& rows) {
    std::uint64_t pivots[64] = {};
    std::size_t rank = 0;
    auto insert = [&](std::uint64_t v) {
      while (v) {
        const int top = 63 - __builtin_clzll(v);
        if (!pivots[top]) {
          pivots[top] = v;
          ++rank;
          return;
        }
        v ^= pivots[top];
      }
    };
    std::vector<std::uint64_t> masks;
    masks.reserve(rows.size());
    for (const auto& w : rows) {
      std::uint64_t m = 0;
      for (std::size_t c = 0; c < n_; ++c) {
        if (w[c]) m |= std::uint64_t{1} << c;
      }
      masks.push_back(m);
      insert(m);
    }
    for (const auto& cols : gf2_cols_) {
      for (auto m : masks) {
        std::uint64_t img = 0;
        for (std::uint64_t bits = m; bits; bits &= bits - 1) img ^= cols[static_cast<std::size_t>(__builtin_ctzll(bits))];
        insert(img);
      }
    }
    return rank;
  }

  std::size_t n_;
  std::uint64_t p_;
  bool gf2_ = false;
  RowBasisFp basis_;
  std::vector<std::vector<std::uint64_t>> ops_;
  std::vector<std::vector<std::uint64_t>> gf2_cols_;
};

struct PatternTask {
  std::size_t dim;
  std::vector<std::size_t> pivots;
};

struct PatternBest {
  bool found = false;
  std::size_t expansion = 0;
  std::vector<std::uint64_t> digits;
};

// a_exp / a_dim < b_exp / b_dim
bool ratio_less(std::size_t a_exp, std::size_t a_dim, std::size_t b_exp, std::size_t b_dim) {
  return a_exp * b_dim < b_exp * a_dim;
}

Subspace subspace_from_digits(const FieldSpec& field, std::size_t n, const std::vector<std::size_t>& pivots,
                              const std::vector<std::uint64_t>& digits) {
  ExactMatrix basis(field, pivots.size(), n);
  const auto free = free_positions(n, pivots);
  for (std::size_t i = 0; i < pivots.size(); ++i) basis.r(i, pivots[i]) = 1;
  for (std::size_t k = 0; k < free.size(); ++k) basis.r(free[k].first, free[k].second) = digits[k];
  return Subspace::from_rref_unchecked(std::move(basis), pivots);
}

void fill_common(Certificate& cert, const OperatorFamily& fam, const CertifyOptions& opts) {
  cert.n = fam.n;
  cert.k = fam.k();
  cert.field = fam.field.name();
  cert.construction = fam.meta.construction;
  cert.seed = opts.seed;
  cert.budget = opts.budget;
}

}  // namespace

std::uint64_t brute_force_count(const FieldSpec& field, std::size_t n) {
  if (!field.is_finite()) return std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 0;
  for (std::size_t d = 1; d <= n / 2; ++d) {
    const auto c = gaussian_binomial(field.p(), n, d);
    if (c > std::numeric_limits<std::uint64_t>::max() - total) return std::numeric_limits<std::uint64_t>::max();
    total += c;
  }
  return total;
}

Certificate brute_force_epsilon(const OperatorFamily& fam, const CertifyOptions& opts) {
  if (!fam.field.is_finite()) throw Error(ErrorCode::InfiniteField, "exact enumeration needs a finite field");
  fam.validate();
  const std::size_t n = fam.n;
  if (n < 2) throw Error(ErrorCode::DimensionTooSmall, "no subspace with 1 <= dim <= n/2");
  const auto total = brute_force_count(fam.field, n);
  if (total > opts.budget) {
    throw Error(ErrorCode::BudgetExceeded,
                std::to_string(total) + " subspaces exceed budget " + std::to_string(opts.budget));
  }

  std::vector<PatternTask> tasks;
  for (std::size_t d = 1; d <= n / 2; ++d) {
    for (auto& piv : SubspaceStream::pivot_patterns(n, d)) tasks.push_back({d, std::move(piv)});
  }
  std::vector<PatternBest> best(tasks.size());
  // Patterns after one that reaches ratio 1 (the floor) cannot change the result.
  std::atomic<std::size_t> floor_pattern{std::numeric_limits<std::size_t>::max()};
  const auto p = fam.field.p();

  parallel_for(tasks.size(), opts.threads, [&](std::size_t t) {
    if (t > floor_pattern.load()) return;
    const auto& task = tasks[t];
    const auto free = free_positions(n, task.pivots);
    FpEvaluator eval(fam);
    std::vector<std::uint64_t> digits(free.size(), 0);
    std::vector<std::vector<std::uint64_t>> rows(task.dim, std::vector<std::uint64_t>(n, 0));
    PatternBest& out = best[t];
    while (true) {
      for (auto& r : rows) std::fill(r.begin(), r.end(), 0);
      for (std::size_t i = 0; i < task.dim; ++i) rows[i][task.pivots[i]] = 1;
      for (std::size_t k = 0; k < free.size(); ++k) rows[free[k].first][free[k].second] = digits[k];
      const auto e = eval.expansion(rows);
      if (!out.found || e < out.expansion) {
        out.found = true;
        out.expansion = e;
        out.digits = digits;
        if (e == task.dim) {
          std::size_t cur = floor_pattern.load();
          while (t < cur && !floor_pattern.compare_exchange_weak(cur, t)) {
          }
          break;
        }
      }
      std::size_t k = digits.size();
      while (k > 0 && ++digits[k - 1] == p) digits[--k] = 0;
      if (k == 0) break;
    }
  });

  std::size_t winner = tasks.size();
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    if (!best[t].found) continue;
    if (winner == tasks.size() ||
        ratio_less(best[t].expansion, tasks[t].dim, best[winner].expansion, tasks[winner].dim)) {
      winner = t;
    }
  }
  if (winner == tasks.size()) throw Error(ErrorCode::InternalError, "enumeration produced no subspace");

  Certificate cert;
  fill_common(cert, fam, opts);
  cert.method = Method::ExactBruteForce;
  const mpq_class eps = mpq_class(static_cast<unsigned long>(best[winner].expansion),
                                  static_cast<unsigned long>(tasks[winner].dim)) - 1;
  mpq_class canon(eps);
  canon.canonicalize();
  cert.epsilon_lower = EpsilonValue::rational(canon);
  cert.epsilon_upper = cert.epsilon_lower;
  cert.upper_source = "exact";
  cert.witness = subspace_from_digits(fam.field, n, tasks[winner].pivots, best[winner].digits);
  cert.witness_expansion = best[winner].expansion;
  return cert;
}

Certificate sampled_epsilon(const OperatorFamily& fam, const CertifyOptions& opts) {
  if (opts.trials < 1) throw Error(ErrorCode::DimensionMismatch, "trials must be at least 1");
  fam.validate();
  const std::size_t n = fam.n;
  const std::size_t half = n / 2;
  if (half < 1) throw Error(ErrorCode::DimensionTooSmall, "no subspace with 1 <= dim <= n/2");

  // Trials split evenly across dimensions, remainder to the smallest ones.
  std::vector<std::pair<std::size_t, std::uint64_t>> plan;  // (dim, trial index within dim)
  for (std::size_t d = 1; d <= half; ++d) {
    const std::uint64_t count = opts.trials / half + ((d - 1) < opts.trials % half ? 1 : 0);
    for (std::uint64_t t = 0; t < count; ++t) plan.emplace_back(d, t);
  }
  std::vector<std::size_t> expansion(plan.size(), 0);
  auto sample_seed = [&](std::size_t i) { return derive_seed(derive_seed(opts.seed, plan[i].first), plan[i].second); };
  parallel_for(plan.size(), opts.threads, [&](std::size_t i) {
    const Subspace w = random_subspace(fam.field, n, plan[i].first, sample_seed(i), opts.rational_bound);
    expansion[i] = expansion_dim(fam, w);
  });

  std::size_t winner = 0;
  for (std::size_t i = 1; i < plan.size(); ++i) {
    if (ratio_less(expansion[i], plan[i].first, expansion[winner], plan[winner].first)) winner = i;
  }
  Certificate cert;
  fill_common(cert, fam, opts);
  cert.method = Method::SampledProbe;
  cert.trials = opts.trials;
  mpq_class eps(static_cast<unsigned long>(expansion[winner]), static_cast<unsigned long>(plan[winner].first));
  eps.canonicalize();
  eps -= 1;
  cert.epsilon_upper = EpsilonValue::rational(eps);
  cert.upper_source = "sampled";
  cert.witness = random_subspace(fam.field, n, plan[winner].first, sample_seed(winner), opts.rational_bound);
  cert.witness_expansion = expansion[winner];
  return cert;
}

namespace {

SpectralSummary summarize(const Prop21Result& r) {
  SpectralSummary s;
  s.commutant_dim = r.irreducibility.commutant_dim;
  s.fixed_dim = r.adjoint.fixed_dim;
  s.lambda_min_perp = r.adjoint.lambda_min_perp;
  s.kappa_lower = r.adjoint.kappa_lower;
  s.kappa_upper = r.adjoint.kappa_upper;
  s.epsilon = r.epsilon;
  return s;
}

void apply_hint(Certificate& cert, const OperatorFamily& fam, const CertifyOptions& opts) {
  if (!opts.hint_witness || opts.hint_witness->dim() == 0 || opts.hint_witness->dim() > fam.n / 2) return;
  const auto& w = *opts.hint_witness;
  const auto e = expansion_dim(fam, w);
  mpq_class eps(static_cast<unsigned long>(e), static_cast<unsigned long>(w.dim()));
  eps.canonicalize();
  eps -= 1;
  if (!cert.epsilon_upper || eps < *cert.epsilon_upper->exact) {
    cert.epsilon_upper = EpsilonValue::rational(eps);
    cert.upper_source = "construction";
    cert.witness = w;
    cert.witness_expansion = e;
  }
}

}  // namespace

Certificate certify(const OperatorFamily& fam, Strategy strategy, const CertifyOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  fam.validate();
  Certificate cert;
  switch (strategy) {
    case Strategy::Exact:
      if (!fam.field.is_finite()) {
        throw Error(ErrorCode::StrategyUnavailable, "InfiniteField: exact enumeration needs a finite field");
      }
      cert = brute_force_epsilon(fam, opts);
      break;
    case Strategy::Sampled:
      cert = sampled_epsilon(fam, opts);
      apply_hint(cert, fam, opts);
      break;
    case Strategy::Spectral: {
      const auto r = prop21_certificate(fam, opts.seed, opts.tolerances);
      fill_common(cert, fam, opts);
      cert.method = Method::SpectralProp21;
      cert.epsilon_lower = EpsilonValue::real(r.epsilon);
      cert.spectral = summarize(r);
      apply_hint(cert, fam, opts);
      break;
    }
    case Strategy::Auto: {
      if (fam.field.is_finite() && fam.n >= 2 && brute_force_count(fam.field, fam.n) <= opts.budget) {
        cert = brute_force_epsilon(fam, opts);
        break;
      }
      cert = sampled_epsilon(fam, opts);
      apply_hint(cert, fam, opts);
      if (fam.field.is_rational() && fam.action) {
        std::optional<Prop21Result> r;
        try {
          r = prop21_certificate(fam, opts.seed, opts.tolerances);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::NotIrreducible && e.code() != ErrorCode::StrategyUnavailable &&
              e.code() != ErrorCode::TrivialRepresentation) {
            throw;
          }
        }
        if (r) {
          cert.method = Method::SpectralProp21;
          cert.epsilon_lower = EpsilonValue::real(r->epsilon);
          cert.spectral = summarize(*r);
          if (r->epsilon > cert.epsilon_upper->decimal + 1e-9) {
            throw Error(ErrorCode::ConsistencyViolation,
                        "spectral lower bound " + cert.epsilon_lower->to_string() + " exceeds sampled upper bound " +
                            cert.epsilon_upper->to_string());
          }
        }
      }
      break;
    }
  }
  cert.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return cert;
}

}  // namespace expandim
