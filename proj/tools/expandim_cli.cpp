// expandim: construct operator families, certify dimension expansion, sweep
// parameters, run built-in invariant checks.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "expandim/certify.hpp"
#include "expandim/constructions.hpp"
#include "expandim/rng.hpp"
#include "expandim/serialize.hpp"
#include "expandim/spectral.hpp"

using namespace expandim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitConsistency = 3;
constexpr int kExitBudget = 4;

struct ConstructParams {
  std::string name;
  std::string field = "Q";
  std::uint64_t p = 0;
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t k = 2;
  std::uint64_t seed = 1;
  std::int64_t bound = kDefaultRationalBound;
  std::string gens;
  bool literal_witness = false;
};

struct Built {
  OperatorFamily family;
  std::optional<Subspace> witness;
};

struct RunConfig {
  std::string strategy = "auto";
  std::uint64_t seed = 1;
  std::uint64_t trials = 10'000;
  std::optional<std::uint64_t> budget;
  unsigned threads = 0;
  std::string out;
  bool json = false;
  std::string format = "csv";
};

FieldSpec parse_field(const std::string& text) {
  if (text == "Q") return FieldSpec::rationals();
  if (text.size() > 1 && (text[0] == 'F' || text[0] == 'f')) {
    const auto digits = text.substr(text[1] == 'p' ? 2 : 1);
    if (!digits.empty() && digits.find_first_not_of("0123456789") == std::string::npos) {
      return FieldSpec::prime(std::stoull(digits));
    }
  }
  throw Error(ErrorCode::ParseError, "field must be Q or F<p>, got '" + text + "'");
}

// "2,1,3;1,3,2" -> two one-line permutations.
std::vector<std::vector<std::size_t>> parse_gens(const std::string& text) {
  std::vector<std::vector<std::size_t>> out;
  if (text.empty()) return out;
  std::stringstream perms(text);
  std::string perm;
  while (std::getline(perms, perm, ';')) {
    std::vector<std::size_t> img;
    std::stringstream entries(perm);
    std::string e;
    while (std::getline(entries, e, ',')) {
      if (e.empty() || e.find_first_not_of("0123456789") != std::string::npos) {
        throw Error(ErrorCode::ParseError, "bad permutation entry '" + e + "'");
      }
      img.push_back(std::stoull(e));
    }
    out.push_back(std::move(img));
  }
  return out;
}

void require(bool cond, const std::string& what) {
  if (!cond) throw Error(ErrorCode::ParseError, what);
}

Built build(const ConstructParams& c) {
  const auto& name = c.name;
  if (name == "sl2p") {
    require(c.p != 0, "sl2p needs --p");
    return {sl2p_family(c.p, parse_field(c.field)), std::nullopt};
  }
  if (name == "sld-mod-p") {
    require(c.p != 0, "sld-mod-p needs --p");
    auto fam = sld_mod_p_projective_family(c.d == 0 ? 3 : c.d, c.p, parse_field(c.field));
    return {std::move(fam), std::nullopt};
  }
  if (name == "sym-standard") {
    require(c.n != 0, "sym-standard needs --n");
    return {symmetric_standard_family(c.n, parse_gens(c.gens), parse_field(c.field)), std::nullopt};
  }
  if (name == "companion") {
    require(c.p != 0 && c.n != 0, "companion needs --p and --n");
    auto inst = companion_counterexample(c.p, c.n, c.literal_witness);
    return {std::move(inst.family), std::move(inst.witness)};
  }
  if (name == "matrix-companion") {
    require(c.p != 0 && c.n != 0, "matrix-companion needs --p and --n");
    auto inst = matrix_algebra_counterexample(c.p, c.n, c.d == 0 ? 1 : c.d);
    return {std::move(inst.family), std::move(inst.witness)};
  }
  if (name == "random") {
    require(c.n != 0, "random needs --n");
    return {random_family(parse_field(c.field), c.n, c.k, c.seed, c.bound), std::nullopt};
  }
  throw Error(ErrorCode::ParseError, "unknown construction '" + name + "'");
}

std::uint64_t resolve_budget(const RunConfig& cfg) {
  if (cfg.budget) return *cfg.budget;
  if (const char* env = std::getenv("EXPANDIM_BUDGET")) {
    const std::string s(env);
    if (!s.empty() && s.find_first_not_of("0123456789") == std::string::npos) return std::stoull(s);
    throw Error(ErrorCode::ParseError, "EXPANDIM_BUDGET must be a non-negative integer");
  }
  return kDefaultEnumerationBudget;
}

CertifyOptions options_from(const RunConfig& cfg) {
  CertifyOptions o;
  o.seed = cfg.seed;
  o.trials = cfg.trials;
  o.threads = cfg.threads;
  o.budget = resolve_budget(cfg);
  return o;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

std::string witness_path_for(const std::string& family_path) {
  const auto dot = family_path.rfind(".json");
  const auto stem = dot == std::string::npos ? family_path : family_path.substr(0, dot);
  return stem + ".witness.json";
}

int cmd_construct(const ConstructParams& c, const std::string& out, std::string witness_out) {
  const Built b = build(c);
  Json fam = family_to_json(b.family);
  if (out.empty() || out == "-") {
    if (b.witness) {
      Json both;
      both["family"] = std::move(fam);
      both["witness"] = subspace_to_json(*b.witness);
      std::cout << both.dump(2) << "\n";
    } else {
      std::cout << fam.dump(2) << "\n";
    }
    return kExitOk;
  }
  write_text_file(out, fam.dump(2) + "\n");
  if (b.witness) {
    if (witness_out.empty()) witness_out = witness_path_for(out);
    write_text_file(witness_out, subspace_to_json(*b.witness).dump(2) + "\n");
    std::cerr << "wrote " << out << " and " << witness_out << "\n";
  } else {
    std::cerr << "wrote " << out << "\n";
  }
  return kExitOk;
}

// Family files may also be the combined {family, witness} document written
// by construct to stdout.
Built read_family_file(const std::string& path) {
  const Json j = Json::parse(read_text_file(path), nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::ParseError, "'" + path + "' is not valid JSON");
  if (j.contains("family")) {
    Built b{family_from_json(j.at("family")), std::nullopt};
    if (j.contains("witness")) b.witness = subspace_from_json(j.at("witness"));
    return b;
  }
  return {family_from_json(j), std::nullopt};
}

std::vector<std::string> summary_lines(const Certificate& c) {
  std::vector<std::string> out;
  const bool exact_pair = c.method == Method::ExactBruteForce;
  const bool upper_zero = c.epsilon_upper && c.epsilon_upper->exact && *c.epsilon_upper->exact == 0;
  if (exact_pair || upper_zero) {
    std::string line = "ε = " + (exact_pair ? c.epsilon_lower->to_string() : std::string("0"));
    if (c.witness) {
      line += " (witness dim " + std::to_string(c.witness->dim()) + ", expansion " +
              std::to_string(c.witness_expansion) + ", " + (exact_pair ? "exhaustive" : c.upper_source) + ")";
    }
    out.push_back(line);
    return out;
  }
  if (c.epsilon_lower) {
    std::string line = "ε ≥ " + c.epsilon_lower->to_string();
    if (c.spectral) {
      char buf[96];
      std::snprintf(buf, sizeof buf, " (κ²/12 with κ_lower = %.12g)", c.spectral->kappa_lower);
      line += buf;
    }
    out.push_back(line);
  }
  if (c.epsilon_upper) {
    out.push_back("ε ≤ " + c.epsilon_upper->to_string() + " (witness dim " + std::to_string(c.witness->dim()) +
                  ", expansion " + std::to_string(c.witness_expansion) + ", " + c.upper_source + ")");
  }
  return out;
}

int cmd_certify(const std::string& family_path, const std::string& hint_path, const RunConfig& cfg) {
  Built b = read_family_file(family_path);
  auto opts = options_from(cfg);
  if (!hint_path.empty()) {
    opts.hint_witness = subspace_from_json(Json::parse(read_text_file(hint_path)));
  } else if (b.witness) {
    opts.hint_witness = b.witness;
  }
  const Certificate cert = certify(b.family, parse_strategy(cfg.strategy), opts);
  const Json j = certificate_to_json(cert, opts.tolerances);
  if (!cfg.out.empty()) write_text_file(cfg.out, j.dump(2) + "\n");
  if (cfg.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& line : summary_lines(cert)) std::cout << line << "\n";
    std::cout << "method=" << to_string(cert.method) << " n=" << cert.n << " k=" << cert.k << " field=" << cert.field
              << " seed=" << cert.seed << " budget=" << cert.budget;
    if (cert.trials) std::cout << " trials=" << *cert.trials;
    std::cout << " version=" << kVersion << " runtime_ms=" << cert.runtime_ms << "\n";
  }
  return kExitOk;
}

std::vector<std::uint64_t> parse_values(const std::string& range, const std::string& values) {
  std::vector<std::uint64_t> out;
  if (!values.empty()) {
    std::stringstream ss(values);
    std::string v;
    while (std::getline(ss, v, ',')) {
      require(!v.empty() && v.find_first_not_of("0123456789") == std::string::npos, "bad value '" + v + "'");
      out.push_back(std::stoull(v));
    }
    return out;
  }
  const auto colon = range.find(':');
  require(colon != std::string::npos, "--range must look like a:b");
  const auto a = range.substr(0, colon), b = range.substr(colon + 1);
  require(!a.empty() && !b.empty() && (a + b).find_first_not_of("0123456789") == std::string::npos,
          "--range must look like a:b");
  for (std::uint64_t v = std::stoull(a); v <= std::stoull(b); ++v) out.push_back(v);
  return out;
}

std::string csv_field(const std::optional<EpsilonValue>& v) { return v ? v->to_string() : ""; }

int cmd_sweep(ConstructParams base, const std::string& range, const std::string& values, const RunConfig& cfg) {
  const bool over_p = base.name == "sl2p" || base.name == "sld-mod-p";
  std::vector<std::uint64_t> params = parse_values(range, values);
  if (over_p) {
    std::erase_if(params, [](std::uint64_t v) { return !is_prime(v); });
  }
  struct Row {
    std::string cells[6];
  };
  std::vector<Row> rows;
  const auto opts_base = options_from(cfg);
  for (auto v : params) {
    if (over_p) {
      base.p = v;
    } else {
      base.n = static_cast<std::size_t>(v);
    }
    const Built b = build(base);
    auto opts = opts_base;
    opts.hint_witness = b.witness;
    const auto cert = certify(b.family, parse_strategy(cfg.strategy), opts);
    char kappa[64] = "";
    if (cert.spectral) std::snprintf(kappa, sizeof kappa, "%.12g", cert.spectral->kappa_lower);
    rows.push_back({{std::to_string(v), std::to_string(b.family.n), csv_field(cert.epsilon_lower),
                     csv_field(cert.epsilon_upper), kappa, std::to_string(cert.runtime_ms)}});
  }
  const char* header[6] = {"param", "n", "epsilon_lower", "epsilon_upper", "kappa_lower", "runtime_ms"};
  std::ostringstream os;
  if (cfg.format == "table") {
    std::size_t width[6];
    for (int c = 0; c < 6; ++c) {
      width[c] = std::string(header[c]).size();
      for (const auto& r : rows) width[c] = std::max(width[c], r.cells[c].size());
    }
    auto line = [&](auto cell) {
      for (int c = 0; c < 6; ++c) {
        const std::string s = cell(c);
        os << s;
        if (c < 5) os << std::string(width[c] - s.size() + 2, ' ');
      }
      os << "\n";
    };
    line([&](int c) { return std::string(header[c]); });
    for (const auto& r : rows) line([&](int c) { return r.cells[c]; });
  } else {
    for (int c = 0; c < 6; ++c) os << header[c] << (c < 5 ? "," : "\n");
    for (const auto& r : rows) {
      for (int c = 0; c < 6; ++c) os << r.cells[c] << (c < 5 ? "," : "\n");
    }
  }
  emit(cfg.out, os.str());
  return kExitOk;
}

// Self-checks of library invariants on small instances; the full suites live
// in the test binaries.
int cmd_check(const RunConfig& cfg) {
  int failures = 0;
  auto report = [&](const char* name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS  " : "FAIL  ") << name << ": " << detail << "\n";
    if (!ok) ++failures;
  };
  const FieldSpec q = FieldSpec::rationals();

  {
    bool ok = true;
    for (std::uint64_t p : {2ULL, 3ULL}) {
      for (std::size_t n = 4; n <= 12; n += 2) {
        const auto inst = companion_counterexample(p, n);
        ok = ok && expansion_dim(inst.family, inst.witness) == inst.witness.dim() + 1 && inst.witness.dim() == n / 2;
      }
    }
    report("companion", ok, "expansion_dim = dim W + 1 for p in {2,3}, even n in 4..12");
  }
  {
    bool ok = true;
    for (std::uint64_t p : {2ULL, 3ULL}) {
      for (std::size_t n = 0; n <= 5; ++n) {
        for (std::size_t d = 0; d <= n; ++d) {
          SubspaceStream s(FieldSpec::prime(p), n, d);
          std::uint64_t count = 0;
          while (s.next()) ++count;
          ok = ok && count == gaussian_binomial(p, n, d);
        }
      }
    }
    report("enumeration", ok, "stream counts equal Gaussian binomials, p in {2,3}, n <= 5");
  }
  {
    const auto g = sld_generators(3);
    const auto size = group_closure_size({g.a, g.b}, 3);
    report("closure", size == 5616, std::to_string(size) + " elements generated mod 3");
  }
  {
    bool ok = true;
    Rng rng(cfg.seed);
    for (int i = 0; i < 2000; ++i) {
      const std::size_t n = 2 + rng.below(9), m = 1 + rng.below(n / 2);
      const auto w = random_subspace(q, n, m, rng.next(), 3);
      const auto w2 = random_subspace(q, n, m, rng.next(), 3);
      ok = ok && projection_lemma_check(make_projection_pair(orthogonal_projection(w), orthogonal_projection(w2)), w, w2).holds;
      const auto qn = q_norm_identity_check(n, w);
      ok = ok && std::abs(qn.lhs - qn.rhs) < 1e-9 && std::abs(qn.trace) < 1e-9;
    }
    report("projection", ok, "lemma and trace identities on 2000 random subspaces");
  }
  {
    bool ok = true;
    std::string detail;
    for (std::uint64_t p : {3ULL, 5ULL, 7ULL}) {
      auto opts = options_from(cfg);
      opts.trials = std::min<std::uint64_t>(cfg.trials, 2000);
      const auto c = certify(sl2p_family(p), Strategy::Auto, opts);
      ok = ok && c.method == Method::SpectralProp21 && c.spectral->kappa_lower > 0;
      detail += " p=" + std::to_string(p) + ":" + c.epsilon_lower->to_string() + "<=" + c.epsilon_upper->to_string();
    }
    report("spectral", ok, "spectral lower <= sampled upper;" + detail);
  }
  {
    auto opts = options_from(cfg);
    opts.trials = 500;
    const auto fam = random_family(FieldSpec::prime(2), 5, 2, cfg.seed);
    auto a = certificate_to_json(certify(fam, Strategy::Auto, opts));
    auto b = certificate_to_json(certify(fam, Strategy::Auto, opts));
    a.erase("runtime_ms");
    b.erase("runtime_ms");
    report("determinism", a.dump() == b.dump(), "repeated seeded certificate is byte-identical");
  }
  return failures == 0 ? kExitOk : kExitConsistency;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::ConsistencyViolation:
      return kExitConsistency;
    case ErrorCode::BudgetExceeded:
      return kExitBudget;
    case ErrorCode::InternalError:
    case ErrorCode::NumericalFailure:
      return kExitFailure;
    default:
      return kExitUsage;
  }
}

void add_construct_options(CLI::App* cmd, ConstructParams& c, bool with_sweep_param) {
  cmd->add_option("construction", c.name, "sl2p | sld-mod-p | sym-standard | companion | matrix-companion | random")
      ->required();
  cmd->add_option("--field", c.field, "Q or F<p> (sl2p, sld-mod-p, sym-standard, random)")->capture_default_str();
  if (!with_sweep_param) {
    cmd->add_option("--p", c.p, "prime");
    cmd->add_option("--n", c.n, "degree or ambient dimension");
  } else {
    cmd->add_option("--p", c.p, "prime (fixed when sweeping n)");
    cmd->add_option("--n", c.n, "dimension (fixed when sweeping p)");
  }
  cmd->add_option("--d", c.d, "SL_d dimension (sld-mod-p, default 3) or block size (matrix-companion, default 1)");
  cmd->add_option("--k", c.k, "number of operators (random)")->capture_default_str();
  cmd->add_option("--gens", c.gens, "one-line permutations of 1..n, e.g. \"2,1,3;2,3,1\" (sym-standard)");
  cmd->add_option("--bound", c.bound, "integer entry bound over Q (random)")->capture_default_str();
  cmd->add_flag("--literal-witness", c.literal_witness, "companion: witness span{x, ..., x^(n/2-1)} without 1");
}

void add_run_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--strategy", cfg.strategy, "auto | exact | sampled | spectral")->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "seed for sampling and Kazhdan trial vectors")->capture_default_str();
  cmd->add_option("--trials", cfg.trials, "random subspaces for sampled bounds")->capture_default_str();
  cmd->add_option("--budget", cfg.budget, "enumeration budget (default: $EXPANDIM_BUDGET or 1e8)");
  cmd->add_option("--threads", cfg.threads, "worker threads, 0 = all processors")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dimension expander construction and certification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  ConstructParams cparams;
  std::string construct_out, witness_out;
  auto* construct = app.add_subcommand("construct", "build an operator family and write it as JSON");
  add_construct_options(construct, cparams, false);
  construct->add_option("--seed", cparams.seed, "seed (random)")->capture_default_str();
  construct->add_option("-o,--out", construct_out, "family file (default: stdout)");
  construct->add_option("--witness-out", witness_out, "witness file for companion constructions");

  RunConfig cfg;
  std::string family_path, hint_path;
  auto* certify_cmd = app.add_subcommand("certify", "certify a family file");
  certify_cmd->add_option("family", family_path, "family JSON")->required()->check(CLI::ExistingFile);
  certify_cmd->add_option("--hint", hint_path, "witness JSON bounding epsilon from above")->check(CLI::ExistingFile);
  certify_cmd->add_option("-o,--out", cfg.out, "certificate JSON file");
  certify_cmd->add_flag("--json", cfg.json, "print the certificate JSON instead of the summary");
  add_run_options(certify_cmd, cfg);

  ConstructParams sparams;
  std::string range, values;
  auto* sweep = app.add_subcommand("sweep", "certify a construction over a parameter range, one CSV row each");
  add_construct_options(sweep, sparams, true);
  sweep->add_option("--range", range, "inclusive a:b over n (or primes p for sl2p and sld-mod-p)");
  sweep->add_option("--values", values, "comma-separated parameter values");
  sweep->add_option("-o,--out", cfg.out, "CSV file (default: stdout)");
  sweep->add_option("--format", cfg.format, "csv | table")->check(CLI::IsMember({"csv", "table"}))->capture_default_str();
  sweep->add_option("--construct-seed", sparams.seed, "seed for random constructions")->capture_default_str();
  add_run_options(sweep, cfg);

  auto* check = app.add_subcommand("check", "run the built-in invariant checks");
  check->add_option("--seed", cfg.seed, "seed")->capture_default_str();
  check->add_option("--trials", cfg.trials, "sampled trials per spectral family (capped at 2000)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*construct) return cmd_construct(cparams, construct_out, witness_out);
    if (*certify_cmd) return cmd_certify(family_path, hint_path, cfg);
    if (*sweep) {
      if (range.empty() && values.empty()) {
        std::cerr << "sweep needs --range or --values\n";
        return kExitUsage;
      }
      return cmd_sweep(sparams, range, values, cfg);
    }
    if (*check) return cmd_check(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
