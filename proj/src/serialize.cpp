#include "expandim/serialize.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace expandim {

double round12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

namespace {

FieldSpec field_from_json(const Json& j) {
  const auto name = j.at("field").get<std::string>();
  if (name == "Q") return FieldSpec::rationals();
  if (name == "Fp") return FieldSpec::prime(j.at("p").get<std::uint64_t>());
  throw Error(ErrorCode::ParseError, "unknown field '" + name + "'");
}

void field_to_json(Json& j, const FieldSpec& f) {
  j["field"] = f.is_rational() ? "Q" : "Fp";
  if (f.is_finite()) j["p"] = f.p();
}

template <typename Fn>
auto guarded(Fn fn) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

}  // namespace

Json matrix_to_json(const ExactMatrix& m) {
  Json j;
  field_to_json(j, m.field());
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  Json entries = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t k = 0; k < m.cols(); ++k) entries.push_back(m.at(i, k).to_string());
  }
  j["entries"] = std::move(entries);
  return j;
}

ExactMatrix matrix_from_json(const Json& j) {
  return guarded([&] {
    const FieldSpec f = field_from_json(j);
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    const auto& entries = j.at("entries");
    if (!entries.is_array() || entries.size() != rows * cols) {
      throw Error(ErrorCode::ParseError, "entries must hold rows*cols strings");
    }
    ExactMatrix m(f, rows, cols);
    for (std::size_t k = 0; k < entries.size(); ++k) {
      if (!entries[k].is_string()) throw Error(ErrorCode::ParseError, "matrix entries must be strings");
      m.set(k / cols, k % cols, Scalar::parse(f, entries[k].get<std::string>()));
    }
    return m;
  });
}

Json subspace_to_json(const Subspace& w) {
  Json j;
  j["dim"] = w.dim();
  j["ambient"] = w.ambient();
  j["basis"] = matrix_to_json(w.basis());
  return j;
}

Subspace subspace_from_json(const Json& j) {
  return guarded([&] {
    const ExactMatrix b = matrix_from_json(j.at("basis"));
    if (b.rows() == 0) return Subspace(b.field(), j.at("ambient").get<std::size_t>());
    return Subspace::span(b);
  });
}

Json family_to_json(const OperatorFamily& fam) {
  Json j;
  field_to_json(j, fam.field);
  j["n"] = fam.n;
  j["k"] = fam.k();
  Json ops = Json::array();
  for (const auto& t : fam.ops) ops.push_back(matrix_to_json(t));
  j["ops"] = std::move(ops);
  Json meta;
  meta["construction"] = fam.meta.construction;
  Json params = Json::object();
  for (const auto& [key, value] : fam.meta.params) params[key] = value;
  meta["params"] = std::move(params);
  meta["labels"] = fam.meta.labels;
  j["meta"] = std::move(meta);
  if (fam.action) {
    Json act;
    act["points"] = fam.action->points;
    act["labels"] = fam.action->labels;
    act["images"] = fam.action->images;
    j["action"] = std::move(act);
  }
  return j;
}

OperatorFamily family_from_json(const Json& j) {
  return guarded([&] {
    OperatorFamily fam;
    fam.field = field_from_json(j);
    fam.n = j.at("n").get<std::size_t>();
    for (const auto& m : j.at("ops")) fam.ops.push_back(matrix_from_json(m));
    if (j.contains("k") && j.at("k").get<std::size_t>() != fam.ops.size()) {
      throw Error(ErrorCode::ParseError, "k does not match the number of operators");
    }
    if (j.contains("meta")) {
      const auto& meta = j.at("meta");
      fam.meta.construction = meta.value("construction", "");
      if (meta.contains("params")) {
        for (const auto& [key, value] : meta.at("params").items()) fam.meta.params[key] = value.get<std::string>();
      }
      fam.meta.labels = meta.value("labels", std::vector<std::string>{});
    }
    if (j.contains("action")) {
      const auto& a = j.at("action");
      PermutationAction act;
      act.points = a.at("points").get<std::vector<std::string>>();
      act.labels = a.at("labels").get<std::vector<std::string>>();
      act.images = a.at("images").get<std::vector<std::vector<std::size_t>>>();
      fam.action = std::move(act);
    }
    fam.validate();
    return fam;
  });
}

namespace {

Json tolerances_to_json(const SpectralTolerances& tol) {
  Json t;
  t["unitarity"] = tol.unitarity;
  t["hermitian"] = tol.hermitian;
  t["kernel_eigenvalue"] = tol.kernel_eigenvalue;
  t["clamp"] = tol.clamp;
  return t;
}

}  // namespace

Json certificate_to_json(const Certificate& cert, const SpectralTolerances& tol) {
  Json j;
  j["method"] = std::string(to_string(cert.method));
  if (cert.epsilon_lower) j["epsilon_lower"] = cert.epsilon_lower->to_string();
  if (cert.epsilon_upper) {
    j["epsilon_upper"] = cert.epsilon_upper->to_string();
    j["upper_source"] = cert.upper_source;
  }
  if (cert.witness) {
    j["witness_basis"] = matrix_to_json(cert.witness->basis());
    j["witness_dim"] = cert.witness->dim();
    j["witness_expansion"] = cert.witness_expansion;
  }
  j["n"] = cert.n;
  j["k"] = cert.k;
  j["field"] = cert.field;
  j["construction"] = cert.construction;
  j["seed"] = cert.seed;
  if (cert.trials) j["trials"] = *cert.trials;
  j["budget"] = cert.budget;
  if (cert.spectral) {
    Json s;
    s["commutant_dim"] = cert.spectral->commutant_dim;
    s["fixed_dim"] = cert.spectral->fixed_dim;
    s["lambda_min_perp"] = round12(cert.spectral->lambda_min_perp);
    s["kappa_lower"] = round12(cert.spectral->kappa_lower);
    s["kappa_upper"] = round12(cert.spectral->kappa_upper);
    s["epsilon_prop21"] = round12(cert.spectral->epsilon);
    j["spectral"] = std::move(s);
  }
  j["tolerances"] = tolerances_to_json(tol);
  j["version"] = kVersion;
  j["runtime_ms"] = cert.runtime_ms;
  return j;
}

Json spectral_report_to_json(const OperatorFamily& fam, const Prop21Result& r, std::uint64_t seed,
                             const SpectralTolerances& tol) {
  Json j;
  j["construction"] = fam.meta.construction;
  Json params = Json::object();
  for (const auto& [key, value] : fam.meta.params) params[key] = value;
  j["params"] = std::move(params);
  j["n"] = fam.n;
  j["S"] = fam.meta.labels;
  j["fixed_dim"] = r.adjoint.fixed_dim;
  j["lambda_min_perp"] = round12(r.adjoint.lambda_min_perp);
  j["kappa_lower"] = round12(r.adjoint.kappa_lower);
  j["kappa_upper"] = round12(r.adjoint.kappa_upper);
  j["epsilon_prop21"] = round12(r.epsilon);
  j["tolerances"] = tolerances_to_json(tol);
  j["seed"] = seed;
  return j;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write '" + path + "'");
  out << text;
}

}  // namespace expandim
