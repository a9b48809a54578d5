#include "choquard/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "choquard/error.hpp"

namespace choquard {

namespace {

template <class T>
T field(const Json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw FormatError(std::string("field '") + key + "' has the wrong type");
  }
}

// null stands in for non-finite values, which JSON cannot carry
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

template <class T>
void overlay(const Json& j, const char* key, T& target) {
  if (j.contains(key)) target = field<T>(j, key);
}

void reject_unknown(const Json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) throw FormatError("config section '" + where + "' must be an object");
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) throw FormatError("unknown config key '" + where + "." + k + "'");
  }
}

}  // namespace

Json to_json(const GroundState& gs) {
  Json j;
  j["p"] = gs.p;
  j["mass"] = gs.mass;
  j["lambda"] = gs.lambda;
  j["energy"] = {{"kinetic", gs.energy.kinetic},
                 {"coulomb", gs.energy.coulomb},
                 {"total", gs.energy.total},
                 {"mass_squared", gs.energy.mass}};
  j["grid"] = {{"n", gs.grid().size()}, {"h", gs.grid().spacing()}, {"r_max", gs.grid().r_max()}};
  j["method"] = to_string(gs.method);
  j["iterations"] = gs.iterations;
  j["eq_residual"] = gs.eq_residual;
  j["energy_trace"] = gs.energy_trace;
  j["q"] = gs.q.data();
  return j;
}

GroundState ground_state_from_json(const Json& j) {
  if (!j.is_object()) throw FormatError("ground state must be a JSON object");
  const auto& g = j.contains("grid") ? j.at("grid") : throw FormatError("missing field 'grid'");
  const RadialGrid grid(field<std::size_t>(g, "n"), field<double>(g, "r_max"));
  if (grid.spacing() != field<double>(g, "h")) throw FormatError("grid spacing does not match n and r_max");
  auto values = field<std::vector<double>>(j, "q");
  if (values.size() != grid.size()) throw FormatError("profile length does not match the grid");
  GroundState gs{RadialProfile(grid, std::move(values)), 0.0, 0.0, 0.0, {}, 0.0, SolveMethod::fixpoint, 0, {}};
  gs.p = field<double>(j, "p");
  gs.mass = field<double>(j, "mass");
  gs.lambda = field<double>(j, "lambda");
  const auto& e = j.contains("energy") ? j.at("energy") : throw FormatError("missing field 'energy'");
  gs.energy.kinetic = field<double>(e, "kinetic");
  gs.energy.coulomb = field<double>(e, "coulomb");
  gs.energy.total = field<double>(e, "total");
  gs.energy.mass = field<double>(e, "mass_squared");
  gs.energy.p = gs.p;
  try {
    gs.method = parse_method(field<std::string>(j, "method"));
  } catch (const DomainError& err) {
    throw FormatError(err.what());
  }
  gs.iterations = field<int>(j, "iterations");
  gs.eq_residual = field<double>(j, "eq_residual");
  if (j.contains("energy_trace")) gs.energy_trace = field<std::vector<double>>(j, "energy_trace");
  return gs;
}

Json to_json(const SpectrumReport& rep) {
  Json j;
  j["p"] = rep.p;
  j["lambda"] = rep.lambda;
  j["ell"] = rep.ell;
  j["kind"] = to_string(rep.kind);
  j["eigenvalues"] = rep.eigenvalues;
  j["kernel_threshold"] = rep.kernel_threshold;
  j["kernel_count"] = rep.kernel_count;
  j["gap"] = number(rep.gap);
  if (rep.cosine_to_qprime) j["cosine_to_Qprime"] = *rep.cosine_to_qprime;
  return j;
}

Json to_json(const NondegeneracyReport& rep) {
  Json j;
  j["verdict"] = rep.verdict;
  j["kernel_counts"] = {rep.lplus[0].kernel_count, rep.lplus[1].kernel_count, rep.lplus[2].kernel_count};
  j["kernel_threshold"] = rep.kernel_threshold;
  j["refinement_shift"] = rep.refinement_shift;
  j["morse_index"] = rep.morse_index;
  j["lminus_residual"] = rep.lminus_residual;
  j["lminus_positive_kernel"] = rep.lminus_positive_kernel;
  j["grid_n"] = rep.grid_n;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_json(const std::string& path, const Json& j) {
  std::ofstream os(path);
  if (!os) throw FormatError("cannot open " + path + " for writing");
  os << dump(j);
  if (!os) throw FormatError("write failed: " + path);
}

Json read_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open " + path);
  try {
    return Json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void write_ground_state(const std::string& path, const GroundState& gs) { write_json(path, to_json(gs)); }

GroundState read_ground_state(const std::string& path) { return ground_state_from_json(read_json(path)); }

void apply_config(LabConfig& cfg, const Json& j) {
  reject_unknown(j, {"solver", "spectral", "sweep", "verify"}, "config");
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    reject_unknown(s,
                   {"grid_n", "r_max", "extent", "method", "guess", "fixpoint_tol", "flow_tol", "residual_tol",
                    "max_iterations", "max_halvings"},
                   "solver");
    auto& c = cfg.solver;
    overlay(s, "grid_n", c.grid_n);
    overlay(s, "r_max", c.r_max);
    overlay(s, "extent", c.extent);
    if (s.contains("method")) c.method = parse_method(field<std::string>(s, "method"));
    if (s.contains("guess")) c.guess = parse_guess(field<std::string>(s, "guess"));
    overlay(s, "fixpoint_tol", c.fixpoint_tol);
    overlay(s, "flow_tol", c.flow_tol);
    overlay(s, "residual_tol", c.residual_tol);
    overlay(s, "max_iterations", c.max_iterations);
    overlay(s, "max_halvings", c.max_halvings);
  }
  if (j.contains("spectral")) {
    const auto& s = j.at("spectral");
    reject_unknown(s, {"grid_n", "k", "kernel_rel", "refine_threshold", "ift_grid_n", "boundary_fraction"},
                   "spectral");
    auto& c = cfg.spectral;
    overlay(s, "grid_n", c.grid_n);
    overlay(s, "k", c.k);
    overlay(s, "kernel_rel", c.kernel_rel);
    overlay(s, "refine_threshold", c.refine_threshold);
    overlay(s, "ift_grid_n", c.ift_grid_n);
    overlay(s, "boundary_fraction", c.boundary_fraction);
  }
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    reject_unknown(s,
                   {"spectra", "n_starts", "threads", "pohozaev", "kernel_mode", "cosine", "decay_r2",
                    "unique_rel", "lminus"},
                   "sweep");
    auto& c = cfg.sweep;
    overlay(s, "spectra", c.spectra);
    overlay(s, "n_starts", c.n_starts);
    overlay(s, "threads", c.threads);
    overlay(s, "pohozaev", c.tol.pohozaev);
    overlay(s, "kernel_mode", c.tol.kernel_mode);
    overlay(s, "cosine", c.tol.cosine);
    overlay(s, "decay_r2", c.tol.decay_r2);
    overlay(s, "unique_rel", c.tol.unique_rel);
    overlay(s, "lminus", c.tol.lminus);
  }
  if (j.contains("verify")) {
    const auto& s = j.at("verify");
    reject_unknown(s,
                   {"residual", "mass", "pohozaev", "decay_r2", "ift_factorization", "ift_w2", "ift_pairing",
                    "scaling", "rearrangement"},
                   "verify");
    auto& c = cfg.verify;
    overlay(s, "residual", c.residual);
    overlay(s, "mass", c.mass);
    overlay(s, "pohozaev", c.pohozaev);
    overlay(s, "decay_r2", c.decay_r2);
    overlay(s, "ift_factorization", c.ift_factorization);
    overlay(s, "ift_w2", c.ift_w2);
    overlay(s, "ift_pairing", c.ift_pairing);
    overlay(s, "scaling", c.scaling);
    overlay(s, "rearrangement", c.rearrangement);
  }
}

Json to_json(const LabConfig& cfg) {
  const auto& s = cfg.solver;
  const auto& sp = cfg.spectral;
  const auto& sw = cfg.sweep;
  const auto& v = cfg.verify;
  Json j;
  j["solver"] = {{"grid_n", s.grid_n},
                 {"r_max", s.r_max},
                 {"extent", s.extent},
                 {"method", to_string(s.method)},
                 {"guess", to_string(s.guess)},
                 {"fixpoint_tol", s.fixpoint_tol},
                 {"flow_tol", s.flow_tol},
                 {"residual_tol", s.residual_tol},
                 {"max_iterations", s.max_iterations},
                 {"max_halvings", s.max_halvings}};
  j["spectral"] = {{"grid_n", sp.grid_n},
                   {"k", sp.k},
                   {"kernel_rel", sp.kernel_rel},
                   {"refine_threshold", sp.refine_threshold},
                   {"ift_grid_n", sp.ift_grid_n},
                   {"boundary_fraction", sp.boundary_fraction}};
  j["sweep"] = {{"spectra", sw.spectra},
                {"n_starts", sw.n_starts},
                {"threads", sw.threads},
                {"pohozaev", sw.tol.pohozaev},
                {"kernel_mode", sw.tol.kernel_mode},
                {"cosine", sw.tol.cosine},
                {"decay_r2", sw.tol.decay_r2},
                {"unique_rel", sw.tol.unique_rel},
                {"lminus", sw.tol.lminus}};
  j["verify"] = {{"residual", v.residual},
                 {"mass", v.mass},
                 {"pohozaev", v.pohozaev},
                 {"decay_r2", v.decay_r2},
                 {"ift_factorization", v.ift_factorization},
                 {"ift_w2", v.ift_w2},
                 {"ift_pairing", v.ift_pairing},
                 {"scaling", v.scaling},
                 {"rearrangement", v.rearrangement}};
  return j;
}

}  // namespace choquard
