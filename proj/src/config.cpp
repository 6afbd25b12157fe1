#include "qgl/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qgl {

using nlohmann::json;

namespace {

const std::map<std::string, std::vector<std::string>>& sweep_table() {
  static const std::map<std::string, std::vector<std::string>> table{
      {"parseval", {"N", "n"}},
      {"oft-tails", {"mu", "sigma_t", "T", "N"}},
      {"secular-bound", {"mu"}},
      {"fixed-point-scan", {"sigma_t", "T"}},
      {"davies-exactness", {"beta"}},
      {"mixing-time", {"beta"}},
      {"adb-scan", {"sigma_t"}},
      {"proxy-eigvec-scan", {"sigma_t"}},
      {"weak-measure-convergence", {"delta"}},
      {"block-encode-verify", {"N"}},
      {"discriminant-block-verify", {"N"}},
      {"anneal-path", {"k"}},
      {"discretization-convergence", {"N"}},
      {"bound-suite", {"sigma_t"}},
  };
  return table;
}

Complex parse_entry(const json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return {e[0].get<double>(), e[1].get<double>()};
  throw ConfigError("matrix entries must be numbers or [re, im] pairs");
}

Matrix parse_matrix(const json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Matrix m(rows, rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != rows) throw ConfigError("matrix must be square");
    for (Eigen::Index c = 0; c < rows; ++c) m(r, c) = parse_entry(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

std::vector<double> number_list(const json& j, const char* what) {
  if (j.is_number()) return {j.get<double>()};
  if (!j.is_array()) throw ConfigError(std::string(what) + " must be a number or a list of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ConfigError(std::string(what) + " must contain numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

HamiltonianSpec parse_hamiltonian(const json& h) {
  const std::string kind = h.value("kind", "pauli_z_chain");
  const int n = h.value("n", 1);
  const json params = h.value("params", json::object());
  if (kind == "pauli_z_chain") {
    PauliZChain chain;
    chain.n = n;
    if (params.contains("couplings")) chain.couplings = number_list(params["couplings"], "couplings");
    chain.fields = params.contains("fields") ? number_list(params["fields"], "fields") : std::vector<double>{1.0};
    return chain;
  }
  if (kind == "explicit") {
    if (!params.contains("matrix")) throw ConfigError("explicit Hamiltonian needs params.matrix");
    return ExplicitMatrix{parse_matrix(params["matrix"])};
  }
  if (kind == "random") return RandomHermitian{n, params.value("seed", std::uint64_t{0})};
  throw ConfigError("unknown Hamiltonian kind " + kind);
}

FilterSpec parse_filter(const json& f) {
  FilterSpec spec;
  const std::string kind = f.value("kind", "gaussian");
  if (kind == "gaussian")
    spec.kind = FilterKind::gaussian;
  else if (kind == "uniform")
    spec.kind = FilterKind::uniform;
  else
    throw ConfigError("unknown filter kind " + kind);
  spec.param = f.value("param", 1.0);
  return spec;
}

WeightKind parse_weight(const std::string& kind) {
  if (kind == "metropolis") return WeightKind::metropolis;
  if (kind == "glauber") return WeightKind::glauber;
  throw ConfigError("unknown weight kind " + kind);
}

Variant parse_variant(const std::string& v) {
  if (v == "discrete") return Variant::discrete;
  if (v == "davies") return Variant::davies;
  if (v == "continuous") return Variant::continuous;
  if (v == "two_sided") return Variant::two_sided;
  throw ConfigError("unknown variant " + v);
}

InstanceConfig parse_instance(const json& inst) {
  if (!inst.is_object()) throw ConfigError("instance section must be an object");
  InstanceConfig out;
  out.hamiltonian = parse_hamiltonian(inst.value("hamiltonian", json::object()));
  out.beta = inst.value("beta", 1.0);
  if (inst.contains("jumps")) {
    for (const auto& j : inst["jumps"]) {
      const double coeff = j.value("coeff", 1.0);
      if (j.contains("pauli"))
        out.jumps.push_back(coeff * pauli_string(j["pauli"].get<std::string>()));
      else if (j.contains("matrix"))
        out.jumps.push_back(coeff * parse_matrix(j["matrix"]));
      else
        throw ConfigError("jump entries need a pauli or matrix key");
    }
  }
  out.normalize_jumps = inst.value("normalize_jumps", true);
  out.filter = parse_filter(inst.value("filter", json::object()));
  out.weight = parse_weight(inst.value("weight", json::object()).value("kind", "metropolis"));
  out.variant = parse_variant(inst.value("variant", "discrete"));
  const json grid = inst.value("grid", json::object());
  out.n_points = grid.value("N", 64);
  if (grid.contains("omega0") && !grid["omega0"].is_null()) out.omega0 = grid["omega0"].get<double>();
  return out;
}

}  // namespace

double ExperimentConfig::tolerance(const std::string& key, double fallback) const {
  const auto it = tolerances.find(key);
  return it == tolerances.end() ? fallback : it->second;
}

const std::vector<std::string>& registered_experiments() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : sweep_table()) v.push_back(k);
    return v;
  }();
  return names;
}

const std::vector<std::string>& sweep_params(const std::string& experiment) {
  const auto it = sweep_table().find(experiment);
  if (it == sweep_table().end()) throw ConfigError("unknown experiment " + experiment);
  return it->second;
}

GibbsContext instance_context(const InstanceConfig& inst) {
  return make_context(build_hamiltonian(inst.hamiltonian), inst.beta);
}

JumpSet instance_jumps(const InstanceConfig& inst) {
  if (inst.jumps.empty()) throw InstanceError("instance has no jump operators");
  return inst.normalize_jumps ? normalized_jumps(inst.jumps) : JumpSet(inst.jumps);
}

LindbladSpec instance_spec(const InstanceConfig& inst) {
  return make_spec(instance_jumps(inst), instance_context(inst), inst.n_points, inst.filter, inst.weight,
                   inst.variant, inst.omega0);
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config does not parse: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be an object");
  ExperimentConfig cfg;
  try {
    if (!j.contains("experiment")) throw ConfigError("config has no experiment key");
    cfg.experiment = j["experiment"].get<std::string>();
    const auto& allowed = sweep_params(cfg.experiment);
    if (!j.contains("instance")) throw ConfigError("config has no instance section");
    cfg.instance = parse_instance(j["instance"]);
    if (j.contains("sweep")) {
      const json& s = j["sweep"];
      SweepConfig sw;
      sw.param = s.at("param").get<std::string>();
      sw.values = number_list(s.at("values"), "sweep values");
      if (std::find(allowed.begin(), allowed.end(), sw.param) == allowed.end())
        throw ConfigError("sweep parameter " + sw.param + " does not apply to " + cfg.experiment);
      if (sw.values.empty()) throw ConfigError("sweep has no values");
      cfg.sweep = std::move(sw);
    }
    if (j.contains("output")) {
      const json& o = j["output"];
      cfg.output_path = o.value("path", "");
      cfg.format = o.value("format", "csv");
    }
    if (cfg.format != "csv" && cfg.format != "json") throw ConfigError("format must be csv or json");
    cfg.seed = j.value("seed", std::uint64_t{1});
    if (j.contains("tolerances")) {
      for (const auto& [k, v] : j["tolerances"].items()) {
        if (!v.is_number()) throw ConfigError("tolerance " + k + " is not a number");
        cfg.tolerances[k] = v.get<double>();
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field has the wrong type: ") + e.what());
  }
  try {
    const GibbsContext ctx = instance_context(cfg.instance);
    const JumpSet jumps = instance_jumps(cfg.instance);
    if (jumps.dim() != ctx.dim()) throw InstanceError("jump and Hamiltonian dimensions differ");
    (void)make_grid(cfg.instance.n_points, ctx, cfg.instance.omega0);
  } catch (const InstanceError&) {
    throw;
  } catch (const Error& e) {
    throw InstanceError(e.what());
  }
  cfg.raw = j.dump();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace qgl
