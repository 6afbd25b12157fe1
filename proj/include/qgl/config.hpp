#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qgl/generator.hpp"

namespace qgl {

struct InstanceConfig {
  HamiltonianSpec hamiltonian;
  double beta = 1.0;
  std::vector<Matrix> jumps;
  bool normalize_jumps = true;
  FilterSpec filter;
  WeightKind weight = WeightKind::metropolis;
  Variant variant = Variant::discrete;
  int n_points = 64;
  std::optional<double> omega0;
};

struct SweepConfig {
  std::string param;
  std::vector<double> values;
};

struct ExperimentConfig {
  std::string experiment;
  InstanceConfig instance;
  std::optional<SweepConfig> sweep;
  std::string output_path;
  std::string format = "csv";
  std::uint64_t seed = 1;
  std::map<std::string, double> tolerances;
  std::string raw;  // normalized JSON echo of the input

  double tolerance(const std::string& key, double fallback) const;
};

const std::vector<std::string>& registered_experiments();
// Sweep parameters each experiment accepts.
const std::vector<std::string>& sweep_params(const std::string& experiment);

// Throws ConfigError on malformed input and InstanceError on an invalid instance.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Context, jump set and spec built from the instance section.
GibbsContext instance_context(const InstanceConfig& inst);
JumpSet instance_jumps(const InstanceConfig& inst);
LindbladSpec instance_spec(const InstanceConfig& inst);

}  // namespace qgl
