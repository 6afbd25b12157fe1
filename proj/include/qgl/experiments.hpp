#pragma once

#include <string>
#include <vector>

#include "qgl/config.hpp"

namespace qgl {

struct Report {
  std::string experiment;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> failing;  // row indices
  bool ok() const noexcept { return failing.empty(); }
};

struct RunOptions {
  bool timing = false;  // fill runtime columns; off keeps reports reproducible
};

const std::vector<std::string>& experiment_columns(const std::string& experiment);
std::string experiments_help();

// Runs the named experiment; sweep points run on up to QGL_THREADS workers.
Report run_experiment(const ExperimentConfig& cfg, const RunOptions& opt = {});

std::string format_number(double x);  // %.10g
std::string report_csv(const Report& report, bool timestamp = true);
std::string report_json(const Report& report, const ExperimentConfig& cfg);

// Writes through a sibling temp file and renames it into place.
void write_atomic(const std::string& path, const std::string& content);

int worker_count();

}  // namespace qgl
