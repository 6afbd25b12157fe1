#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qgl/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Runs thermal-state preparation experiments and writes CSV or JSON reports."};
  app.footer(qgl::experiments_help() +
             "\nExit codes: 0 success, 1 failing rows (listed on stderr), 2 config error, 3 instance error.\n"
             "QGL_THREADS bounds the number of sweep workers.");

  std::string experiment;
  std::string config_path;
  std::string out_path;
  std::string format;
  std::optional<std::uint64_t> seed;
  bool timing = false;

  app.add_option("experiment", experiment, "Experiment name")->required();
  app.add_option("--config", config_path, "JSON config file")->required();
  app.add_option("--out", out_path, "Report path (default: config output.path, else stdout)");
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", seed, "Seed override");
  app.add_flag("--timing", timing, "Fill runtime columns");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    qgl::ExperimentConfig cfg = qgl::load_config(config_path);
    if (cfg.experiment != experiment)
      throw qgl::ConfigError("config names experiment " + cfg.experiment + ", command line names " + experiment);
    if (!format.empty()) cfg.format = format;
    if (seed) cfg.seed = *seed;
    if (!out_path.empty()) cfg.output_path = out_path;

    const qgl::Report report = qgl::run_experiment(cfg, qgl::RunOptions{timing});
    const std::string body = cfg.format == "json" ? qgl::report_json(report, cfg) : qgl::report_csv(report);
    if (cfg.output_path.empty())
      std::cout << body;
    else
      qgl::write_atomic(cfg.output_path, body);

    if (!report.ok()) {
      std::cerr << "failing rows:\n";
      for (int i : report.failing) {
        const auto& row = report.rows[static_cast<std::size_t>(i)];
        std::cerr << "  " << i << ':';
        for (std::size_t c = 0; c < row.size(); ++c) std::cerr << (c ? "," : " ") << row[c];
        std::cerr << '\n';
      }
      return 1;
    }
    return 0;
  } catch (const qgl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const qgl::Error& e) {
    std::cerr << "instance error: " << e.what() << '\n';
    return 3;
  }
}
