#include "qgl/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "qgl/circuits.hpp"

namespace qgl {

namespace {

using Row = std::vector<std::string>;

const std::map<std::string, std::vector<std::string>>& column_table() {
  static const std::map<std::string, std::vector<std::string>> table{
      {"parseval", {"n", "N", "jump_count", "residual", "sum_norm", "bound", "pass"}},
      {"oft-tails", {"filter", "param", "N", "omega0", "mu", "tail", "bound", "pass"}},
      {"secular-bound", {"mu", "diff_22", "diff_11_lb", "bound", "pass"}},
      {"fixed-point-scan", {"sigma_t", "beta", "N", "trace_distance", "t_mix_lb", "runtime_s"}},
      {"davies-exactness", {"beta", "trace_distance", "adb_norm", "pass"}},
      {"mixing-time", {"generator", "beta", "t_mix_lb", "bound_spectral", "bound_hermitian", "pass"}},
      {"adb-scan", {"sigma_t", "adb_norm", "lambda1_H", "pass"}},
      {"proxy-eigvec-scan", {"sigma_t", "distance", "epsilon", "gap", "bound", "pass"}},
      {"weak-measure-convergence", {"delta", "steps", "step_error", "evolution_error", "slope", "pass"}},
      {"block-encode-verify", {"n", "N", "residual", "reject_residual", "pass"}},
      {"discriminant-block-verify", {"n", "N", "residual", "hermiticity", "pass"}},
      {"anneal-path", {"j", "beta_j", "gap", "overlap", "ideal_overlap", "eigvec_dist", "pass"}},
      {"discretization-convergence", {"N", "omega0", "distance", "pass"}},
      {"bound-suite", {"name", "lhs", "rhs", "pass", "informational"}},
  };
  return table;
}

std::string flag(bool b) { return b ? "1" : "0"; }

// Runs fn(i) for i in [0, count) on a bounded pool; results keep index order.
template <class T>
std::vector<T> parallel_map(int count, const std::function<T(int)>& fn) {
  std::vector<T> out(static_cast<std::size_t>(count));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        out[static_cast<std::size_t>(i)] = fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  const int threads = std::min(worker_count(), count);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::vector<double> sweep_values(const ExperimentConfig& cfg, const std::string& param, std::vector<double> fallback) {
  if (cfg.sweep && cfg.sweep->param == param) return cfg.sweep->values;
  return fallback;
}

InstanceConfig with_param(InstanceConfig inst, const std::string& param, double value) {
  if (param == "sigma_t" || param == "T") {
    inst.filter.param = value;
  } else if (param == "N") {
    inst.n_points = static_cast<int>(std::lround(value));
    inst.omega0.reset();
  } else if (param == "beta") {
    inst.beta = value;
  } else if (param == "n") {
    // Chain with unit couplings and fields, one X jump per site.
    const int n = static_cast<int>(std::lround(value));
    PauliZChain chain{n, std::vector<double>(static_cast<std::size_t>(std::max(n - 1, 0)), 1.0),
                      std::vector<double>(static_cast<std::size_t>(n), 1.0)};
    inst.hamiltonian = chain;
    inst.jumps.clear();
    for (int i = 0; i < n; ++i) {
      std::string labels(static_cast<std::size_t>(n), 'I');
      labels[static_cast<std::size_t>(i)] = 'X';
      inst.jumps.push_back(pauli_string(labels));
    }
    inst.normalize_jumps = true;
  }
  return inst;
}

// Row i fails unless value[i] < value[i-1].
void require_decreasing(const std::vector<double>& values, std::vector<int>& failing) {
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] < values[i - 1])) failing.push_back(static_cast<int>(i));
}

Matrix ground_projector(int dim) {
  Matrix rho = Matrix::Zero(dim, dim);
  rho(0, 0) = 1.0;
  return rho;
}

MixingOptions mixing_options(const ExperimentConfig& cfg) {
  MixingOptions opt;
  opt.seed = cfg.seed;
  opt.samples = static_cast<int>(cfg.tolerance("mixing_samples", opt.samples));
  return opt;
}

// ---------------------------------------------------------------------------

void run_parseval(const ExperimentConfig& cfg, Report& rep) {
  std::vector<std::pair<std::string, double>> points;
  if (cfg.sweep)
    for (double v : cfg.sweep->values) points.emplace_back(cfg.sweep->param, v);
  else
    points.emplace_back("", 0.0);
  const double tol = cfg.tolerance("parseval", 1e-10);
  struct Out {
    Row row;
    bool pass = false;
  };
  auto outs = parallel_map<Out>(static_cast<int>(points.size()), [&](int i) {
    const auto& [param, value] = points[static_cast<std::size_t>(i)];
    const InstanceConfig inst = param.empty() ? cfg.instance : with_param(cfg.instance, param, value);
    const LindbladSpec spec = instance_spec(inst);
    const OftFamily family = oft_discrete(spec.jumps, spec.filter, spec.grid, spec.context);
    const ParsevalReport r = parseval_report(family, spec.context);
    const bool pass = r.pass && r.residual_identity < tol;
    return Out{{std::to_string(spec.context.qubits()), std::to_string(spec.grid.size()),
                std::to_string(spec.jumps.size()), format_number(r.residual_identity), format_number(r.sum_norm),
                format_number(r.bound), flag(pass)},
               pass};
  });
  for (std::size_t i = 0; i < outs.size(); ++i) {
    rep.rows.push_back(outs[i].row);
    if (!outs[i].pass) rep.failing.push_back(static_cast<int>(i));
  }
}

void run_oft_tails(const ExperimentConfig& cfg, Report& rep) {
  std::vector<std::pair<InstanceConfig, double>> points;
  if (cfg.sweep && cfg.sweep->param != "mu") {
    for (double v : cfg.sweep->values) points.emplace_back(with_param(cfg.instance, cfg.sweep->param, v), 0.4);
  } else {
    for (double mu : sweep_values(cfg, "mu", {0.2, 0.4, 0.8})) points.emplace_back(cfg.instance, mu);
  }
  struct Out {
    Row row;
    bool pass = false;
  };
  auto outs = parallel_map<Out>(static_cast<int>(points.size()), [&](int i) {
    const auto& [inst, mu] = points[static_cast<std::size_t>(i)];
    const GibbsContext ctx = instance_context(inst);
    const SpectralGrid grid = make_grid(inst.n_points, ctx, inst.omega0);
    const FilterFunction filter = make_filter(inst.filter, grid);
    const DiagnosticRecord rec = tail_check(filter, grid, mu);
    const std::string kind = inst.filter.kind == FilterKind::uniform ? "uniform" : "gaussian";
    return Out{{kind, format_number(inst.filter.param), std::to_string(grid.size()), format_number(grid.omega0()),
                format_number(mu), format_number(rec.measured), format_number(rec.bound), flag(rec.pass)},
               rec.pass};
  });
  for (std::size_t i = 0; i < outs.size(); ++i) {
    rep.rows.push_back(outs[i].row);
    if (!outs[i].pass) rep.failing.push_back(static_cast<int>(i));
  }
}

void run_secular_bound(const ExperimentConfig& cfg, Report& rep) {
  const std::vector<double> mus = sweep_values(cfg, "mu", {0.2, 0.4, 0.8});
  const LindbladSpec spec = instance_spec(cfg.instance);
  auto outs = parallel_map<SecularBoundReport>(static_cast<int>(mus.size()), [&](int i) {
    return secular_bound(spec, mus[static_cast<std::size_t>(i)], cfg.seed);
  });
  for (std::size_t i = 0; i < outs.size(); ++i) {
    const auto& r = outs[i];
    rep.rows.push_back({format_number(r.mu), format_number(r.diff_22), format_number(r.diff_11_lb),
                        format_number(r.bound), flag(r.pass)});
    if (!r.pass) rep.failing.push_back(static_cast<int>(i));
  }
}

void run_fixed_point_scan(const ExperimentConfig& cfg, const RunOptions& opt, Report& rep) {
  const std::string param = cfg.sweep ? cfg.sweep->param : "sigma_t";
  const std::vector<double> values = sweep_values(cfg, param, {cfg.instance.filter.param});
  if (param == "T") rep.columns.front() = "T";
  const MixingOptions mopt = mixing_options(cfg);
  struct Out {
    double distance = 0.0;
    Row row;
  };
  auto outs = parallel_map<Out>(static_cast<int>(values.size()), [&](int i) {
    const double value = values[static_cast<std::size_t>(i)];
    const auto start = std::chrono::steady_clock::now();
    const LindbladSpec spec = instance_spec(with_param(cfg.instance, param, value));
    const Superoperator generator = param == "T"
                                        ? build_cgme_dissipative(spec.jumps, spec.weight, value, spec.context)
                                        : build_lindbladian(spec);
    const double distance = trace_distance(fixed_point(generator), spec.context.rho());
    std::string t_mix;
    try {
      t_mix = format_number(mixing_time(generator, mopt).t_mix);
    } catch (const NotMixed&) {
    }
    const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return Out{distance,
               {format_number(value), format_number(spec.context.beta()), std::to_string(spec.grid.size()),
                format_number(distance), t_mix, opt.timing ? format_number(runtime) : std::string{}}};
  });
  std::vector<double> distances;
  for (auto& o : outs) {
    distances.push_back(o.distance);
    rep.rows.push_back(std::move(o.row));
  }
  require_decreasing(distances, rep.failing);
}

void run_davies_exactness(const ExperimentConfig& cfg, Report& rep) {
  const std::vector<double> betas = sweep_values(cfg, "beta", {cfg.instance.beta});
  const double tol = cfg.tolerance("davies", 1e-10);
  struct Out {
    Row row;
    bool pass = false;
  };
  auto outs = parallel_map<Out>(static_cast<int>(betas.size()), [&](int i) {
    InstanceConfig inst = cfg.instance;
    inst.beta = betas[static_cast<std::size_t>(i)];
    const LindbladSpec spec = instance_spec(inst);
    const Superoperator davies = build_davies(spec.jumps, weight_fn(spec.weight), spec.context);
    const double distance = trace_distance(fixed_point(davies), spec.context.rho());
    const double adb = adb_norm(davies, spec.context);
    const bool pass = distance < tol;
    return Out{{format_number(inst.beta), format_number(distance), format_number(adb), flag(pass)}, pass};
  });
  for (std::size_t i = 0; i < outs.size(); ++i) {
    rep.rows.push_back(outs[i].row);
    if (!outs[i].pass) rep.failing.push_back(static_cast<int>(i));
  }
}

void run_mixing_time(const ExperimentConfig& cfg, Report& rep) {
  struct Case {
    std::string name;
    Superoperator generator;
    GibbsContext ctx;
    double beta = 0.0;
  };
  std::vector<Case> cases;
  for (double beta : sweep_values(cfg, "beta", {cfg.instance.beta})) {
    const LindbladSpec spec = instance_spec(with_param(cfg.instance, "beta", beta));
    const int n = spec.context.qubits();
    Superoperator depolarizing(spec.context.dim());
    for (int site = 0; site < n; ++site) {
      for (char p : {'X', 'Y', 'Z'}) {
        std::string labels(static_cast<std::size_t>(n), 'I');
        labels[static_cast<std::size_t>(site)] = p;
        depolarizing.add_dissipator(1.0 / 3.0, pauli_string(labels));
      }
    }
    cases.push_back({"davies", build_davies(spec.jumps, weight_fn(spec.weight), spec.context), spec.context, beta});
    cases.push_back({"discrete", build_lindbladian(spec), spec.context, beta});
    // detailed balanced against the maximally mixed state
    cases.push_back({"depolarizing", std::move(depolarizing), make_context(spec.context.hamiltonian(), 0.0), 0.0});
  }

  const MixingOptions mopt = mixing_options(cfg);
  const double db_tol = cfg.tolerance("detailed_balance", 1e-9);
  struct Out {
    Row row;
    bool pass = false;
  };
  auto outs = parallel_map<Out>(static_cast<int>(cases.size()), [&](int i) {
    const Case& c = cases[static_cast<std::size_t>(i)];
    MixingReport report;
    try {
      report = mixing_time(c.generator, c.ctx, mopt);
    } catch (const NotMixed&) {
      return Out{{c.name, format_number(c.beta), "inf", "", "", flag(false)}, false};
    }
    const GapData gaps = report.gaps ? *report.gaps : gap_data(c.generator, c.ctx);
    const double inv_sqrt = operator_norm(c.ctx.rho_power(-0.5));
    const double spectral = std::log(2.0 * inv_sqrt) / gaps.gap;
    const bool exact_db = gaps.adb_norm <= db_tol;
    const bool hermitian_applies = std::abs(gaps.lambda1) <= gaps.gap / 100.0;
    const double hermitian = 3.0 * std::log(3.0 * inv_sqrt) / gaps.gap;
    bool pass = true;
    if (exact_db) pass = pass && bound_holds(report.t_mix, spectral);
    if (hermitian_applies) pass = pass && bound_holds(report.t_mix, hermitian);
    return Out{{c.name, format_number(c.beta), format_number(report.t_mix), format_number(spectral),
                hermitian_applies ? format_number(hermitian) : std::string{}, flag(pass)},
               pass};
  });
  for (std::size_t i = 0; i < outs.size(); ++i) {
    rep.rows.push_back(outs[i].row);
    if (!outs[i].pass) rep.failing.push_back(static_cast<int>(i));
  }
}

void run_adb_scan(const ExperimentConfig& cfg, Report& rep) {
  const std::vector<double> values = sweep_values(cfg, "sigma_t", {cfg.instance.filter.param});
  struct Out {
    double adb = 0.0;
    Row row;
    bool pass = false;
  };
  auto outs = parallel_map<Out>(static_cast<int>(values.size()), [&](int i) {
    const double s = values[static_cast<std::size_t>(i)];
    const LindbladSpec spec = instance_spec(with_param(cfg.instance, "sigma_t", s));
    const DiscriminantReport r = analyze_discriminant(build_lindbladian(spec), spec.context);
    const bool pass = bound_holds(std::abs(r.lambda1), r.adb_norm);
    return Out{r.adb_norm, {format_number(s), format_number(r.adb_norm), format_number(r.lambda1), flag(pass)}, pass};
  });
  std::vector<double> adb;
  for (std::size_t i = 0; i < outs.size(); ++i) {
    adb.push_back(outs[i].adb);
    rep.rows.push_back(outs[i].row);
    if (!outs[i].pass) rep.failing.push_back(static_cast<int>(i));
  }
  require_decreasing(adb, rep.failing);
}

void run_proxy_eigvec_scan(const ExperimentConfig& cfg, Report& rep) {
  const std::vector<double> values = sweep_values(cfg, "sigma_t", {cfg.instance.filter.param});
  struct Out {
    double distance = 0.0;
    Row row;
    bool pass = false;
  };
  auto outs = parallel_map<Out>(static_cast<int>(values.size()), [&](int i) {
    const double s = values[static_cast<std::size_t>(i)];
    const LindbladSpec spec = instance_spec(with_param(cfg.instance, "sigma_t", s));
    const Matrix proxy = build_proxy(spec);
    const EigvecComparison c = top_eigvec_compare(proxy, spec.context);
    const double eps = proxy_defect(proxy, build_lindbladian(spec), spec.context);
    const double bound = 4.0 * std::sqrt(2.0) * eps / c.gap;
    const bool pass = bound_holds(c.distance, bound);
    return Out{c.distance,
               {format_number(s), format_number(c.distance), format_number(eps), format_number(c.gap),
                format_number(bound), flag(pass)},
               pass};
  });
  std::vector<double> distances;
  for (std::size_t i = 0; i < outs.size(); ++i) {
    distances.push_back(outs[i].distance);
    rep.rows.push_back(outs[i].row);
    if (!outs[i].pass) rep.failing.push_back(static_cast<int>(i));
  }
  require_decreasing(distances, rep.failing);
}

void run_weak_measure(const ExperimentConfig& cfg, Report& rep) {
  const std::vector<double> deltas = sweep_values(cfg, "delta", {0.1, 0.05, 0.025, 0.0125});
  const LindbladSpec spec = instance_spec(cfg.instance);
  const BlockEncoding enc = build_block_encoding(spec).encoding();
  const Superoperator generator = build_lindbladian(spec);
  const Matrix rho0 = ground_projector(spec.context.dim());
  const double horizon = cfg.tolerance("horizon", 1.0);
  const double slope_target = cfg.tolerance("slope", 2.0);
  const double slope_tol = cfg.tolerance("slope_tol", 0.3);
  const double evolution_tol = cfg.tolerance("evolution", 0.05);
  struct Out {
    int steps = 0;
    double step_error = 0.0;
    double evolution_error = 0.0;
  };
  auto outs = parallel_map<Out>(static_cast<int>(deltas.size()), [&](int i) {
    const double delta = deltas[static_cast<std::size_t>(i)];
    const int steps = std::max(1, static_cast<int>(std::lround(horizon / delta)));
    const double step_error = trace_distance(weak_measure_step(enc, delta, rho0), evolve(generator, rho0, delta));
    const double evolution_error = trace_distance(weak_measure_evolve(enc, delta, rho0, steps),
                                                  evolve(generator, rho0, steps * delta));
    return Out{steps, step_error, evolution_error};
  });
  for (std::size_t i = 0; i < outs.size(); ++i) {
    std::string slope;
    bool pass = outs[i].evolution_error < evolution_tol;
    if (i > 0) {
      const double s = std::log(outs[i].step_error / outs[i - 1].step_error) / std::log(deltas[i] / deltas[i - 1]);
      slope = format_number(s);
      pass = pass && std::abs(s - slope_target) <= slope_tol;
    }
    rep.rows.push_back({format_number(deltas[i]), std::to_string(outs[i].steps), format_number(outs[i].step_error),
                        format_number(outs[i].evolution_error), slope, flag(pass)});
    if (!pass) rep.failing.push_back(static_cast<int>(i));
  }
}

void run_block_encode(const ExperimentConfig& cfg, Report& rep, bool discriminant) {
  const std::vector<double> values = sweep_values(cfg, "N", {static_cast<double>(cfg.instance.n_points)});
  const double tol = cfg.tolerance("residual", 1e-9);
  const double tight = cfg.tolerance("reject", 1e-10);
  struct Out {
    Row row;
    bool pass = false;
  };
  auto outs = parallel_map<Out>(static_cast<int>(values.size()), [&](int i) {
    const LindbladSpec spec = instance_spec(with_param(cfg.instance, "N", values[static_cast<std::size_t>(i)]));
    const BlockEncodingCircuit circuit = build_block_encoding(spec);
    const std::string n = std::to_string(spec.context.qubits());
    const std::string big_n = std::to_string(spec.grid.size());
    if (discriminant) {
      const GateProgram program = build_discriminant_block(circuit, spec);
      const double residual = discriminant_block_residual(program, spec);
      const Matrix block = discriminant_block(program, spec.context.dim());
      const double herm = operator_norm(block - block.adjoint());
      const bool pass = residual < tol && herm < tight && program.unitarity_residual() < tight;
      return Out{{n, big_n, format_number(residual), format_number(herm), flag(pass)}, pass};
    }
    const double residual = block_encoding_residual(circuit, spec);
    const OftFamily family = oft_discrete(spec.jumps, spec.filter, spec.grid, spec.context);
    const double reject =
        operator_norm(reject_block(circuit.encoding()) - family.sum_adag_a(&spec.weight.table()));
    const bool pass = residual < tol && reject < tight && circuit.program.unitarity_residual() < tight;
    return Out{{n, big_n, format_number(residual), format_number(reject), flag(pass)}, pass};
  });
  for (std::size_t i = 0; i < outs.size(); ++i) {
    rep.rows.push_back(outs[i].row);
    if (!outs[i].pass) rep.failing.push_back(static_cast<int>(i));
  }
}

void run_anneal(const ExperimentConfig& cfg, Report& rep) {
  const LindbladSpec spec = instance_spec(cfg.instance);
  const int default_k =
      std::max(1, static_cast<int>(std::ceil(2.0 * spec.context.beta() * spec.context.hamiltonian_norm() - 1e-12)));
  const std::vector<double> ks = sweep_values(cfg, "k", {static_cast<double>(default_k)});
  const double floor = cfg.tolerance("overlap", 0.6);
  auto outs = parallel_map<std::vector<AnnealPoint>>(static_cast<int>(ks.size()), [&](int i) {
    return anneal_path(spec, static_cast<int>(std::lround(ks[static_cast<std::size_t>(i)])), floor);
  });
  for (const auto& path : outs) {
    for (const AnnealPoint& p : path) {
      const bool last = &p == &path.back();
      rep.rows.push_back({std::to_string(p.j), format_number(p.beta), format_number(p.gap),
                          last ? std::string{} : format_number(p.overlap),
                          last ? std::string{} : format_number(p.ideal_overlap), format_number(p.eigvec_dist),
                          flag(p.pass)});
      if (!p.pass) rep.failing.push_back(static_cast<int>(rep.rows.size()) - 1);
    }
  }
}

void run_discretization(const ExperimentConfig& cfg, Report& rep) {
  const std::vector<double> values = sweep_values(cfg, "N", {32, 64, 128, 256});
  const LindbladSpec base = instance_spec(cfg.instance);
  const Superoperator continuous =
      build_continuous(base.jumps, continuous_filter(cfg.instance.filter), base.weight, base.context);
  struct Out {
    double distance = 0.0;
    double omega0 = 0.0;
    int n_points = 0;
  };
  auto outs = parallel_map<Out>(static_cast<int>(values.size()), [&](int i) {
    const LindbladSpec spec = instance_spec(with_param(cfg.instance, "N", values[static_cast<std::size_t>(i)]));
    return Out{superop_norm_22(build_lindbladian(spec) - continuous), spec.grid.omega0(), spec.grid.size()};
  });
  std::vector<double> distances;
  for (const auto& o : outs) distances.push_back(o.distance);
  // Below the floor both generators agree to rounding and the sequence counts as settled.
  const double floor = cfg.tolerance("distance_floor", 1e-14);
  std::vector<int> failing;
  for (std::size_t i = 1; i < distances.size(); ++i)
    if (!(distances[i] < distances[i - 1] || std::max(distances[i], distances[i - 1]) <= floor))
      failing.push_back(static_cast<int>(i));
  for (std::size_t i = 0; i < outs.size(); ++i) {
    const bool pass = std::find(failing.begin(), failing.end(), static_cast<int>(i)) == failing.end();
    rep.rows.push_back({std::to_string(outs[i].n_points), format_number(outs[i].omega0),
                        format_number(outs[i].distance), flag(pass)});
  }
  rep.failing = std::move(failing);
}

void run_bound_suite(const ExperimentConfig& cfg, Report& rep) {
  const std::vector<double> values = sweep_values(cfg, "sigma_t", {cfg.instance.filter.param});
  const double mu = cfg.tolerance("mu", 0.4);
  const MixingOptions mopt = mixing_options(cfg);
  auto outs = parallel_map<std::vector<BoundEntry>>(static_cast<int>(values.size()), [&](int i) {
    const LindbladSpec spec = instance_spec(with_param(cfg.instance, "sigma_t", values[static_cast<std::size_t>(i)]));
    const Superoperator generator = build_lindbladian(spec);
    std::optional<Superoperator> secular;
    if (spec.variant == Variant::discrete) {
      try {
        secular = build_secular(spec, mu);
      } catch (const Error&) {
      }
    }
    return bound_suite(generator, spec.context, secular ? &*secular : nullptr, mopt);
  });
  for (const auto& suite : outs) {
    for (const BoundEntry& e : suite) {
      rep.rows.push_back({e.name, e.skipped ? std::string{} : format_number(e.lhs),
                          e.skipped ? std::string{} : format_number(e.rhs), e.skipped ? "skip" : flag(e.pass),
                          flag(e.informational)});
      if (!e.skipped && !e.informational && !e.pass) rep.failing.push_back(static_cast<int>(rep.rows.size()) - 1);
    }
  }
}

}  // namespace

int worker_count() {
  if (const char* env = std::getenv("QGL_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

const std::vector<std::string>& experiment_columns(const std::string& experiment) {
  const auto it = column_table().find(experiment);
  if (it == column_table().end()) throw ConfigError("unknown experiment " + experiment);
  return it->second;
}

std::string experiments_help() {
  std::ostringstream out;
  out << "Experiments and CSV columns:\n";
  for (const auto& name : registered_experiments()) {
    out << "  " << name << ": ";
    const auto& cols = experiment_columns(name);
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    const auto& params = sweep_params(name);
    out << "  [sweep:";
    for (const auto& p : params) out << ' ' << p;
    out << "]\n";
  }
  out << "fixed-point-scan names its first column T for a T sweep (uniform window generator).\n";
  return out.str();
}

Report run_experiment(const ExperimentConfig& cfg, const RunOptions& opt) {
  Report rep;
  rep.experiment = cfg.experiment;
  rep.columns = experiment_columns(cfg.experiment);
  const std::string& e = cfg.experiment;
  if (e == "parseval")
    run_parseval(cfg, rep);
  else if (e == "oft-tails")
    run_oft_tails(cfg, rep);
  else if (e == "secular-bound")
    run_secular_bound(cfg, rep);
  else if (e == "fixed-point-scan")
    run_fixed_point_scan(cfg, opt, rep);
  else if (e == "davies-exactness")
    run_davies_exactness(cfg, rep);
  else if (e == "mixing-time")
    run_mixing_time(cfg, rep);
  else if (e == "adb-scan")
    run_adb_scan(cfg, rep);
  else if (e == "proxy-eigvec-scan")
    run_proxy_eigvec_scan(cfg, rep);
  else if (e == "weak-measure-convergence")
    run_weak_measure(cfg, rep);
  else if (e == "block-encode-verify")
    run_block_encode(cfg, rep, false);
  else if (e == "discriminant-block-verify")
    run_block_encode(cfg, rep, true);
  else if (e == "anneal-path")
    run_anneal(cfg, rep);
  else if (e == "discretization-convergence")
    run_discretization(cfg, rep);
  else if (e == "bound-suite")
    run_bound_suite(cfg, rep);
  else
    throw ConfigError("unknown experiment " + e);
  std::sort(rep.failing.begin(), rep.failing.end());
  rep.failing.erase(std::unique(rep.failing.begin(), rep.failing.end()), rep.failing.end());
  return rep;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x == 0.0 ? 0.0 : x);
  return buf;
}

std::string report_csv(const Report& report, bool timestamp) {
  std::ostringstream out;
  if (timestamp) {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    out << "# generated " << buf << '\n';
  }
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(report.columns);
  for (const auto& row : report.rows) line(row);
  return out.str();
}

std::string report_json(const Report& report, const ExperimentConfig& cfg) {
  using nlohmann::json;
  json rows = json::array();
  for (const auto& row : report.rows) {
    json obj = json::object();
    for (std::size_t i = 0; i < report.columns.size() && i < row.size(); ++i) {
      const std::string& cell = row[i];
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (!cell.empty() && end == cell.c_str() + cell.size() && std::isfinite(v))
        obj[report.columns[i]] = v;
      else if (cell.empty())
        obj[report.columns[i]] = nullptr;
      else
        obj[report.columns[i]] = cell;
    }
    rows.push_back(std::move(obj));
  }
  json out{{"experiment", report.experiment},
           {"columns", report.columns},
           {"rows", std::move(rows)},
           {"failing_rows", report.failing},
           {"config", cfg.raw.empty() ? json::object() : json::parse(cfg.raw)}};
  return out.dump(2) + "\n";
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot move report into " + path + ": " + ec.message());
  }
}

}  // namespace qgl
