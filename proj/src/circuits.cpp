#include "qgl/circuits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <json.hpp>

namespace qgl {

namespace {

constexpr double kUnitaryTol = 1e-10;

int log2_exact(std::int64_t n, const char* what) {
  if (!is_power_of_two(n)) throw DimensionMismatch(std::string(what) + " must be a power of two");
  int q = 0;
  while ((std::int64_t{1} << q) < n) ++q;
  return q;
}

int next_power_of_two(int n) {
  int p = 1;
  while (p < n) p *= 2;
  return p;
}

Matrix projector_zero(int dim) {
  Matrix p = Matrix::Zero(dim, dim);
  p(0, 0) = 1.0;
  return p;
}

double unitarity(const Matrix& u) { return operator_norm(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())); }

}  // namespace

Register::Register(std::vector<Segment> segments) : segments_(std::move(segments)) {
  for (const auto& s : segments_) {
    if (s.qubits < 0) throw DimensionMismatch("segment " + s.name + " has negative width");
    total_ += s.qubits;
  }
  if (total_ > kMaxCircuitQubits)
    throw TooLarge("register needs " + std::to_string(total_) + " qubits, limit is " + std::to_string(kMaxCircuitQubits));
}

int Register::offset(const std::string& name) const {
  int acc = 0;
  for (const auto& s : segments_) {
    if (s.name == name) return acc;
    acc += s.qubits;
  }
  throw DimensionMismatch("unknown register segment " + name);
}

int Register::width(const std::string& name) const {
  for (const auto& s : segments_)
    if (s.name == name) return s.qubits;
  throw DimensionMismatch("unknown register segment " + name);
}

bool Register::has(const std::string& name) const noexcept {
  return std::any_of(segments_.begin(), segments_.end(), [&](const Segment& s) { return s.name == name; });
}

std::vector<int> Register::qubits_of(std::span<const std::string> names) const {
  std::vector<int> out;
  for (const auto& n : names) {
    const int off = offset(n);
    for (int q = 0; q < width(n); ++q) out.push_back(off + q);
  }
  return out;
}

Matrix embed_operator(const Matrix& op, std::span<const int> qubits, int total_qubits) {
  const auto k = static_cast<int>(qubits.size());
  if (op.rows() != (Eigen::Index{1} << k) || op.cols() != op.rows())
    throw DimensionMismatch("operator size does not match the target qubits");
  const std::int64_t dim = std::int64_t{1} << total_qubits;
  std::vector<int> shifts(static_cast<std::size_t>(k));
  std::int64_t mask = 0;
  for (int i = 0; i < k; ++i) {
    const int q = qubits[static_cast<std::size_t>(i)];
    if (q < 0 || q >= total_qubits) throw DimensionMismatch("target qubit out of range");
    shifts[static_cast<std::size_t>(i)] = total_qubits - 1 - q;
    mask |= std::int64_t{1} << shifts[static_cast<std::size_t>(i)];
  }
  auto deposit = [&](std::int64_t t) {
    std::int64_t y = 0;
    for (int i = 0; i < k; ++i)
      if ((t >> (k - 1 - i)) & 1) y |= std::int64_t{1} << shifts[static_cast<std::size_t>(i)];
    return y;
  };
  std::vector<std::int64_t> spread(std::size_t{1} << k);
  for (std::size_t t = 0; t < spread.size(); ++t) spread[t] = deposit(static_cast<std::int64_t>(t));

  Matrix out = Matrix::Zero(dim, dim);
  for (std::int64_t x = 0; x < dim; ++x) {
    std::int64_t tx = 0;
    for (int i = 0; i < k; ++i) tx = (tx << 1) | ((x >> shifts[static_cast<std::size_t>(i)]) & 1);
    const std::int64_t base = x & ~mask;
    for (std::size_t ty = 0; ty < spread.size(); ++ty) out(x, base | spread[ty]) = op(tx, static_cast<Eigen::Index>(ty));
  }
  return out;
}

GateProgram::GateProgram(Register reg) : reg_(std::move(reg)) {}

void GateProgram::append(std::string name, std::vector<std::string> targets, Matrix unitary, std::string params) {
  gates_.push_back({std::move(name), std::move(targets), std::move(unitary), std::move(params)});
  cached_ = false;
}

const Matrix& GateProgram::composite() const {
  if (!cached_) {
    cache_ = Matrix::Identity(reg_.dim(), reg_.dim());
    for (const auto& g : gates_) {
      const std::vector<int> qubits = reg_.qubits_of(g.targets);
      if (static_cast<int>(qubits.size()) == reg_.total_qubits() &&
          std::is_sorted(qubits.begin(), qubits.end()))
        cache_ = g.unitary * cache_;
      else
        cache_ = embed_operator(g.unitary, qubits, reg_.total_qubits()) * cache_;
    }
    cached_ = true;
  }
  return cache_;
}

double GateProgram::unitarity_residual() const { return unitarity(composite()); }

std::string GateProgram::to_json() const {
  nlohmann::json j;
  j["register"] = nlohmann::json::array();
  for (const auto& s : reg_.segments()) j["register"].push_back({{"name", s.name}, {"qubits", s.qubits}});
  j["gates"] = nlohmann::json::array();
  for (const auto& g : gates_)
    j["gates"].push_back({{"gate_name", g.name}, {"params", nlohmann::json::parse(g.params)}, {"targets", g.targets}});
  return j.dump(2);
}

Matrix y_rotation(double theta) {
  if (theta < -1e-15 || theta > 1.0 + 1e-15) throw PreconditionFailed("rotation parameter outside [0, 1]");
  const double s = std::sqrt(std::clamp(theta, 0.0, 1.0));
  const double c = std::sqrt(std::clamp(1.0 - theta, 0.0, 1.0));
  Matrix y(2, 2);
  y << c, -s, s, c;
  return y;
}

Matrix build_prep(const Vector& amplitudes) {
  const double n = amplitudes.norm();
  if (n < 1e-14) throw NonUnitaryCompletion("preparation column is zero");
  return complete_to_unitary(amplitudes / n);
}

Matrix build_prep(const FilterFunction& filter) { return build_prep(filter.values()); }

Matrix build_qft(int n_points) {
  const SpectralGrid grid(n_points, 1.0);
  Matrix q(n_points, n_points);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_points));
  for (int w = 0; w < n_points; ++w)
    for (int t = 0; t < n_points; ++t) {
      const double phase = -2.0 * std::numbers::pi * grid.label(w) * grid.label(t) / n_points;
      q(w, t) = scale * std::polar(1.0, phase);
    }
  return q;
}

Matrix build_weight_rot(std::span<const double> weights) {
  const auto n = static_cast<Eigen::Index>(weights.size());
  Matrix out = Matrix::Zero(2 * n, 2 * n);
  for (Eigen::Index w = 0; w < n; ++w) {
    const Matrix y = y_rotation(1.0 - weights[static_cast<std::size_t>(w)]);
    for (int b1 = 0; b1 < 2; ++b1)
      for (int b2 = 0; b2 < 2; ++b2) out(b1 * n + w, b2 * n + w) = y(b1, b2);
  }
  return out;
}

Matrix build_ctrl_ham(const GibbsContext& ctx, const SpectralGrid& grid, int sign) {
  const int d = ctx.dim();
  const int n = grid.size();
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(n) * d, static_cast<Eigen::Index>(n) * d);
  for (int k = 0; k < n; ++k) {
    const double t = grid.time(k);
    Vector phases(d);
    for (int i = 0; i < d; ++i) phases(i) = std::polar(1.0, sign * ctx.energies()(i) * t);
    out.block(static_cast<Eigen::Index>(k) * d, static_cast<Eigen::Index>(k) * d, d, d) =
        ctx.basis() * phases.asDiagonal() * ctx.basis().adjoint();
  }
  return out;
}

Matrix BlockEncoding::block() const {
  const Eigen::Index rows = (Eigen::Index{1} << (ancilla_qubits - flag_qubits)) * system_dim;
  return unitary.topLeftCorner(rows, system_dim);
}

std::vector<Matrix> BlockEncoding::lindblad_ops() const {
  const Matrix b = block();
  std::vector<Matrix> out;
  for (Eigen::Index r = 0; r < b.rows(); r += system_dim) out.push_back(b.block(r, 0, system_dim, system_dim));
  return out;
}

BlockEncoding BlockEncodingCircuit::encoding() const {
  const Register& reg = program.reg();
  BlockEncoding enc;
  enc.unitary = program.composite();
  enc.system_dim = 1 << reg.width("system");
  enc.ancilla_qubits = reg.total_qubits() - reg.width("system");
  enc.flag_qubits = 1;
  return enc;
}

BlockEncodingCircuit build_block_encoding(const LindbladSpec& spec) {
  const auto& grid = spec.grid;
  const auto& ctx = spec.context;
  const int freq_q = log2_exact(grid.size(), "grid size");
  const int jumps = spec.jumps.size();
  const double root = std::sqrt(static_cast<double>(jumps));
  for (int a = 0; a < jumps; ++a)
    if (unitarity(root * spec.jumps[a]) > kUnitaryTol)
      throw NonUnitaryJumps("sqrt(|A|) A^" + std::to_string(a) + " is not unitary");
  for (double g : spec.weight.table())
    if (g < -1e-15 || g > 1.0 + 1e-12) throw PreconditionFailed("transition weight outside [0, 1]");

  const int labels = next_power_of_two(jumps);
  const int jump_q = log2_exact(labels, "jump labels");
  const int sys_q = ctx.qubits();
  Register reg({{"boltzmann", 1}, {"frequency", freq_q}, {"jump", jump_q}, {"system", sys_q}});
  BlockEncodingCircuit circuit{GateProgram(reg), labels};
  auto& p = circuit.program;
  const int d = ctx.dim();

  p.append("prep", {"frequency"}, build_prep(spec.filter), R"({"filter":")" +
                                                              std::string(spec.filter.kind() == FilterKind::gaussian
                                                                              ? "gaussian"
                                                                              : spec.filter.kind() == FilterKind::uniform
                                                                                    ? "uniform"
                                                                                    : "explicit") +
                                                              R"(","param":)" + std::to_string(spec.filter.param()) + "}");
  p.append("ctrl_ham", {"frequency", "system"}, build_ctrl_ham(ctx, grid, -1), R"({"sign":-1})");
  Matrix select = Matrix::Zero(static_cast<Eigen::Index>(labels) * d, static_cast<Eigen::Index>(labels) * d);
  for (int a = 0; a < labels; ++a)
    select.block(static_cast<Eigen::Index>(a) * d, static_cast<Eigen::Index>(a) * d, d, d) =
        a < jumps ? Matrix(root * spec.jumps[a]) : identity(d);
  if (jump_q > 0) {
    Vector uniform = Vector::Zero(labels);
    uniform.head(jumps).setConstant(1.0 / root);
    p.append("jump_prep", {"jump"}, build_prep(uniform), R"({"labels":)" + std::to_string(jumps) + "}");
    p.append("select", {"jump", "system"}, select);
  } else {
    p.append("select", {"system"}, select);
  }
  p.append("ctrl_ham", {"frequency", "system"}, build_ctrl_ham(ctx, grid, +1), R"({"sign":1})");
  p.append("qft", {"frequency"}, build_qft(grid.size()), R"({"N":)" + std::to_string(grid.size()) + "}");
  p.append("weight_rot", {"boltzmann", "frequency"}, build_weight_rot(spec.weight.table()));
  return circuit;
}

Matrix block_encoding_oracle(const LindbladSpec& spec, int jump_labels) {
  const OftFamily family = oft_discrete(spec.jumps, spec.filter, spec.grid, spec.context);
  const int d = spec.context.dim();
  const int n = spec.grid.size();
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(n) * jump_labels * d, d);
  for (int w = 0; w < n; ++w)
    for (int a = 0; a < family.jump_count(); ++a)
      out.block((static_cast<Eigen::Index>(w) * jump_labels + a) * d, 0, d, d) =
          std::sqrt(spec.weight.at_index(w)) * family.at(a, w);
  return out;
}

double block_encoding_residual(const BlockEncodingCircuit& circuit, const LindbladSpec& spec) {
  return operator_norm(circuit.encoding().block() - block_encoding_oracle(spec, circuit.jump_labels));
}

GateProgram build_discriminant_block(const BlockEncodingCircuit& circuit, const LindbladSpec& spec) {
  if (!spec.jumps.adjoint_closed()) throw SymmetryViolation("jump set is not closed under adjoints");
  if (!spec.filter.is_real()) throw SymmetryViolation("filter is not real");
  const Register& inner = circuit.program.reg();
  const int sys_q = inner.width("system");
  const int freq_q = inner.width("frequency");
  const int jump_q = inner.width("jump");
  Register reg({{"selector", 1},
                {"boltzmann", 1},
                {"frequency", freq_q},
                {"jump", jump_q},
                {"system", sys_q},
                {"system_prime", sys_q}});
  const int total = reg.total_qubits();
  const int d = 1 << sys_q;
  const Matrix& u = circuit.program.composite();

  // U on (boltzmann .. system) and U^* on (boltzmann .. jump, system')
  const Matrix u_sys = kron(u, identity(d));
  const std::vector<std::string> star_targets{"boltzmann", "frequency", "jump", "system_prime"};
  std::vector<int> star_qubits = reg.qubits_of(star_targets);
  for (int& q : star_qubits) q -= 1;  // drop the selector
  const Matrix u_star = embed_operator(u.conjugate(), star_qubits, total - 1);
  Matrix plus(2, 2), minus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  minus << 0.5, -0.5, -0.5, 0.5;
  const Matrix u_prime = kron(plus, u_sys) + kron(minus, u_star);

  // Label permutation (w, a) -> (-w, a')
  const int n = spec.grid.size();
  const int labels = circuit.jump_labels;
  const auto& perm = *spec.jumps.adjoint_permutation();
  Matrix p_label = Matrix::Zero(static_cast<Eigen::Index>(n) * labels, static_cast<Eigen::Index>(n) * labels);
  for (int w = 0; w < n; ++w)
    for (int a = 0; a < labels; ++a) {
      const int w2 = spec.grid.index(-spec.grid.label(w));
      const int a2 = a < spec.jumps.size() ? perm[static_cast<std::size_t>(a)] : a;
      p_label(static_cast<Eigen::Index>(w2) * labels + a2, static_cast<Eigen::Index>(w) * labels + a) = 1.0;
    }
  const Matrix z = pauli('Z');
  const Matrix id_sys2 = identity(d * d);
  const Matrix id_label = identity(n * labels);
  const Matrix pi = kron(kron(projector_zero(2), id_label), id_sys2);
  const Matrix r0 = kron(kron(kron(z, projector_zero(2)), p_label), id_sys2);
  const Matrix reflection = identity(static_cast<int>(reg.dim())) - kron(identity(2), pi) + r0;

  GateProgram prog(reg);
  const std::vector<std::string> all{"selector", "boltzmann", "frequency", "jump", "system", "system_prime"};
  prog.append("controlled_encoding", all, u_prime);
  prog.append("reflection", all, reflection);
  prog.append("controlled_encoding_dag", all, u_prime.adjoint());
  return prog;
}

Matrix discriminant_block(const GateProgram& program, int system_dim) {
  const int dd = system_dim * system_dim;
  return program.composite().topLeftCorner(dd, dd);
}

double discriminant_block_residual(const GateProgram& program, const LindbladSpec& spec) {
  const int d = spec.context.dim();
  const Matrix expected = identity(d * d) + build_proxy(spec);
  return operator_norm(discriminant_block(program, d) - expected);
}

Matrix reject_block(const BlockEncoding& enc) {
  const auto dim_u = enc.unitary.rows();
  const Matrix y = y_rotation(0.5);
  Matrix reflection = -Matrix::Identity(2 * dim_u, 2 * dim_u);
  const Eigen::Index flagged = (2 * dim_u) >> (enc.flag_qubits + 1);
  reflection.topLeftCorner(flagged, flagged) += 2.0 * Matrix::Identity(flagged, flagged);
  const Matrix v = kron(y, enc.unitary.adjoint()) * reflection * kron(y, enc.unitary);
  return v.topLeftCorner(enc.system_dim, enc.system_dim);
}

Matrix weak_measure_channel(const BlockEncoding& enc, double delta) {
  if (delta < 0.0 || delta > 1.0) throw PreconditionFailed("delta must lie in [0, 1]");
  const auto dim_u = enc.unitary.rows();
  const int d = enc.system_dim;
  // (1) U on the input columns |0> |0^c> |psi>
  const Matrix after_u = enc.unitary.leftCols(d);
  // (2) Y_delta on the rotation qubit when the flags read zero
  const Eigen::Index flagged = dim_u >> enc.flag_qubits;
  const Matrix y = y_rotation(delta);
  Matrix state = Matrix::Zero(2 * dim_u, d);
  state.topRows(dim_u) = after_u;
  state.topRows(flagged) = y(0, 0) * after_u.topRows(flagged);
  state.block(dim_u, 0, flagged, d) = y(1, 0) * after_u.topRows(flagged);
  // (3) U^dagger controlled on the rotation qubit being zero
  state.topRows(dim_u) = (enc.unitary.adjoint() * state.topRows(dim_u)).eval();
  // (4) trace out every ancilla
  Matrix channel = Matrix::Zero(static_cast<Eigen::Index>(d) * d, static_cast<Eigen::Index>(d) * d);
  for (Eigen::Index r = 0; r < 2 * dim_u; r += d) {
    const Matrix k = state.block(r, 0, d, d);
    channel.noalias() += kron(k, k.conjugate());
  }
  return channel;
}

Matrix weak_measure_step(const BlockEncoding& enc, double delta, const Matrix& rho) {
  return unvec(weak_measure_channel(enc, delta) * vec(rho));
}

Matrix weak_measure_evolve(const BlockEncoding& enc, double delta, const Matrix& rho, int steps) {
  const Matrix channel = weak_measure_channel(enc, delta);
  Vector v = vec(rho);
  for (int s = 0; s < steps; ++s) v = channel * v;
  return unvec(v);
}

RandomizedResult weak_measure_randomized(std::span<const BlockEncoding> gadgets, std::span<const double> probabilities,
                                         double delta, const Matrix& rho, int steps, int trajectories,
                                         std::uint64_t seed) {
  if (gadgets.size() != probabilities.size() || gadgets.empty())
    throw DimensionMismatch("gadget and probability lists differ in size");
  const double total = std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9) throw PreconditionFailed("probabilities do not sum to one");
  std::vector<Matrix> channels;
  for (const auto& g : gadgets) channels.push_back(weak_measure_channel(g, delta));
  std::discrete_distribution<int> pick(probabilities.begin(), probabilities.end());
  Rng rng(seed);
  const auto n = vec(rho).size();
  Vector sum = Vector::Zero(n);
  RealVector sq_re = RealVector::Zero(n), sq_im = RealVector::Zero(n);
  RandomizedResult out;
  out.counts.assign(gadgets.size(), 0);
  for (int tr = 0; tr < trajectories; ++tr) {
    Vector v = vec(rho);
    for (int s = 0; s < steps; ++s) {
      const int i = pick(rng);
      ++out.counts[static_cast<std::size_t>(i)];
      v = channels[static_cast<std::size_t>(i)] * v;
    }
    sum += v;
    sq_re += v.real().cwiseAbs2();
    sq_im += v.imag().cwiseAbs2();
  }
  const double m = trajectories;
  const Vector mean = sum / m;
  RealVector var = (sq_re / m - mean.real().cwiseAbs2()) + (sq_im / m - mean.imag().cwiseAbs2());
  var = var.cwiseMax(0.0) * (m / std::max(m - 1.0, 1.0));
  out.mean = unvec(mean);
  out.standard_error = unvec((var / m).cwiseSqrt().cast<Complex>());
  return out;
}

std::vector<AnnealPoint> anneal_path(const LindbladSpec& spec_template, int k, double overlap_floor) {
  if (k < 1) throw PreconditionFailed("annealing needs at least one step");
  const double beta = spec_template.context.beta();
  const Matrix& h = spec_template.context.hamiltonian();
  const double dbeta = beta / k;
  std::vector<AnnealPoint> out;
  std::vector<Vector> tops;
  std::vector<Vector> ideals;
  for (int j = 0; j <= k; ++j) {
    const double bj = j * dbeta;
    GibbsContext ctx = make_context(h, bj);
    TransitionWeight weight = make_weight(spec_template.weight.kind(), bj, spec_template.grid);
    const LindbladSpec spec{spec_template.jumps, ctx,  spec_template.grid, spec_template.filter,
                            std::move(weight),   Variant::discrete, std::nullopt};
    const EigvecComparison cmp = top_eigvec_compare(build_proxy(spec), spec.context);
    AnnealPoint pt;
    pt.j = j;
    pt.beta = bj;
    pt.gap = cmp.gap;
    pt.eigvec_dist = cmp.distance;
    out.push_back(pt);
    tops.push_back(cmp.top_vector);
    ideals.push_back(spec.context.purification());
  }
  const Matrix h2 = h * h;
  const double scale = dbeta * dbeta * operator_norm(h2 * matrix_exp(Complex(-dbeta) * h));
  for (int j = 0; j < k; ++j) {
    auto& pt = out[static_cast<std::size_t>(j)];
    pt.overlap = std::norm(tops[static_cast<std::size_t>(j)].dot(tops[static_cast<std::size_t>(j) + 1]));
    pt.ideal_overlap = std::norm(ideals[static_cast<std::size_t>(j)].dot(ideals[static_cast<std::size_t>(j) + 1]));
    pt.fitted_c = scale > 0.0 ? std::max(0.0, (0.7 - pt.overlap) / scale) : 0.0;
    pt.precondition = pt.eigvec_dist <= 0.1 && out[static_cast<std::size_t>(j) + 1].eigvec_dist <= 0.1;
    pt.pass = pt.precondition && pt.overlap >= overlap_floor;
  }
  auto& last = out.back();
  last.precondition = last.eigvec_dist <= 0.1;
  last.pass = last.precondition;
  return out;
}

}  // namespace qgl
