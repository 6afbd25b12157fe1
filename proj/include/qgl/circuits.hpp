#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qgl/dynamics.hpp"

namespace qgl {

inline constexpr int kMaxCircuitQubits = 13;

struct Segment {
  std::string name;
  int qubits = 0;
};

// Ordered qubit segments; the first segment holds the most significant qubits.
class Register {
 public:
  Register() = default;
  explicit Register(std::vector<Segment> segments);
  int total_qubits() const noexcept { return total_; }
  std::int64_t dim() const noexcept { return std::int64_t{1} << total_; }
  int offset(const std::string& name) const;
  int width(const std::string& name) const;
  bool has(const std::string& name) const noexcept;
  const std::vector<Segment>& segments() const noexcept { return segments_; }
  std::vector<int> qubits_of(std::span<const std::string> names) const;

 private:
  std::vector<Segment> segments_;
  int total_ = 0;
};

// Lifts op (acting on the listed qubits, first = most significant) to the full register.
Matrix embed_operator(const Matrix& op, std::span<const int> qubits, int total_qubits);

struct Gate {
  std::string name;
  std::vector<std::string> targets;
  Matrix unitary;
  std::string params;  // JSON object text
};

class GateProgram {
 public:
  explicit GateProgram(Register reg);
  const Register& reg() const noexcept { return reg_; }
  const std::vector<Gate>& gates() const noexcept { return gates_; }
  void append(std::string name, std::vector<std::string> targets, Matrix unitary, std::string params = "{}");
  const Matrix& composite() const;  // product of the gates in order
  double unitarity_residual() const;
  std::string to_json() const;  // {register, gates: [{gate_name, params, targets}]}

 private:
  Register reg_;
  std::vector<Gate> gates_;
  mutable Matrix cache_;
  mutable bool cached_ = false;
};

// Y_theta = exp(-i arcsin(sqrt(theta)) Y)
Matrix y_rotation(double theta);

Matrix build_prep(const Vector& amplitudes);                 // first column = amplitudes
Matrix build_prep(const FilterFunction& filter);
Matrix build_qft(int n_points);                              // |t> -> N^{-1/2} sum e^{-i w t} |w>, signed labels
Matrix build_weight_rot(std::span<const double> weights);   // sum Y_{1 - gamma(w)} kron |w><w|, boltzmann qubit first
Matrix build_ctrl_ham(const GibbsContext& ctx, const SpectralGrid& grid, int sign);  // sum |t><t| kron e^{sign i H t}

// Dense block-encoding U with ancilla qubits above the system; the first flag_qubits
// ancillas flag a successful jump.
struct BlockEncoding {
  Matrix unitary;
  int system_dim = 0;
  int ancilla_qubits = 0;
  int flag_qubits = 0;
  // (<0^flags| kron I) U (|0^anc> kron I): rows (label, system), columns system.
  Matrix block() const;
  std::vector<Matrix> lindblad_ops() const;
};

struct BlockEncodingCircuit {
  GateProgram program;
  int jump_labels = 1;  // padded to a power of two
  BlockEncoding encoding() const;
};

// Requires sqrt(|A|) A^a unitary for every jump; registers boltzmann, frequency, jump, system.
BlockEncodingCircuit build_block_encoding(const LindbladSpec& spec);
Matrix block_encoding_oracle(const LindbladSpec& spec, int jump_labels);
double block_encoding_residual(const BlockEncodingCircuit& circuit, const LindbladSpec& spec);

// Registers selector, boltzmann, frequency, jump, system, system'.
GateProgram build_discriminant_block(const BlockEncodingCircuit& circuit, const LindbladSpec& spec);
Matrix discriminant_block(const GateProgram& program, int system_dim);  // top-left d^2 x d^2 corner
double discriminant_block_residual(const GateProgram& program, const LindbladSpec& spec);

Matrix reject_block(const BlockEncoding& enc);  // sum L^dag L corner

// Superoperator of one weak-measurement gadget.
Matrix weak_measure_channel(const BlockEncoding& enc, double delta);
Matrix weak_measure_step(const BlockEncoding& enc, double delta, const Matrix& rho);
Matrix weak_measure_evolve(const BlockEncoding& enc, double delta, const Matrix& rho, int steps);

struct RandomizedResult {
  Matrix mean;
  Matrix standard_error;  // entrywise, real and imaginary parts combined
  std::vector<int> counts;  // gadget usage
};
RandomizedResult weak_measure_randomized(std::span<const BlockEncoding> gadgets, std::span<const double> probabilities,
                                         double delta, const Matrix& rho, int steps, int trajectories,
                                         std::uint64_t seed);

struct AnnealPoint {
  int j = 0;
  double beta = 0.0;
  double gap = 0.0;
  double overlap = 0.0;        // |<l1(beta_j)|l1(beta_{j+1})>|^2, zero on the last node
  double ideal_overlap = 0.0;  // same for the purified Gibbs states
  double eigvec_dist = 0.0;
  double fitted_c = 0.0;       // (7/10 - overlap) / (dbeta^2 ||H^2 e^{-dbeta H}||), floored at zero
  bool precondition = true;    // eigvec_dist <= 1/10 at both ends; failing it fails the node
  bool pass = true;
};

// beta_j = j beta / k on the grid and filter of the template; proxies from the discrete family.
std::vector<AnnealPoint> anneal_path(const LindbladSpec& spec_template, int k, double overlap_floor = 0.6);

}  // namespace qgl
