#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qgl/numkit.hpp"

namespace qgl {

inline constexpr int kMaxQubits = 5;

// H = sum_i J_i Z_i Z_{i+1} + sum_i h_i Z_i on an open chain.
struct PauliZChain {
  int n = 1;
  std::vector<double> couplings;
  std::vector<double> fields;
};
struct ExplicitMatrix {
  Matrix matrix;
};
// Gaussian Hermitian, scaled to operator norm 1.
struct RandomHermitian {
  int n = 1;
  std::uint64_t seed = 0;
};
using HamiltonianSpec = std::variant<PauliZChain, ExplicitMatrix, RandomHermitian>;

Matrix build_hamiltonian(const HamiltonianSpec& spec);

struct BohrComponent {
  double nu = 0.0;
  Matrix op;  // maps energy E to E + nu
};

class GibbsContext {
 public:
  GibbsContext(Matrix hamiltonian, double beta);

  const Matrix& hamiltonian() const noexcept { return h_; }
  double beta() const noexcept { return beta_; }
  int dim() const noexcept { return static_cast<int>(h_.rows()); }
  int qubits() const { return qubit_count(h_.rows()); }
  const EigenSystem& eigensystem() const noexcept { return eig_; }
  const RealVector& energies() const noexcept { return eig_.values; }
  const Matrix& basis() const noexcept { return eig_.vectors; }
  double hamiltonian_norm() const noexcept { return norm_; }

  const Matrix& rho() const noexcept { return rho_; }
  const RealVector& populations() const noexcept { return pops_; }  // Gibbs weights per eigenvector
  const Vector& purification() const noexcept { return purification_; }
  Matrix rho_power(double p) const;  // exact in the eigenbasis

  // Distinct Bohr frequencies (ascending) and, per eigen-index pair (i, j), the cluster of E_i - E_j.
  const std::vector<double>& bohr_frequencies() const noexcept { return bohr_; }
  int bohr_index(int i, int j) const { return pair_bohr_[static_cast<std::size_t>(i * dim() + j)]; }

  std::vector<BohrComponent> bohr_decompose(const Matrix& a) const;
  Matrix to_eigenbasis(const Matrix& a) const { return eig_.vectors.adjoint() * a * eig_.vectors; }
  Matrix from_eigenbasis(const Matrix& a) const { return eig_.vectors * a * eig_.vectors.adjoint(); }
  Matrix heisenberg(const Matrix& a, double t) const;  // e^{iHt} A e^{-iHt}

 private:
  Matrix h_;
  double beta_;
  EigenSystem eig_;
  double norm_ = 0.0;
  RealVector pops_;
  Matrix rho_;
  Vector purification_;
  std::vector<double> bohr_;
  std::vector<int> pair_bohr_;
};

GibbsContext make_context(const Matrix& hamiltonian, double beta);

// Eigenvalues rounded toward zero to multiples of omega0, eigenvectors kept.
Matrix round_hamiltonian(const GibbsContext& ctx, double omega0);

class SpectralGrid {
 public:
  SpectralGrid(int n_points, double omega0);

  int size() const noexcept { return n_; }
  double omega0() const noexcept { return omega0_; }
  double t0() const noexcept { return t0_; }
  // Signed-binary order: index k < N/2 is label k, otherwise label k - N.
  int label(int index) const noexcept { return index < n_ / 2 ? index : index - n_; }
  int index(int label) const noexcept { return ((label % n_) + n_) % n_; }
  int wrap(int label) const noexcept { return this->label(index(label)); }
  double energy(int index) const noexcept { return label(index) * omega0_; }
  double time(int index) const noexcept { return label(index) * t0_; }
  bool has_partner(int index) const noexcept { return label(index) != -n_ / 2 || n_ == 1; }

 private:
  int n_;
  double omega0_;
  double t0_;
};

double required_range(const GibbsContext& ctx);
SpectralGrid make_grid(int n_points, const GibbsContext& ctx, std::optional<double> omega0 = std::nullopt);

enum class FilterKind { uniform, gaussian, explicit_samples };

struct FilterSpec {
  FilterKind kind = FilterKind::gaussian;
  double param = 1.0;  // uniform: half window T, gaussian: sigma_t
  std::vector<Complex> samples;  // explicit, in grid index order
};

class FilterFunction {
 public:
  FilterFunction(FilterSpec spec, const SpectralGrid& grid, bool normalize = true);

  const FilterSpec& spec() const noexcept { return spec_; }
  FilterKind kind() const noexcept { return spec_.kind; }
  double param() const noexcept { return spec_.param; }
  const Vector& values() const noexcept { return values_; }
  bool is_real() const noexcept { return real_; }
  int size() const noexcept { return static_cast<int>(values_.size()); }

  // Discrete transform (1/sqrt N) sum_t e^{-i x t} f(t) at any real x.
  Complex hat(double x) const;
  RealVector times() const { return times_; }

 private:
  FilterSpec spec_;
  Vector values_;
  RealVector times_;
  bool real_ = true;
};

FilterFunction make_filter(const FilterSpec& spec, const SpectralGrid& grid);

enum class WeightKind { metropolis, glauber, custom };

class TransitionWeight {
 public:
  TransitionWeight(WeightKind kind, double beta, const SpectralGrid& grid);
  TransitionWeight(std::vector<double> table, double beta, const SpectralGrid& grid);

  WeightKind kind() const noexcept { return kind_; }
  double beta() const noexcept { return beta_; }
  double at_index(int index) const { return table_[static_cast<std::size_t>(index)]; }
  const std::vector<double>& table() const noexcept { return table_; }
  double value(double omega) const;  // continuous profile; custom tables throw
  TransitionWeight with_table(std::vector<double> table) const;

 private:
  WeightKind kind_;
  double beta_;
  std::vector<double> table_;
};

double weight_function(WeightKind kind, double beta, double omega);
TransitionWeight make_weight(WeightKind kind, double beta, const SpectralGrid& grid);
double kms_residual(const TransitionWeight& w, const SpectralGrid& grid);

enum class Normalization { algorithmic, physical };

class JumpSet {
 public:
  explicit JumpSet(std::vector<Matrix> jumps, Normalization mode = Normalization::algorithmic);

  int size() const noexcept { return static_cast<int>(jumps_.size()); }
  int dim() const noexcept { return dim_; }
  const Matrix& operator[](int a) const { return jumps_[static_cast<std::size_t>(a)]; }
  std::span<const Matrix> ops() const noexcept { return jumps_; }
  const std::optional<std::vector<int>>& adjoint_permutation() const noexcept { return perm_; }
  bool adjoint_closed() const noexcept { return perm_.has_value(); }
  double normalization() const noexcept { return norm_; }
  Normalization mode() const noexcept { return mode_; }
  Matrix sum_adag_a() const;

 private:
  std::vector<Matrix> jumps_;
  int dim_ = 0;
  Normalization mode_;
  double norm_ = 0.0;
  std::optional<std::vector<int>> perm_;
};

// Rescales so that the algorithmic normalization equals one.
JumpSet normalized_jumps(std::vector<Matrix> jumps);

}  // namespace qgl
