#pragma once

#include <span>
#include <vector>

#include "qgl/generator.hpp"

namespace qgl {

struct DiscriminantReport {
  Matrix d;
  Matrix h_part;
  Matrix a_part;
  double adb_norm = 0.0;
  double lambda1 = 0.0;  // top eigenvalue of h_part
  Vector top_vector;
  double gap = 0.0;  // lambda1 - lambda2 of h_part
};

// vec of rho^{-1/4} L[rho^{1/4} . rho^{1/4}] rho^{-1/4}
Matrix similarity_discriminant(const Matrix& generator_dense, const GibbsContext& ctx);
Matrix similarity_discriminant(const Superoperator& generator, const GibbsContext& ctx);
Matrix similarity_discriminant(const Superoperator& generator, const Matrix& rho);

DiscriminantReport analyze_discriminant(const Superoperator& generator, const GibbsContext& ctx);
double adb_norm(const Superoperator& generator, const GibbsContext& ctx);

// sqrt(g g_-) A kron A^* - (g/2)(A^dag A kron I + I kron (A^dag A)^T) summed over (a, w).
Matrix proxy_from_family(const OftFamily& family, std::span<const double> weights, const SpectralGrid& grid);
Matrix build_proxy(const LindbladSpec& spec);

// (1/2) sum_j L_j kron conj(L_j') + L_j^dag kron L_j'^T - L_j^dag L_j kron I - I kron (L_j^dag L_j)^T
Matrix generic_proxy(std::span<const Matrix> lindblad_ops, std::span<const int> permutation);

// Exact Bohr resolution with sqrt(gamma(nu) gamma(-nu)) weights.
Matrix davies_proxy(const JumpSet& jumps, const WeightFn& gamma, const GibbsContext& ctx);

// || D - vec D(rho, L)^dagger ||
double proxy_defect(const Matrix& proxy, const Superoperator& generator, const GibbsContext& ctx);

struct ProxyEpsilon {
  double epsilon = 0.0;
  double bound = 0.0;  // 132 beta mu || sum gamma S^dag S ||
  double beta_mu = 0.0;
  bool pass = false;
};
// Secular proxy on the rounded Hamiltonian vs the discriminant of the secular generator at the rounded Gibbs state.
ProxyEpsilon proxy_epsilon(const LindbladSpec& spec, double mu);

}  // namespace qgl
