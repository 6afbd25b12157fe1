#pragma once

#include <cmath>

#include "qgl/circuits.hpp"

namespace qgl::fixtures {

inline GibbsContext qubit_context(double beta = 1.0) { return make_context(pauli('Z'), beta); }

inline LindbladSpec qubit_spec(int n_points = 64, double sigma_t = 5.0, double beta = 1.0,
                               FilterKind kind = FilterKind::gaussian) {
  return make_spec(JumpSet({pauli('X')}), qubit_context(beta), n_points, FilterSpec{kind, sigma_t, {}},
                   WeightKind::metropolis);
}

inline LindbladSpec chain_spec(int n_points = 16, double sigma_t = 2.0) {
  const Matrix h = build_hamiltonian(PauliZChain{2, {1.0}, {1.0, 0.5}});
  return make_spec(normalized_jumps({pauli_string("XI"), pauli_string("IX")}), make_context(h, 1.0), n_points,
                   FilterSpec{FilterKind::gaussian, sigma_t, {}}, WeightKind::metropolis);
}

inline Matrix gibbs_qubit(double beta) {
  Matrix rho = Matrix::Zero(2, 2);
  const double z = std::exp(-beta) + std::exp(beta);
  rho(0, 0) = std::exp(-beta) / z;
  rho(1, 1) = std::exp(beta) / z;
  return rho;
}

inline Superoperator depolarizer() {
  Superoperator l(2);
  for (char p : {'X', 'Y', 'Z'}) l.add_dissipator(1.0 / 3.0, pauli(p));
  return l;
}

}  // namespace qgl::fixtures
