#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qgl/numkit.hpp"

namespace qgl {

enum class Picture { schrodinger, heisenberg };

struct SuperTerm {
  Complex coeff{1.0, 0.0};
  Matrix left;
  Matrix right;
};

// Dense d^2 x d^2 matrix for the sum of coeff * left [.] right.
Matrix vectorize(std::span<const SuperTerm> terms, int dim);

class Superoperator {
 public:
  explicit Superoperator(int dim, Picture picture = Picture::schrodinger);

  static Superoperator from_terms(std::vector<SuperTerm> terms, int dim,
                                  Picture picture = Picture::schrodinger);
  static Superoperator from_dense(Matrix dense, Picture picture = Picture::schrodinger);
  static Superoperator identity(int dim);

  int dim() const noexcept { return dim_; }
  Picture picture() const noexcept { return picture_; }
  const Matrix& dense() const noexcept { return dense_; }
  std::span<const SuperTerm> terms() const noexcept { return terms_; }
  bool has_terms() const noexcept { return !dense_only_; }

  void add_term(Complex coeff, const Matrix& left, const Matrix& right);
  // GKSL contribution rate * (L [.] L^dagger - 1/2 {L^dagger L, .}).
  void add_dissipator(double rate, const Matrix& jump);

  Matrix apply(const Matrix& x) const;
  Superoperator adjoint() const;
  Superoperator compose(const Superoperator& inner) const;  // this after inner

  Superoperator& operator+=(const Superoperator& other);
  Superoperator& operator-=(const Superoperator& other);
  Superoperator& operator*=(Complex s);

 private:
  int dim_;
  Picture picture_;
  std::vector<SuperTerm> terms_;
  Matrix dense_;
  bool dense_only_ = false;
};

Superoperator operator+(Superoperator a, const Superoperator& b);
Superoperator operator-(Superoperator a, const Superoperator& b);
Superoperator operator*(Complex s, Superoperator a);

double superop_norm_22(const Superoperator& s);
double superop_norm_22(const Matrix& dense);

// Sampled lower bound on the 1->1 norm, inputs R = (|u><u| - |v><v|)/2 with <u|v> = 0.
double superop_norm_11_lb(const Matrix& dense, int trials = 10000, std::uint64_t seed = 1);
double superop_norm_11_lb(const Superoperator& s, int trials = 10000, std::uint64_t seed = 1);

// Choi matrix sum_{ij} |i><j| kron S[|i><j|].
Matrix choi_matrix(const Matrix& dense);

struct OrthoPair {
  Vector u;
  Vector v;
};
OrthoPair random_ortho_pair(int dim, Rng& rng);
Matrix pair_operator(const OrthoPair& p);  // (|u><u| - |v><v|)/2

// Hermitian trace norm of each column of a d^2 x k block of vectorized matrices.
std::vector<double> column_trace_norms(const Matrix& vecs, int dim);

}  // namespace qgl
