#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qgl/errors.hpp"

namespace qgl {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Rng = std::mt19937_64;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kDegeneracyTol = 1e-8;

struct EigenSystem {
  RealVector values;  // descending
  Matrix vectors;     // columns match values
};

// Throws NonHermitianInput when max|M - M^dagger| exceeds tol.
EigenSystem eig_hermitian(const Matrix& m, double tol = kHermitianTol);

// General (non-Hermitian) spectrum, unsorted.
Eigen::VectorXcd eigenvalues_general(const Matrix& m);

Matrix matrix_exp(const Matrix& m);
Matrix matrix_power(const Matrix& psd, double p);
Matrix kron(const Matrix& a, const Matrix& b);
Matrix kron_all(std::span<const Matrix> factors);

// Row-major vectorization: vec(X)[i*d + j] = X(i, j), so vec(A X B) = (A kron B^T) vec(X).
Vector vec(const Matrix& x);
Matrix unvec(const Vector& v);

// Qubit 0 is the most significant bit of the basis index.
Matrix partial_trace(const Matrix& m, std::span<const int> keep);

struct OperatorNorms {
  double operator_norm = 0.0;
  double trace = 0.0;
  double frobenius = 0.0;
};
OperatorNorms norms(const Matrix& m);
double operator_norm(const Matrix& m);
double trace_norm(const Matrix& m);
double trace_distance(const Matrix& a, const Matrix& b);  // half the trace norm of a - b

double hermitian_residual(const Matrix& m);
bool is_power_of_two(std::int64_t n);
int qubit_count(std::int64_t dim);  // throws DimensionMismatch unless dim is 2^q

Matrix identity(int dim);
Matrix pauli(char label);
Matrix pauli_string(std::string_view labels);  // e.g. "XZ" = X kron Z

Matrix random_hermitian(int dim, Rng& rng);
Matrix random_density(int dim, Rng& rng);
Vector random_unit_vector(int dim, Rng& rng);
Matrix random_matrix(int dim, Rng& rng);

// Columns 1.. are an orthonormal completion of the given unit column (Householder reflection).
Matrix complete_to_unitary(const Vector& first_column);

}  // namespace qgl

#include "qgl/superop.hpp"
