#include "qgl/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace qgl {

double hermitian_residual(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

EigenSystem eig_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) throw DimensionMismatch("eig_hermitian: matrix not square");
  const double res = hermitian_residual(m);
  if (res > tol) throw NonHermitianInput("eig_hermitian: symmetry residual " + std::to_string(res));
  const Matrix sym = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  const Eigen::Index n = sym.rows();
  EigenSystem out{RealVector(n), Matrix(n, n)};
  // Eigen sorts ascending
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = solver.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  return out;
}

Eigen::VectorXcd eigenvalues_general(const Matrix& m) {
  Eigen::ComplexEigenSolver<Matrix> solver(m, false);
  return solver.eigenvalues();
}

Matrix matrix_exp(const Matrix& m) {
  if (!m.allFinite()) throw Overflow("matrix_exp: non-finite input");
  Matrix out = m.exp();
  if (!out.allFinite()) throw Overflow("matrix_exp: result not representable");
  return out;
}

Matrix matrix_power(const Matrix& psd, double p) {
  const EigenSystem es = eig_hermitian(psd);
  const Eigen::Index n = psd.rows();
  const double smallest = n > 0 ? es.values(n - 1) : 0.0;
  if (smallest < -1e-12) throw NonHermitianInput("matrix_power: matrix not positive semidefinite");
  if (p < 0.0 && smallest <= 1e-14) throw SingularNegativePower("matrix_power: singular input for negative power");
  RealVector powered(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double lam = std::max(es.values(k), 0.0);
    powered(k) = (lam == 0.0) ? (p == 0.0 ? 1.0 : 0.0) : std::pow(lam, p);
  }
  return es.vectors * powered.cast<Complex>().asDiagonal() * es.vectors.adjoint();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix kron_all(std::span<const Matrix> factors) {
  Matrix out = Matrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

Vector vec(const Matrix& x) {
  Vector v(x.size());
  const Eigen::Index d = x.cols();
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < d; ++j) v(i * d + j) = x(i, j);
  return v;
}

Matrix unvec(const Vector& v) {
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (d * d != v.size()) throw DimensionMismatch("unvec: length is not a square");
  Matrix x(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = v(i * d + j);
  return x;
}

bool is_power_of_two(std::int64_t n) { return n > 0 && (n & (n - 1)) == 0; }

int qubit_count(std::int64_t dim) {
  if (!is_power_of_two(dim)) throw DimensionMismatch("dimension " + std::to_string(dim) + " is not a power of two");
  int q = 0;
  while ((std::int64_t{1} << q) < dim) ++q;
  return q;
}

Matrix partial_trace(const Matrix& m, std::span<const int> keep) {
  if (m.rows() != m.cols()) throw DimensionMismatch("partial_trace: matrix not square");
  const int q = qubit_count(m.rows());
  std::vector<int> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  std::vector<int> traced;
  for (int k = 0; k < q; ++k)
    if (!std::binary_search(kept.begin(), kept.end(), k)) traced.push_back(k);
  for (int k : kept)
    if (k < 0 || k >= q) throw DimensionMismatch("partial_trace: qubit index out of range");

  auto compose = [q](std::span<const int> positions, std::int64_t bits) {
    std::int64_t idx = 0;
    const auto width = static_cast<int>(positions.size());
    for (int s = 0; s < width; ++s)
      if ((bits >> (width - 1 - s)) & 1) idx |= std::int64_t{1} << (q - 1 - positions[s]);
    return idx;
  };

  const std::int64_t dk = std::int64_t{1} << kept.size();
  const std::int64_t dt = std::int64_t{1} << traced.size();
  Matrix out = Matrix::Zero(dk, dk);
  for (std::int64_t i = 0; i < dk; ++i) {
    const std::int64_t ri = compose(kept, i);
    for (std::int64_t j = 0; j < dk; ++j) {
      const std::int64_t rj = compose(kept, j);
      Complex acc = 0.0;
      for (std::int64_t t = 0; t < dt; ++t) {
        const std::int64_t off = compose(traced, t);
        acc += m(ri | off, rj | off);
      }
      out(i, j) = acc;
    }
  }
  return out;
}

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double trace_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

OperatorNorms norms(const Matrix& m) {
  if (m.size() == 0) return {};
  Eigen::JacobiSVD<Matrix> svd(m);
  const RealVector& s = svd.singularValues();
  return {s(0), s.sum(), m.norm()};
}

double trace_distance(const Matrix& a, const Matrix& b) { return 0.5 * trace_norm(a - b); }

Matrix identity(int dim) { return Matrix::Identity(dim, dim); }

Matrix pauli(char label) {
  Matrix p(2, 2);
  switch (label) {
    case 'I': p << 1, 0, 0, 1; break;
    case 'X': p << 0, 1, 1, 0; break;
    case 'Y': p << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 'Z': p << 1, 0, 0, -1; break;
    default: throw DimensionMismatch(std::string("unknown Pauli label ") + label);
  }
  return p;
}

Matrix pauli_string(std::string_view labels) {
  Matrix out = Matrix::Identity(1, 1);
  for (char c : labels) out = kron(out, pauli(c));
  return out;
}

Matrix random_matrix(int dim, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

Matrix random_hermitian(int dim, Rng& rng) {
  const Matrix g = random_matrix(dim, rng);
  return (g + g.adjoint()) / 2.0;
}

Matrix random_density(int dim, Rng& rng) {
  const Matrix g = random_matrix(dim, rng);
  Matrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

Vector random_unit_vector(int dim, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Complex(g(rng), g(rng));
  return v / v.norm();
}

Matrix complete_to_unitary(const Vector& first_column) {
  const double nrm = first_column.norm();
  if (nrm < 1e-12) throw NonUnitaryCompletion("cannot complete a zero column");
  const Vector x = first_column / nrm;
  const Eigen::Index n = x.size();
  // Householder: H e0 = x up to the phase of x(0), then restore that phase on column 0.
  const Complex x0 = x(0);
  const double a0 = std::abs(x0);
  const Complex phase = a0 > 1e-15 ? x0 / a0 : Complex(1.0, 0.0);
  Vector w = x;
  w(0) -= phase;
  const double wn = w.norm();
  Matrix h = Matrix::Identity(n, n);
  if (wn > 1e-15) {
    const Vector u = w / wn;
    // Reflector I - 2uu^dagger maps phase*e0 to x; multiply by phase so column 0 becomes x.
    h = (Matrix::Identity(n, n) - 2.0 * u * u.adjoint()) * phase;
  } else {
    h *= phase;
  }
  h.col(0) = x;
  return h;
}

}  // namespace qgl
