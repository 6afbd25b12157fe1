#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"

using namespace qgl;

TEST(Eig, PauliZ) {
  const EigenSystem e = eig_hermitian(pauli('Z'));
  EXPECT_NEAR(e.values(0), 1.0, 1e-14);
  EXPECT_NEAR(e.values(1), -1.0, 1e-14);
}

TEST(Eig, IdentityDim4) {
  const EigenSystem e = eig_hermitian(identity(4));
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(e.values(i), 1.0, 1e-14);
  EXPECT_LT(operator_norm(e.vectors.adjoint() * e.vectors - identity(4)), 1e-12);
}

TEST(Eig, RandomReconstruction) {
  Rng rng(3);
  const Matrix m = random_hermitian(8, rng);
  const EigenSystem e = eig_hermitian(m);
  const Matrix back = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
  EXPECT_LT(operator_norm(back - m), 1e-10);
  for (int i = 1; i < 8; ++i) EXPECT_GE(e.values(i - 1), e.values(i));
}

TEST(Eig, RejectsNonHermitian) {
  Matrix m = pauli('X');
  m(0, 1) = 2.0;
  EXPECT_THROW(eig_hermitian(m), NonHermitianInput);
}

TEST(Exp, Zero) { EXPECT_LT(operator_norm(matrix_exp(Matrix::Zero(3, 3)) - identity(3)), 1e-15); }

TEST(Exp, HalfTurnZ) {
  const Matrix u = matrix_exp(Complex(0, std::numbers::pi / 2) * pauli('Z'));
  EXPECT_LT(operator_norm(u - Complex(0, 1) * pauli('Z')), 1e-14);
}

TEST(Exp, DepolarizerDecay) {
  const Matrix prop = matrix_exp(0.7 * fixtures::depolarizer().dense());
  for (char p : {'X', 'Y', 'Z'}) {
    const Vector v = vec(pauli(p));
    EXPECT_LT((prop * v - std::exp(-4.0 * 0.7 / 3.0) * v).norm(), 1e-12);
  }
  EXPECT_LT((prop * vec(identity(2)) - vec(identity(2))).norm(), 1e-12);
}

TEST(Power, Examples) {
  EXPECT_LT(operator_norm(matrix_power(identity(2) / 2.0, 0.5) - identity(2) / std::sqrt(2.0)), 1e-14);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 1.0;
  const Matrix p = matrix_power(d, -0.25);
  EXPECT_NEAR(p(0, 0).real(), std::pow(4.0, -0.25), 1e-14);
  EXPECT_NEAR(p(1, 1).real(), 1.0, 1e-14);
}

TEST(Power, RoundTrip) {
  const Matrix rho = fixtures::qubit_context().rho();
  EXPECT_LT(operator_norm(matrix_power(rho, 0.25) * matrix_power(rho, -0.25) - identity(2)), 1e-12);
}

TEST(Power, SingularNegative) {
  Matrix p = Matrix::Zero(2, 2);
  p(0, 0) = 1.0;
  EXPECT_THROW(matrix_power(p, -0.5), SingularNegativePower);
}

TEST(Vectorize, IdentityTerm) {
  const SuperTerm t{1.0, identity(2), identity(2)};
  EXPECT_LT(operator_norm(vectorize(std::span(&t, 1), 2) - identity(4)), 1e-15);
}

TEST(Vectorize, LeftRight) {
  const SuperTerm t{1.0, pauli('X'), pauli('Z')};
  EXPECT_LT(operator_norm(vectorize(std::span(&t, 1), 2) - kron(pauli('X'), pauli('Z'))), 1e-15);
}

TEST(Vectorize, Commutator) {
  Superoperator s(2);
  s.add_term(Complex(0, -1), pauli('Z'), identity(2));
  s.add_term(Complex(0, 1), identity(2), pauli('Z'));
  Matrix expected = Matrix::Zero(4, 4);
  expected(1, 1) = Complex(0, -2);
  expected(2, 2) = Complex(0, 2);
  EXPECT_LT(operator_norm(s.dense() - expected), 1e-14);
}

TEST(Vectorize, MatchesApply) {
  Rng rng(5);
  const Matrix a = random_matrix(3, rng);
  const Matrix b = random_matrix(3, rng);
  const Matrix x = random_matrix(3, rng);
  EXPECT_LT((kron(a, b.transpose()) * vec(x) - vec(a * x * b)).norm(), 1e-12);
  EXPECT_LT(operator_norm(unvec(vec(x)) - x), 1e-15);
}

TEST(Norms, Pauli) {
  const OperatorNorms n = norms(pauli('X'));
  EXPECT_NEAR(n.trace, 2.0, 1e-14);
  EXPECT_NEAR(n.operator_norm, 1.0, 1e-14);
  EXPECT_NEAR(n.frobenius, std::sqrt(2.0), 1e-14);
}

TEST(Norms, IdentitySuperoperator) { EXPECT_NEAR(superop_norm_22(Superoperator::identity(2)), 1.0, 1e-14); }

TEST(Norms, LindbladianOneOneAtMostTwo) {
  const Superoperator l = build_lindbladian(fixtures::qubit_spec());
  const double lb = superop_norm_11_lb(l, 2000, 1);
  EXPECT_GT(lb, 0.0);
  EXPECT_LE(lb, 2.0 + 1e-12);
}

TEST(PartialTrace, Product) {
  Rng rng(9);
  const Matrix rho = random_density(2, rng);
  const Matrix sigma = 3.0 * random_density(2, rng);
  const int keep = 0;
  EXPECT_LT(operator_norm(partial_trace(kron(rho, sigma), std::span(&keep, 1)) - 3.0 * rho), 1e-12);
}

TEST(PartialTrace, Purification) {
  const GibbsContext ctx = fixtures::qubit_context();
  const Vector v = ctx.purification();
  const int keep = 0;
  EXPECT_LT(operator_norm(partial_trace(v * v.adjoint(), std::span(&keep, 1)) - ctx.rho()), 1e-12);
}

TEST(PartialTrace, Everything) {
  Rng rng(2);
  const Matrix m = random_matrix(4, rng);
  const Matrix t = partial_trace(m, std::span<const int>{});
  ASSERT_EQ(t.rows(), 1);
  EXPECT_LT(std::abs(t(0, 0) - m.trace()), 1e-12);
}

TEST(Kron, Dimensions) {
  const Matrix k = kron(pauli('X'), identity(3));
  EXPECT_EQ(k.rows(), 6);
  EXPECT_LT(operator_norm(pauli_string("XZ") - kron(pauli('X'), pauli('Z'))), 1e-15);
}

TEST(Completion, Unitary) {
  Rng rng(4);
  const Vector v = random_unit_vector(8, rng);
  const Matrix u = complete_to_unitary(v);
  EXPECT_LT((u.col(0) - v).norm(), 1e-12);
  EXPECT_LT(operator_norm(u.adjoint() * u - identity(8)), 1e-12);
}

TEST(Choi, IdentityChannel) {
  const Matrix c = choi_matrix(Superoperator::identity(2).dense());
  EXPECT_GT(eig_hermitian(c).values.minCoeff(), -1e-12);
  EXPECT_NEAR(c.trace().real(), 2.0, 1e-12);
}

TEST(Qubits, Count) {
  EXPECT_EQ(qubit_count(8), 3);
  EXPECT_THROW(qubit_count(6), DimensionMismatch);
}
