#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace qgl;

TEST(Similarity, MaximallyMixedIsIdentityMap) {
  const Superoperator l = build_lindbladian(fixtures::qubit_spec());
  EXPECT_LT(operator_norm(similarity_discriminant(l, Matrix(identity(2) / 2.0)) - l.dense()), 1e-12);
}

TEST(Similarity, DaviesIsHermitian) {
  const LindbladSpec spec = fixtures::qubit_spec();
  const Superoperator d = build_davies(spec.jumps, weight_fn(spec.weight), spec.context);
  const Matrix disc = similarity_discriminant(d, spec.context);
  EXPECT_LT(operator_norm(disc - disc.adjoint()), 1e-9);
  EXPECT_LT(adb_norm(d, spec.context), 1e-9);
  // annihilates the purified Gibbs state
  EXPECT_LT((disc * spec.context.purification()).norm(), 1e-12);
}

TEST(Adb, PositiveAndDecreasing) {
  double prev = 1e300;
  for (double s : {2.0, 4.0, 8.0, 16.0}) {
    const LindbladSpec spec = fixtures::qubit_spec(256, s);
    const DiscriminantReport r = analyze_discriminant(build_lindbladian(spec), spec.context);
    EXPECT_GT(r.adb_norm, 0.0);
    EXPECT_LT(r.adb_norm, prev) << s;
    EXPECT_LE(std::abs(r.lambda1), r.adb_norm + 1e-12);
    prev = r.adb_norm;
  }
}

TEST(Adb, TopEigenvalueBoundRandomInstances) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const LindbladSpec spec = make_spec(normalized_jumps({pauli_string("XI"), pauli_string("IZ")}),
                                        make_context(build_hamiltonian(RandomHermitian{2, seed}), 1.0), 32,
                                        FilterSpec{FilterKind::gaussian, 2.0, {}}, WeightKind::metropolis);
    const DiscriminantReport r = analyze_discriminant(build_lindbladian(spec), spec.context);
    EXPECT_LE(std::abs(r.lambda1), r.adb_norm + 1e-12) << seed;
  }
}

TEST(Proxy, ZeroWeights) {
  LindbladSpec spec = fixtures::qubit_spec(16, 2.0);
  spec.weight = spec.weight.with_table(std::vector<double>(16, 0.0));
  EXPECT_LT(operator_norm(build_proxy(spec)), 1e-15);
}

TEST(Proxy, InfiniteTemperatureMaximallyEntangled) {
  const LindbladSpec spec = fixtures::qubit_spec(32, 3.0, 0.0);
  const EigenSystem e = eig_hermitian(build_proxy(spec));
  EXPECT_NEAR(e.values(0), 0.0, 1e-10);
  const Vector bell = vec(identity(2)) / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(bell.dot(e.vectors.col(0))), 1.0, 1e-8);
}

TEST(Proxy, Hermitian) {
  for (const LindbladSpec& spec : {fixtures::qubit_spec(), fixtures::qubit_spec(128, 8.0), fixtures::chain_spec(),
                                   fixtures::qubit_spec(64, 4.0, 1.0, FilterKind::uniform)}) {
    const Matrix d = build_proxy(spec);
    EXPECT_LT(operator_norm(d - d.adjoint()), 1e-12);
  }
}

TEST(Proxy, RejectsOpenJumpSet) {
  Matrix lower = Matrix::Zero(2, 2);
  lower(1, 0) = 1.0;
  const LindbladSpec spec = make_spec(JumpSet({lower}), fixtures::qubit_context(), 16,
                                      FilterSpec{FilterKind::gaussian, 2.0, {}}, WeightKind::metropolis);
  EXPECT_THROW(build_proxy(spec), SymmetryViolation);
}

TEST(Proxy, DaviesAnnihilatesPurification) {
  const LindbladSpec spec = make_spec(JumpSet({pauli('X')}), fixtures::qubit_context(), 16,
                                      FilterSpec{FilterKind::gaussian, 2.0, {}}, WeightKind::metropolis,
                                      Variant::davies);
  const Matrix d = build_proxy(spec);
  EXPECT_LT((d * spec.context.purification()).norm(), 1e-12);
  EXPECT_LT(top_eigvec_compare(d, spec.context).distance, 1e-8);
}

TEST(GenericProxy, Empty) { EXPECT_EQ(generic_proxy({}, {}).size(), 0); }

TEST(GenericProxy, SingleHermitian) {
  const Matrix l = 0.7 * pauli('X') + 0.2 * pauli('Z');
  const std::vector<Matrix> ops{l};
  const std::vector<int> perm{0};
  const Matrix id = identity(2);
  const Matrix direct = kron(l, l.conjugate()) - 0.5 * kron(l * l, id) - 0.5 * kron(id, (l * l).transpose());
  EXPECT_LT(operator_norm(generic_proxy(ops, perm) - direct), 1e-12);
}

TEST(GenericProxy, RejectsNonInvolution) {
  const std::vector<Matrix> ops{pauli('X'), pauli('Y'), pauli('Z')};
  const std::vector<int> perm{1, 2, 0};
  EXPECT_THROW(generic_proxy(ops, perm), SymmetryViolation);
}

TEST(GenericProxy, MatchesFamilyProxy) {
  LindbladSpec spec = fixtures::qubit_spec(16, 2.0);
  const int n = spec.grid.size();
  std::vector<double> table = spec.weight.table();
  table[static_cast<std::size_t>(spec.grid.index(-n / 2))] = 0.0;
  spec.weight = spec.weight.with_table(table);
  const OftFamily fam = oft_discrete(spec.jumps, spec.filter, spec.grid, spec.context);
  std::vector<Matrix> ops;
  std::vector<int> perm;
  for (int k = 0; k < n; ++k) {
    ops.push_back(std::sqrt(table[static_cast<std::size_t>(k)]) * fam.at(0, k));
    perm.push_back(spec.grid.has_partner(k) ? spec.grid.index(-spec.grid.label(k)) : k);
  }
  EXPECT_LT(operator_norm(generic_proxy(ops, perm) - build_proxy(spec)), 1e-12);
}

TEST(ProxyEpsilon, BoundHolds) {
  for (const LindbladSpec& spec : {fixtures::qubit_spec(), fixtures::chain_spec(64, 4.0)}) {
    const ProxyEpsilon p = proxy_epsilon(spec, 0.4);
    EXPECT_TRUE(p.pass);
    EXPECT_LE(p.epsilon, p.bound);
  }
}

TEST(ProxyEpsilon, UniformWindowReported) {
  const LindbladSpec spec = fixtures::qubit_spec(128, 8.0, 1.0, FilterKind::uniform);
  const ProxyEpsilon p = proxy_epsilon(spec, 1.0);
  EXPECT_TRUE(std::isfinite(p.epsilon));
  EXPECT_GE(p.epsilon, 0.0);
}

TEST(ProxyDefect, VanishesForDavies) {
  const LindbladSpec spec = make_spec(JumpSet({pauli('X')}), fixtures::qubit_context(), 16,
                                      FilterSpec{FilterKind::gaussian, 2.0, {}}, WeightKind::metropolis,
                                      Variant::davies);
  EXPECT_LT(proxy_defect(build_proxy(spec), build_lindbladian(spec), spec.context), 1e-10);
}
