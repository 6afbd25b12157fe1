#include <gtest/gtest.h>

#include <cmath>

#include <json.hpp>

#include "support.hpp"

using namespace qgl;

namespace {

LindbladSpec uniform_hot(int n_points) {
  return make_spec(JumpSet({pauli('X')}), fixtures::qubit_context(0.0), n_points,
                   FilterSpec{FilterKind::uniform, 2.0, {}}, WeightKind::metropolis);
}

LindbladSpec zero_weights(LindbladSpec spec) {
  spec.weight = spec.weight.with_table(std::vector<double>(static_cast<std::size_t>(spec.grid.size()), 0.0));
  return spec;
}

Matrix ground() {
  Matrix rho = Matrix::Zero(2, 2);
  rho(1, 1) = 1.0;
  return rho;
}

}  // namespace

TEST(Primitives, UniformPrep) {
  const SpectralGrid grid = make_grid(4, fixtures::qubit_context());
  const FilterFunction f = make_filter(FilterSpec{FilterKind::uniform, 100.0, {}}, grid);
  const Matrix p = build_prep(f);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(p(i, 0) - 0.5), 0.0, 1e-14);
  EXPECT_LT(operator_norm(p.adjoint() * p - identity(4)), 1e-12);
}

TEST(Primitives, PrepRejectsZero) { EXPECT_THROW(build_prep(Vector(Vector::Zero(4))), NonUnitaryCompletion); }

TEST(Primitives, QftUnitary) {
  for (int n : {2, 8, 32}) {
    const Matrix q = build_qft(n);
    EXPECT_LT(operator_norm(q * q.adjoint() - identity(n)), 1e-12);
  }
}

TEST(Primitives, QftSign) {
  const Matrix q = build_qft(8);
  const SpectralGrid grid(8, 1.0);
  // <w|QFT|t> = e^{-i w t} / sqrt(N) with signed labels and w t measured in grid units
  for (int w = 0; w < 8; ++w)
    for (int t = 0; t < 8; ++t) {
      const Complex expected =
          std::exp(Complex(0, -2.0 * M_PI * grid.label(w) * grid.label(t) / 8.0)) / std::sqrt(8.0);
      EXPECT_LT(std::abs(q(w, t) - expected), 1e-12);
    }
}

TEST(Primitives, YRotation) {
  EXPECT_LT(operator_norm(y_rotation(0.0) - identity(2)), 1e-15);
  const Matrix y = y_rotation(0.3);
  EXPECT_NEAR(y(1, 0).real(), std::sqrt(0.3), 1e-14);
  EXPECT_NEAR(y(0, 0).real(), std::sqrt(0.7), 1e-14);
}

TEST(Primitives, WeightRotationFullWeightLeavesFlag) {
  const std::vector<double> w{1.0, 0.25};
  const Matrix r = build_weight_rot(w);
  // boltzmann qubit first, label |0>: |0>|0> -> sqrt(gamma)|0>|0> + ...
  EXPECT_NEAR(std::abs(r(0, 0)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(r(1, 1)), 0.5, 1e-14);
  EXPECT_LT(operator_norm(r.adjoint() * r - identity(4)), 1e-14);
}

TEST(Primitives, EmbedOperator) {
  const std::vector<int> q{1};
  EXPECT_LT(operator_norm(embed_operator(pauli('X'), q, 2) - pauli_string("IX")), 1e-15);
  const std::vector<int> swapped{1, 0};
  EXPECT_LT(operator_norm(embed_operator(pauli_string("XZ"), swapped, 2) - pauli_string("ZX")), 1e-15);
}

TEST(BlockEncoding, HotUniform) {
  const LindbladSpec spec = uniform_hot(8);
  const BlockEncodingCircuit c = build_block_encoding(spec);
  EXPECT_LT(block_encoding_residual(c, spec), 1e-9);
  EXPECT_LT(c.program.unitarity_residual(), 1e-10);
}

TEST(BlockEncoding, ZeroWeights) {
  const LindbladSpec spec = zero_weights(fixtures::qubit_spec(8, 1.0));
  EXPECT_LT(operator_norm(build_block_encoding(spec).encoding().block()), 1e-12);
}

TEST(BlockEncoding, TestedSizes) {
  for (const LindbladSpec& spec :
       {fixtures::qubit_spec(8, 1.0), fixtures::qubit_spec(16, 1.0), fixtures::chain_spec(8, 1.0)}) {
    const BlockEncodingCircuit c = build_block_encoding(spec);
    EXPECT_LT(block_encoding_residual(c, spec), 1e-9);
    EXPECT_LT(c.program.unitarity_residual(), 1e-10);
  }
}

TEST(BlockEncoding, RejectsNonUnitaryJumps) {
  const LindbladSpec spec = make_spec(JumpSet({Matrix(0.5 * (pauli('X') + pauli('Z')))}), fixtures::qubit_context(), 8,
                                      FilterSpec{FilterKind::gaussian, 1.0, {}}, WeightKind::metropolis);
  EXPECT_THROW(build_block_encoding(spec), NonUnitaryJumps);
}

TEST(BlockEncoding, JsonExport) {
  const BlockEncodingCircuit c = build_block_encoding(fixtures::qubit_spec(8, 1.0));
  const auto j = nlohmann::json::parse(c.program.to_json());
  ASSERT_TRUE(j.contains("gates"));
  EXPECT_EQ(j["gates"].size(), c.program.gates().size());
  for (const auto& g : j["gates"]) {
    EXPECT_TRUE(g.contains("gate_name"));
    EXPECT_TRUE(g.contains("targets"));
    EXPECT_TRUE(g.contains("params"));
  }
}

TEST(DiscriminantBlock, MatchesProxy) {
  for (const LindbladSpec& spec : {fixtures::qubit_spec(8, 1.0), fixtures::qubit_spec(16, 1.0)}) {
    const GateProgram p = build_discriminant_block(build_block_encoding(spec), spec);
    EXPECT_LT(discriminant_block_residual(p, spec), 1e-9);
    const Matrix b = discriminant_block(p, spec.context.dim());
    EXPECT_LT(operator_norm(b - b.adjoint()), 1e-10);
    EXPECT_LT(p.unitarity_residual(), 1e-10);
  }
}

TEST(DiscriminantBlock, ZeroWeightsGiveIdentity) {
  const LindbladSpec spec = zero_weights(fixtures::qubit_spec(8, 1.0));
  const GateProgram p = build_discriminant_block(build_block_encoding(spec), spec);
  EXPECT_LT(operator_norm(discriminant_block(p, 2) - identity(4)), 1e-10);
}

TEST(Reject, IsometryBlockGivesIdentity) {
  const BlockEncoding enc{kron(pauli('X'), identity(2)), 2, 1, 0};
  EXPECT_LT(operator_norm(reject_block(enc) - identity(2)), 1e-10);
}

TEST(Reject, ZeroEncoding) {
  EXPECT_LT(operator_norm(reject_block(build_block_encoding(zero_weights(fixtures::qubit_spec(8, 1.0))).encoding())),
            1e-10);
}

TEST(Reject, MatchesWeightedParseval) {
  const LindbladSpec spec = fixtures::qubit_spec(8, 1.0);
  const OftFamily fam = oft_discrete(spec.jumps, spec.filter, spec.grid, spec.context);
  const Matrix block = reject_block(build_block_encoding(spec).encoding());
  EXPECT_LT(operator_norm(block - fam.sum_adag_a(&spec.weight.table())), 1e-10);
}

TEST(WeakMeasure, ZeroStrength) {
  const BlockEncoding enc = build_block_encoding(fixtures::qubit_spec(8, 1.0)).encoding();
  Rng rng(1);
  const Matrix rho = random_density(2, rng);
  EXPECT_LT(operator_norm(weak_measure_step(enc, 0.0, rho) - rho), 1e-12);
}

TEST(WeakMeasure, ChannelIsCptp) {
  const BlockEncoding enc = build_block_encoding(fixtures::chain_spec(8, 1.0)).encoding();
  for (double delta : {0.01, 0.1, 0.5}) {
    const Matrix ch = weak_measure_channel(enc, delta);
    EXPECT_GT(eig_hermitian(choi_matrix(ch)).values.minCoeff(), -1e-9);
    EXPECT_LT((vec(identity(4)).adjoint() * ch - vec(identity(4)).adjoint()).norm(), 1e-10);
  }
}

TEST(WeakMeasure, SecondOrderSteps) {
  const LindbladSpec spec = fixtures::qubit_spec(8, 1.0);
  const BlockEncoding enc = build_block_encoding(spec).encoding();
  const Superoperator l = build_lindbladian(spec);
  std::vector<double> errors;
  const std::vector<double> deltas{0.1, 0.05, 0.025, 0.0125};
  for (double d : deltas) errors.push_back(trace_distance(weak_measure_step(enc, d, ground()), evolve(l, ground(), d)));
  const double slope = std::log(errors.back() / errors.front()) / std::log(deltas.back() / deltas.front());
  EXPECT_NEAR(slope, 2.0, 0.3);
  EXPECT_LT(trace_distance(weak_measure_evolve(enc, 0.01, ground(), 100), evolve(l, ground(), 1.0)), 0.05);
}

TEST(WeakMeasure, RandomizedSingleGadget) {
  const BlockEncoding enc = build_block_encoding(fixtures::qubit_spec(8, 1.0)).encoding();
  const std::vector<BlockEncoding> gadgets{enc};
  const std::vector<double> probs{1.0};
  const RandomizedResult r = weak_measure_randomized(gadgets, probs, 0.05, ground(), 10, 20, 3);
  EXPECT_LT(operator_norm(r.mean - weak_measure_evolve(enc, 0.05, ground(), 10)), 1e-12);
}

TEST(WeakMeasure, RandomizedMatchesAverageChannel) {
  auto gadget = [](char p) {
    return build_block_encoding(make_spec(JumpSet({pauli(p)}), fixtures::qubit_context(), 8,
                                          FilterSpec{FilterKind::gaussian, 1.0, {}}, WeightKind::metropolis))
        .encoding();
  };
  const std::vector<BlockEncoding> gadgets{gadget('X'), gadget('Z')};
  const std::vector<double> probs{0.5, 0.5};
  const double delta = 0.05;
  const int steps = 10;
  const RandomizedResult r = weak_measure_randomized(gadgets, probs, delta, ground(), steps, 1000, 7);

  const Matrix avg = 0.5 * (weak_measure_channel(gadgets[0], delta) + weak_measure_channel(gadgets[1], delta));
  Vector v = vec(ground());
  for (int s = 0; s < steps; ++s) v = avg * v;
  const Matrix expected = unvec(v);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      EXPECT_LE(std::abs(r.mean(i, j) - expected(i, j)), 3.0 * r.standard_error(i, j).real() + 1e-12);

  // Full-generator gadget on {X, Z} / sqrt(2) agrees up to the per-step second-order error.
  const LindbladSpec both = make_spec(normalized_jumps({pauli('X'), pauli('Z')}), fixtures::qubit_context(), 8,
                                      FilterSpec{FilterKind::gaussian, 1.0, {}}, WeightKind::metropolis);
  const Matrix full = weak_measure_evolve(build_block_encoding(both).encoding(), delta, ground(), steps);
  EXPECT_LT(trace_distance(r.mean, full), steps * delta * delta + 5.0 * r.standard_error.cwiseAbs().maxCoeff());
}

TEST(WeakMeasure, ZeroProbabilityNeverSampled) {
  const BlockEncoding enc = build_block_encoding(fixtures::qubit_spec(8, 1.0)).encoding();
  const std::vector<BlockEncoding> gadgets{enc, enc};
  const std::vector<double> probs{1.0, 0.0};
  const RandomizedResult r = weak_measure_randomized(gadgets, probs, 0.1, ground(), 5, 50, 1);
  EXPECT_EQ(r.counts[1], 0);
  EXPECT_EQ(r.counts[0], 250);
}

TEST(WeakMeasure, ProbabilitiesMustSumToOne) {
  const BlockEncoding enc = build_block_encoding(fixtures::qubit_spec(8, 1.0)).encoding();
  const std::vector<BlockEncoding> gadgets{enc};
  const std::vector<double> probs{0.5};
  EXPECT_THROW(weak_measure_randomized(gadgets, probs, 0.1, ground(), 1, 1, 1), PreconditionFailed);
}

TEST(Anneal, SingleSmallStep) {
  const LindbladSpec spec = fixtures::qubit_spec(256, 16.0, 0.1);
  const auto path = anneal_path(spec, 1);
  ASSERT_EQ(path.size(), 2u);
  EXPECT_GT(path[0].overlap, 0.99);
}

TEST(Anneal, QubitOverlaps) {
  const auto path = anneal_path(fixtures::qubit_spec(256, 16.0), 2);
  ASSERT_EQ(path.size(), 3u);
  for (const AnnealPoint& p : path) {
    EXPECT_TRUE(p.precondition);
    EXPECT_TRUE(p.pass);
  }
  EXPECT_GE(path[0].overlap, 0.6);
  EXPECT_GE(path[1].overlap, 0.6);
}

TEST(Anneal, InfiniteTemperatureEndpoint) {
  const auto path = anneal_path(fixtures::qubit_spec(64, 5.0), 2);
  EXPECT_LT(path.front().eigvec_dist, 1e-8);
}

TEST(Anneal, RejectsZeroSteps) { EXPECT_THROW(anneal_path(fixtures::qubit_spec(), 0), PreconditionFailed); }
