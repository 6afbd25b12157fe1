#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace qgl;

namespace {

Superoperator qubit_davies(double beta = 1.0) {
  const LindbladSpec spec = fixtures::qubit_spec(8, 1.0, beta);
  return build_davies(spec.jumps, weight_fn(spec.weight), spec.context);
}

Matrix excited() {
  Matrix rho = Matrix::Zero(2, 2);
  rho(0, 0) = 1.0;
  return rho;
}

}  // namespace

TEST(Evolve, ZeroTime) {
  const Superoperator l = build_lindbladian(fixtures::qubit_spec());
  EXPECT_LT(operator_norm(evolve(l, excited(), 0.0) - excited()), 1e-15);
  EXPECT_THROW(propagator(l, -1.0), PreconditionFailed);
}

TEST(Evolve, DaviesThermalizes) {
  EXPECT_LT(operator_norm(evolve(qubit_davies(), excited(), 100.0) - fixtures::gibbs_qubit(1.0)), 1e-8);
}

TEST(Evolve, DepolarizerShrinksBloch) {
  for (double t : {0.1, 0.5, 2.0}) {
    const Matrix out = evolve(fixtures::depolarizer(), excited(), t);
    EXPECT_NEAR((out * pauli('Z')).trace().real(), std::exp(-4.0 * t / 3.0), 1e-12);
  }
}

TEST(Evolve, SemigroupProperty) {
  const Superoperator l = build_lindbladian(fixtures::qubit_spec());
  EXPECT_LT(operator_norm(propagator(l, 0.3) * propagator(l, 0.4) - propagator(l, 0.7)), 1e-12);
}

TEST(FixedPoint, Davies) {
  const Matrix fp = fixed_point(qubit_davies());
  EXPECT_NEAR(fp(0, 0).real(), 0.1192029, 1e-7);
  EXPECT_NEAR(fp(1, 1).real(), 0.8807971, 1e-7);
}

TEST(FixedPoint, InfiniteTemperature) {
  EXPECT_LT(operator_norm(fixed_point(build_lindbladian(fixtures::qubit_spec(64, 5.0, 0.0))) - identity(2) / 2.0),
            1e-12);
}

TEST(FixedPoint, ImprovesWithWidth) {
  const Matrix rho = fixtures::gibbs_qubit(1.0);
  EXPECT_LT(trace_norm(fixed_point(build_lindbladian(fixtures::qubit_spec(128, 10.0))) - rho),
            trace_norm(fixed_point(build_lindbladian(fixtures::qubit_spec(128, 5.0))) - rho));
}

TEST(FixedPoint, DegenerateKernel) { EXPECT_THROW(fixed_point(Superoperator(2)), DegenerateKernel); }

TEST(FixedPoint, IsStationaryState) {
  const Superoperator l = build_lindbladian(fixtures::chain_spec());
  const Matrix fp = fixed_point(l);
  EXPECT_LT(operator_norm(l.apply(fp)), 1e-10);
  EXPECT_NEAR(fp.trace().real(), 1.0, 1e-12);
  EXPECT_GT(eig_hermitian(fp).values.minCoeff(), -1e-12);
}

TEST(Mixing, Depolarizer) {
  const double expected = 0.75 * std::log(2.0);
  EXPECT_NEAR(mixing_time(fixtures::depolarizer()).t_mix, expected, 0.02 * expected);
}

TEST(Mixing, TimeRescaling) {
  const Superoperator l = build_lindbladian(fixtures::qubit_spec());
  const double t1 = mixing_time(l).t_mix;
  const double t2 = mixing_time(Complex(2.0) * l).t_mix;
  EXPECT_NEAR(t2, t1 / 2.0, 0.02 * t1 / 2.0);
}

TEST(Mixing, DaviesSpectralBound) {
  const GibbsContext ctx = fixtures::qubit_context();
  const MixingReport r = mixing_time(qubit_davies(), ctx);
  ASSERT_TRUE(r.gaps.has_value());
  const double bound = std::log(2.0 * operator_norm(ctx.rho_power(-0.5))) / r.gaps->gap;
  EXPECT_LE(r.t_mix, bound);
}

TEST(Mixing, ContractionIsMonotone) {
  const Superoperator l = build_lindbladian(fixtures::qubit_spec());
  MixingOptions opt;
  opt.samples = 500;
  double prev = 2.0;
  for (double t : {0.1, 0.5, 1.0, 2.0, 4.0}) {
    const double c = worst_contraction(l, t, opt);
    EXPECT_LE(c, prev + 1e-12);
    EXPECT_LE(c, 1.0 + 1e-12);
    prev = c;
  }
}

TEST(Mixing, NotMixed) {
  Superoperator slow(2);
  slow.add_dissipator(1e-9, pauli('X'));
  slow.add_dissipator(1e-9, pauli('Z'));
  MixingOptions opt;
  opt.t_max = 10.0;
  EXPECT_THROW(mixing_time(slow, opt), NotMixed);
}

TEST(Eigvec, ExactDetailedBalance) {
  const LindbladSpec spec = fixtures::qubit_spec();
  const Matrix d = davies_proxy(spec.jumps, weight_fn(spec.weight), spec.context);
  EXPECT_LT(top_eigvec_compare(d, spec.context).distance, 1e-8);
}

TEST(Eigvec, ScanDecreasesWithinBound) {
  double prev = 1e300;
  for (double s : {2.0, 4.0, 8.0, 16.0}) {
    const LindbladSpec spec = fixtures::qubit_spec(256, s);
    const Matrix proxy = build_proxy(spec);
    const EigvecComparison c = top_eigvec_compare(proxy, spec.context);
    const double eps = proxy_defect(proxy, build_lindbladian(spec), spec.context);
    EXPECT_LT(c.distance, prev) << s;
    EXPECT_LE(c.distance, 4.0 * std::sqrt(2.0) * eps / c.gap) << s;
    prev = c.distance;
  }
}

TEST(Bounds, DaviesAllPass) {
  for (const BoundEntry& e : bound_suite(qubit_davies(), fixtures::qubit_context())) {
    if (e.skipped) continue;
    EXPECT_TRUE(e.pass) << e.name << " " << e.lhs << " " << e.rhs;
  }
}

TEST(Bounds, ExactGeneratorHasZeroFixedPointBound) {
  for (const BoundEntry& e : bound_suite(qubit_davies(), fixtures::qubit_context())) {
    if (e.name != "fixed_point_mix" && e.name != "fixed_point_gap") continue;
    ASSERT_FALSE(e.skipped) << e.name;
    EXPECT_LT(e.rhs, 1e-9);
    EXPECT_LT(e.lhs, 1e-9);
  }
}

TEST(Bounds, BauerFikeOnGaussian) {
  const LindbladSpec spec = fixtures::qubit_spec();
  bool seen = false;
  for (const BoundEntry& e : bound_suite(build_lindbladian(spec), spec.context)) {
    if (e.name != "bauer_fike") continue;
    seen = true;
    EXPECT_TRUE(e.pass);
  }
  EXPECT_TRUE(seen);
}

TEST(Bounds, HoldsRule) {
  EXPECT_TRUE(bound_holds(1.0, 1.0));
  EXPECT_TRUE(bound_holds(0.0, 0.0));
  EXPECT_FALSE(bound_holds(1.0 + 1e-6, 1.0));
}
