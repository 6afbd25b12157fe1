#include "qgl/discriminant.hpp"

#include <cmath>

namespace qgl {

namespace {

Matrix conjugation(const Matrix& left_factor) { return kron(left_factor, left_factor.transpose()); }

Matrix from_powers(const Matrix& generator_dense, const Matrix& rho_minus, const Matrix& rho_plus) {
  return conjugation(rho_minus) * generator_dense * conjugation(rho_plus);
}

std::vector<double> partner_weights(const std::vector<double>& table, const SpectralGrid& grid) {
  std::vector<double> out(table.size());
  for (int k = 0; k < grid.size(); ++k)
    out[static_cast<std::size_t>(k)] = table[static_cast<std::size_t>(grid.index(-grid.label(k)))];
  return out;
}

void add_proxy_term(Matrix& d, double cross, double diag, const Matrix& op) {
  const auto n = op.rows();
  const Matrix id = Matrix::Identity(n, n);
  if (cross != 0.0) d.noalias() += cross * kron(op, op.conjugate());
  if (diag != 0.0) {
    const Matrix prod = op.adjoint() * op;
    d.noalias() -= 0.5 * diag * (kron(prod, id) + kron(id, prod.transpose()));
  }
}

Matrix symmetrized(const Matrix& d) {
  const double residual = operator_norm(d - d.adjoint());
  if (residual >= 1e-12)
    throw SymmetryViolation("proxy Hermiticity residual " + std::to_string(residual) + " exceeds 1e-12");
  return (d + d.adjoint()) / 2.0;
}

}  // namespace

Matrix similarity_discriminant(const Matrix& generator_dense, const GibbsContext& ctx) {
  return from_powers(generator_dense, ctx.rho_power(-0.25), ctx.rho_power(0.25));
}

Matrix similarity_discriminant(const Superoperator& generator, const GibbsContext& ctx) {
  return similarity_discriminant(generator.dense(), ctx);
}

Matrix similarity_discriminant(const Superoperator& generator, const Matrix& rho) {
  Matrix minus;
  try {
    minus = matrix_power(rho, -0.25);
  } catch (const SingularNegativePower& e) {
    throw SingularState(e.what());
  }
  return from_powers(generator.dense(), minus, matrix_power(rho, 0.25));
}

DiscriminantReport analyze_discriminant(const Superoperator& generator, const GibbsContext& ctx) {
  DiscriminantReport r;
  r.d = similarity_discriminant(generator, ctx);
  r.h_part = (r.d + r.d.adjoint()) / 2.0;
  r.a_part = (r.d - r.d.adjoint()) / 2.0;
  r.adb_norm = operator_norm(r.a_part);
  const EigenSystem es = eig_hermitian(r.h_part);
  r.lambda1 = es.values(0);
  r.top_vector = es.vectors.col(0);
  r.gap = es.values.size() > 1 ? es.values(0) - es.values(1) : 0.0;
  return r;
}

double adb_norm(const Superoperator& generator, const GibbsContext& ctx) {
  const Matrix d = similarity_discriminant(generator, ctx);
  return operator_norm((d - d.adjoint()) / 2.0);
}

Matrix proxy_from_family(const OftFamily& family, std::span<const double> weights, const SpectralGrid& grid) {
  std::vector<double> table(weights.begin(), weights.end());
  const std::vector<double> partner = partner_weights(table, grid);
  const auto d = family.dim();
  Matrix out = Matrix::Zero(d * d, d * d);
  for (int a = 0; a < family.jump_count(); ++a)
    for (int k = 0; k < family.grid_size(); ++k) {
      const double g = table[static_cast<std::size_t>(k)];
      const double cross = std::sqrt(g * partner[static_cast<std::size_t>(k)]);
      add_proxy_term(out, cross, g, family.at(a, k));
    }
  return out;
}

Matrix build_proxy(const LindbladSpec& spec) {
  if (!spec.jumps.adjoint_closed()) throw SymmetryViolation("jump set is not closed under adjoints");
  if (!spec.filter.is_real()) throw SymmetryViolation("filter is not real");
  if (spec.variant == Variant::davies) return symmetrized(davies_proxy(spec.jumps, weight_fn(spec.weight), spec.context));
  if (spec.variant != Variant::discrete) throw IncompatibleSpec("proxy is built for the discrete or Davies variants");
  const OftFamily family = oft_discrete(spec.jumps, spec.filter, spec.grid, spec.context);
  return symmetrized(proxy_from_family(family, spec.weight.table(), spec.grid));
}

Matrix generic_proxy(std::span<const Matrix> lindblad_ops, std::span<const int> permutation) {
  if (lindblad_ops.size() != permutation.size()) throw DimensionMismatch("permutation size differs from operator list");
  if (lindblad_ops.empty()) return Matrix::Zero(0, 0);
  const auto n = static_cast<int>(lindblad_ops.size());
  for (int j = 0; j < n; ++j) {
    const int p = permutation[static_cast<std::size_t>(j)];
    if (p < 0 || p >= n || permutation[static_cast<std::size_t>(p)] != j)
      throw SymmetryViolation("permutation is not an involution");
  }
  const auto d = lindblad_ops.front().rows();
  const Matrix id = Matrix::Identity(d, d);
  Matrix out = Matrix::Zero(d * d, d * d);
  for (int j = 0; j < n; ++j) {
    const Matrix& l = lindblad_ops[static_cast<std::size_t>(j)];
    const Matrix& lp = lindblad_ops[static_cast<std::size_t>(permutation[static_cast<std::size_t>(j)])];
    const Matrix prod = l.adjoint() * l;
    out.noalias() += 0.5 * (kron(l, lp.transpose()) + kron(l.adjoint(), lp.conjugate()) - kron(prod, id) -
                            kron(id, prod.transpose()));
  }
  return out;
}

Matrix davies_proxy(const JumpSet& jumps, const WeightFn& gamma, const GibbsContext& ctx) {
  const auto d = ctx.dim();
  Matrix out = Matrix::Zero(d * d, d * d);
  for (const auto& a : jumps.ops())
    for (const auto& comp : ctx.bohr_decompose(a)) {
      const double g = gamma(comp.nu);
      add_proxy_term(out, std::sqrt(g * gamma(-comp.nu)), g, comp.op);
    }
  return out;
}

double proxy_defect(const Matrix& proxy, const Superoperator& generator, const GibbsContext& ctx) {
  const Matrix disc = similarity_discriminant(generator, ctx);
  return operator_norm(proxy - disc.adjoint());
}

ProxyEpsilon proxy_epsilon(const LindbladSpec& spec, double mu) {
  ProxyEpsilon r;
  r.beta_mu = spec.context.beta() * mu;
  if (r.beta_mu > 1.0) throw PreconditionBetaMu("beta * mu = " + std::to_string(r.beta_mu) + " exceeds 1");
  if (!spec.jumps.adjoint_closed()) throw SymmetryViolation("jump set is not closed under adjoints");
  if (!spec.filter.is_real()) throw SymmetryViolation("filter is not real");
  const SecularParts parts = secular_parts(spec, mu);
  const Matrix proxy = symmetrized(proxy_from_family(parts.family, spec.weight.table(), spec.grid));
  r.epsilon = proxy_defect(proxy, parts.generator, parts.rounded);
  const Matrix weighted = parts.family.sum_adag_a(&spec.weight.table());
  r.bound = 132.0 * r.beta_mu * operator_norm(weighted);
  r.pass = r.epsilon <= r.bound * (1.0 + 1e-9);
  return r;
}

}  // namespace qgl
