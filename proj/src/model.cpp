#include "qgl/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace qgl {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_qubits(int n) {
  if (n < 1) throw DimensionMismatch("hamiltonian needs at least one qubit");
  if (n > kMaxQubits) throw TooLarge("hamiltonian on " + std::to_string(n) + " qubits exceeds the limit of " +
                                     std::to_string(kMaxQubits));
}

Matrix z_on(int n, int site) {
  std::string labels(static_cast<std::size_t>(n), 'I');
  labels[static_cast<std::size_t>(site)] = 'Z';
  return pauli_string(labels);
}

double param_at(const std::vector<double>& values, int i) {
  if (values.empty()) return 0.0;
  if (values.size() == 1) return values.front();
  return i < static_cast<int>(values.size()) ? values[static_cast<std::size_t>(i)] : 0.0;
}

}  // namespace

Matrix build_hamiltonian(const HamiltonianSpec& spec) {
  return std::visit(
      Overloaded{
          [](const PauliZChain& c) {
            check_qubits(c.n);
            const int d = 1 << c.n;
            Matrix h = Matrix::Zero(d, d);
            for (int i = 0; i + 1 < c.n; ++i) h += param_at(c.couplings, i) * z_on(c.n, i) * z_on(c.n, i + 1);
            for (int i = 0; i < c.n; ++i) h += param_at(c.fields, i) * z_on(c.n, i);
            return h;
          },
          [](const ExplicitMatrix& e) {
            if (e.matrix.rows() != e.matrix.cols()) throw DimensionMismatch("hamiltonian matrix not square");
            check_qubits(qubit_count(e.matrix.rows()));
            if (hermitian_residual(e.matrix) > 1e-12) throw NonHermitianInput("hamiltonian matrix not Hermitian");
            return Matrix((e.matrix + e.matrix.adjoint()) / 2.0);
          },
          [](const RandomHermitian& r) {
            check_qubits(r.n);
            Rng rng(r.seed);
            Matrix h = random_hermitian(1 << r.n, rng);
            return Matrix(h / operator_norm(h));
          },
      },
      spec);
}

GibbsContext::GibbsContext(Matrix hamiltonian, double beta) : h_(std::move(hamiltonian)), beta_(beta) {
  if (beta < 0.0 || !std::isfinite(beta)) throw DimensionMismatch("beta must be finite and non-negative");
  eig_ = eig_hermitian(h_);
  const int d = dim();
  norm_ = eig_.values.cwiseAbs().maxCoeff();

  // shift by the ground energy before exponentiating
  const double e_min = eig_.values(d - 1);
  pops_.resize(d);
  for (int i = 0; i < d; ++i) pops_(i) = std::exp(-beta_ * (eig_.values(i) - e_min));
  pops_ /= pops_.sum();
  rho_ = eig_.vectors * pops_.cast<Complex>().asDiagonal() * eig_.vectors.adjoint();
  rho_ = (rho_ + rho_.adjoint()) / 2.0;

  purification_ = Vector::Zero(static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i)
    purification_ += std::sqrt(pops_(i)) * kron(eig_.vectors.col(i), eig_.vectors.col(i).conjugate());

  // cluster E_i - E_j
  const double tol = kDegeneracyTol * std::max(norm_, 1.0);
  struct PairDiff {
    double diff;
    int pair;
  };
  std::vector<PairDiff> diffs;
  diffs.reserve(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) diffs.push_back({eig_.values(i) - eig_.values(j), i * d + j});
  std::sort(diffs.begin(), diffs.end(), [](const PairDiff& a, const PairDiff& b) { return a.diff < b.diff; });
  pair_bohr_.assign(diffs.size(), 0);
  std::size_t start = 0;
  while (start < diffs.size()) {
    std::size_t stop = start + 1;
    while (stop < diffs.size() && diffs[stop].diff - diffs[stop - 1].diff <= tol) ++stop;
    double rep = 0.0;
    bool has_diagonal = false;
    for (std::size_t k = start; k < stop; ++k) {
      rep += diffs[k].diff;
      const int i = diffs[k].pair / d;
      const int j = diffs[k].pair % d;
      has_diagonal = has_diagonal || i == j;
    }
    rep = has_diagonal ? 0.0 : rep / static_cast<double>(stop - start);
    const int cluster = static_cast<int>(bohr_.size());
    bohr_.push_back(rep);
    for (std::size_t k = start; k < stop; ++k) pair_bohr_[static_cast<std::size_t>(diffs[k].pair)] = cluster;
    start = stop;
  }
}

Matrix GibbsContext::rho_power(double p) const {
  const int d = dim();
  RealVector powered(d);
  for (int i = 0; i < d; ++i) {
    if (p < 0.0 && pops_(i) <= 1e-14) throw SingularState("state has eigenvalue below 1e-14");
    powered(i) = std::pow(pops_(i), p);
  }
  return eig_.vectors * powered.cast<Complex>().asDiagonal() * eig_.vectors.adjoint();
}

std::vector<BohrComponent> GibbsContext::bohr_decompose(const Matrix& a) const {
  if (a.rows() != dim() || a.cols() != dim()) throw DimensionMismatch("bohr_decompose: operator dimension mismatch");
  const Matrix tilde = to_eigenbasis(a);
  const int d = dim();
  std::vector<Matrix> parts(bohr_.size(), Matrix::Zero(d, d));
  std::vector<bool> used(bohr_.size(), false);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const auto k = static_cast<std::size_t>(bohr_index(i, j));
      parts[k](i, j) = tilde(i, j);
      used[k] = true;
    }
  std::vector<BohrComponent> out;
  for (std::size_t k = 0; k < bohr_.size(); ++k) {
    if (!used[k] || parts[k].cwiseAbs().maxCoeff() == 0.0) continue;
    out.push_back({bohr_[k], from_eigenbasis(parts[k])});
  }
  return out;
}

Matrix GibbsContext::heisenberg(const Matrix& a, double t) const {
  const int d = dim();
  Vector phase(d);
  for (int i = 0; i < d; ++i) phase(i) = std::exp(Complex(0.0, eig_.values(i) * t));
  const Matrix u = eig_.vectors * phase.asDiagonal() * eig_.vectors.adjoint();
  return u * a * u.adjoint();
}

GibbsContext make_context(const Matrix& hamiltonian, double beta) { return GibbsContext(hamiltonian, beta); }

Matrix round_hamiltonian(const GibbsContext& ctx, double omega0) {
  if (omega0 <= 0.0) throw DimensionMismatch("omega0 must be positive");
  const RealVector& e = ctx.energies();
  RealVector rounded(e.size());
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    const double steps = std::floor(std::abs(e(i)) / omega0 + 1e-9);
    rounded(i) = std::copysign(steps * omega0, e(i));
  }
  const Matrix& v = ctx.basis();
  Matrix hbar = v * rounded.cast<Complex>().asDiagonal() * v.adjoint();
  return (hbar + hbar.adjoint()) / 2.0;
}

SpectralGrid::SpectralGrid(int n_points, double omega0)
    : n_(n_points), omega0_(omega0), t0_(2.0 * std::numbers::pi / (n_points * omega0)) {
  if (!is_power_of_two(n_points)) throw DimensionMismatch("grid size must be a power of two");
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw DimensionMismatch("omega0 must be positive");
}

double required_range(const GibbsContext& ctx) {
  return 4.0 * ctx.hamiltonian_norm() + (ctx.beta() > 0.0 ? 2.0 / ctx.beta() : 0.0);
}

SpectralGrid make_grid(int n_points, const GibbsContext& ctx, std::optional<double> omega0) {
  if (omega0) {
    if (*omega0 * n_points < required_range(ctx) * (1.0 - 1e-12))
      throw RangeTooSmall("N*omega0 = " + std::to_string(*omega0 * n_points) + " is below the required range " +
                          std::to_string(required_range(ctx)));
    return SpectralGrid(n_points, *omega0);
  }
  // beta = 0 has no thermal width term; use the beta = 1 value
  const double range = 4.0 * ctx.hamiltonian_norm() + (ctx.beta() > 0.0 ? 2.0 / ctx.beta() : 2.0);
  return SpectralGrid(n_points, range / n_points);
}

FilterFunction::FilterFunction(FilterSpec spec, const SpectralGrid& grid, bool normalize) : spec_(std::move(spec)) {
  const int n = grid.size();
  values_ = Vector::Zero(n);
  times_.resize(n);
  for (int k = 0; k < n; ++k) times_(k) = grid.time(k);
  switch (spec_.kind) {
    case FilterKind::gaussian: {
      if (!(spec_.param > 0.0)) throw DimensionMismatch("gaussian filter needs sigma_t > 0");
      for (int k = 0; k < n; ++k)
        values_(k) = std::exp(-times_(k) * times_(k) / (4.0 * spec_.param * spec_.param));
      break;
    }
    case FilterKind::uniform: {
      if (!(spec_.param > 0.0)) throw DimensionMismatch("uniform filter needs T > 0");
      const double slack = 1e-9 * grid.t0();
      for (int k = 0; k < n; ++k)
        if (times_(k) >= -spec_.param - slack && times_(k) < spec_.param - slack) values_(k) = 1.0;
      if (values_.norm() == 0.0) values_(0) = 1.0;
      break;
    }
    case FilterKind::explicit_samples: {
      if (static_cast<int>(spec_.samples.size()) != n)
        throw DimensionMismatch("explicit filter needs one sample per grid point");
      for (int k = 0; k < n; ++k) values_(k) = spec_.samples[static_cast<std::size_t>(k)];
      break;
    }
  }
  const double nrm = values_.norm();
  if (nrm == 0.0 && normalize) throw DimensionMismatch("filter is identically zero");
  if (normalize) values_ /= nrm;
  real_ = values_.imag().cwiseAbs().maxCoeff() < 1e-14;
  if (real_) values_ = values_.real().cast<Complex>();
}

Complex FilterFunction::hat(double x) const {
  Complex acc = 0.0;
  for (Eigen::Index k = 0; k < values_.size(); ++k) {
    if (values_(k) == Complex(0.0)) continue;
    acc += std::exp(Complex(0.0, -x * times_(k))) * values_(k);
  }
  return acc / std::sqrt(static_cast<double>(values_.size()));
}

FilterFunction make_filter(const FilterSpec& spec, const SpectralGrid& grid) { return FilterFunction(spec, grid); }

double weight_function(WeightKind kind, double beta, double omega) {
  switch (kind) {
    case WeightKind::metropolis: return std::min(1.0, std::exp(-beta * omega));
    case WeightKind::glauber: {
      const double x = beta * omega;
      return x > 0 ? std::exp(-x) / (1.0 + std::exp(-x)) : 1.0 / (std::exp(x) + 1.0);
    }
    case WeightKind::custom: break;
  }
  throw UnsupportedFilter("custom weight tables have no continuous profile");
}

TransitionWeight::TransitionWeight(WeightKind kind, double beta, const SpectralGrid& grid)
    : kind_(kind), beta_(beta), table_(static_cast<std::size_t>(grid.size()), 0.0) {
  if (kind == WeightKind::custom) throw DimensionMismatch("custom weights need a table");
  for (int k = 0; k < grid.size(); ++k)
    table_[static_cast<std::size_t>(k)] = grid.has_partner(k) ? weight_function(kind, beta, grid.energy(k)) : 0.0;
}

TransitionWeight::TransitionWeight(std::vector<double> table, double beta, const SpectralGrid& grid)
    : kind_(WeightKind::custom), beta_(beta), table_(std::move(table)) {
  if (static_cast<int>(table_.size()) != grid.size()) throw DimensionMismatch("weight table size differs from grid");
  for (double g : table_)
    if (g < 0.0 || g > 1.0) throw DimensionMismatch("weight values must lie in [0, 1]");
}

double TransitionWeight::value(double omega) const { return weight_function(kind_, beta_, omega); }

TransitionWeight TransitionWeight::with_table(std::vector<double> table) const {
  TransitionWeight out = *this;
  if (table.size() != table_.size()) throw DimensionMismatch("weight table size differs from grid");
  out.table_ = std::move(table);
  return out;
}

TransitionWeight make_weight(WeightKind kind, double beta, const SpectralGrid& grid) {
  return TransitionWeight(kind, beta, grid);
}

double kms_residual(const TransitionWeight& w, const SpectralGrid& grid) {
  double worst = 0.0;
  for (int k = 0; k < grid.size(); ++k) {
    if (!grid.has_partner(k)) continue;
    const int partner = grid.index(-grid.label(k));
    const double r = std::abs(w.at_index(k) - std::exp(-w.beta() * grid.energy(k)) * w.at_index(partner));
    worst = std::max(worst, r);
  }
  return worst;
}

JumpSet::JumpSet(std::vector<Matrix> jumps, Normalization mode) : jumps_(std::move(jumps)), mode_(mode) {
  if (jumps_.empty()) throw DimensionMismatch("jump set is empty");
  dim_ = static_cast<int>(jumps_.front().rows());
  for (const auto& a : jumps_)
    if (a.rows() != dim_ || a.cols() != dim_) throw DimensionMismatch("jumps have inconsistent dimensions");
  norm_ = operator_norm(sum_adag_a());
  if (mode_ == Normalization::algorithmic) {
    if (norm_ > 1.0 + 1e-12)
      throw InstanceError("jump normalization ||sum A^dag A|| = " + std::to_string(norm_) + " exceeds 1");
  } else {
    for (const auto& a : jumps_)
      if (operator_norm(a) > 1.0 + 1e-12) throw InstanceError("physical jumps need operator norm at most 1");
  }
  const int m = size();
  std::vector<int> perm(static_cast<std::size_t>(m), -1);
  bool closed = true;
  for (int a = 0; a < m && closed; ++a) {
    const Matrix adj = jumps_[static_cast<std::size_t>(a)].adjoint();
    // prefer a itself for Hermitian jumps
    for (int b = 0; b < m; ++b) {
      const int cand = (a + b) % m;
      if ((jumps_[static_cast<std::size_t>(cand)] - adj).cwiseAbs().maxCoeff() < 1e-12) {
        perm[static_cast<std::size_t>(a)] = cand;
        break;
      }
    }
    closed = perm[static_cast<std::size_t>(a)] >= 0;
  }
  if (closed) {
    for (int a = 0; a < m; ++a)
      if (perm[static_cast<std::size_t>(perm[static_cast<std::size_t>(a)])] != a) closed = false;
  }
  if (closed) perm_ = std::move(perm);
}

Matrix JumpSet::sum_adag_a() const {
  Matrix s = Matrix::Zero(dim_, dim_);
  for (const auto& a : jumps_) s += a.adjoint() * a;
  return s;
}

JumpSet normalized_jumps(std::vector<Matrix> jumps) {
  if (jumps.empty()) throw DimensionMismatch("jump set is empty");
  Matrix s = Matrix::Zero(jumps.front().rows(), jumps.front().cols());
  for (const auto& a : jumps) s += a.adjoint() * a;
  const double nrm = operator_norm(s);
  if (nrm > 0.0)
    for (auto& a : jumps) a /= std::sqrt(nrm);
  return JumpSet(std::move(jumps));
}

}  // namespace qgl
