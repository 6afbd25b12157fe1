#include "qgl/oft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qgl {

namespace {

constexpr double kPi = std::numbers::pi;

void check_jump_dims(std::span<const Matrix> jumps, int dim) {
  if (jumps.empty()) throw DimensionMismatch("empty jump list");
  for (const auto& a : jumps)
    if (a.rows() != dim || a.cols() != dim) throw DimensionMismatch("jump dimension differs from Hamiltonian");
}

// f_hat(w_k - nu_c) for every grid index k and Bohr cluster c.
std::vector<std::vector<Complex>> hat_table(const FilterFunction& filter, const SpectralGrid& grid,
                                            const GibbsContext& ctx) {
  const auto& bohr = ctx.bohr_frequencies();
  std::vector<std::vector<Complex>> table(static_cast<std::size_t>(grid.size()),
                                          std::vector<Complex>(bohr.size()));
  for (int k = 0; k < grid.size(); ++k)
    for (std::size_t c = 0; c < bohr.size(); ++c)
      table[static_cast<std::size_t>(k)][c] = filter.hat(grid.energy(k) - bohr[c]);
  return table;
}

Matrix weighted_in_eigenbasis(const Matrix& tilde, const GibbsContext& ctx, const std::vector<Complex>& weights) {
  const int d = ctx.dim();
  Matrix out(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out(i, j) = tilde(i, j) * weights[static_cast<std::size_t>(ctx.bohr_index(i, j))];
  return ctx.from_eigenbasis(out);
}

}  // namespace

OftFamily::OftFamily(std::vector<Matrix> jumps, SpectralGrid grid, FilterFunction filter,
                     std::vector<std::vector<Matrix>> entries, std::optional<double> secular_mu)
    : jumps_(std::move(jumps)),
      grid_(grid),
      filter_(std::move(filter)),
      entries_(std::move(entries)),
      mu_(secular_mu) {}

Matrix OftFamily::sum_adag_a(const std::vector<double>* weights) const {
  Matrix s = Matrix::Zero(dim(), dim());
  for (int a = 0; a < jump_count(); ++a)
    for (int k = 0; k < grid_size(); ++k) {
      const double w = weights ? (*weights)[static_cast<std::size_t>(k)] : 1.0;
      if (w == 0.0) continue;
      s.noalias() += w * at(a, k).adjoint() * at(a, k);
    }
  return s;
}

OftFamily oft_discrete(std::span<const Matrix> jumps, const FilterFunction& filter, const SpectralGrid& grid,
                       const GibbsContext& ctx) {
  check_jump_dims(jumps, ctx.dim());
  if (filter.size() != grid.size()) throw DimensionMismatch("filter is not defined on this grid");
  const auto table = hat_table(filter, grid, ctx);
  std::vector<std::vector<Matrix>> entries;
  entries.reserve(jumps.size());
  for (const auto& a : jumps) {
    const Matrix tilde = ctx.to_eigenbasis(a);
    std::vector<Matrix> row;
    row.reserve(static_cast<std::size_t>(grid.size()));
    for (int k = 0; k < grid.size(); ++k) row.push_back(weighted_in_eigenbasis(tilde, ctx, table[static_cast<std::size_t>(k)]));
    entries.push_back(std::move(row));
  }
  return OftFamily(std::vector<Matrix>(jumps.begin(), jumps.end()), grid, filter, std::move(entries));
}

OftFamily oft_discrete(const JumpSet& jumps, const FilterFunction& filter, const SpectralGrid& grid,
                       const GibbsContext& ctx) {
  return oft_discrete(jumps.ops(), filter, grid, ctx);
}

ContinuousFilter::ContinuousFilter(FilterKind kind, double param) : kind_(kind), param_(param) {
  if (kind == FilterKind::explicit_samples) throw UnsupportedFilter("explicit samples have no closed-form transform");
  if (!(param > 0.0)) throw DimensionMismatch("continuous filter parameter must be positive");
}

double ContinuousFilter::hat(double omega) const {
  if (kind_ == FilterKind::gaussian) {
    const double s2 = param_ * param_;
    return std::pow(2.0 * s2 / kPi, 0.25) * std::exp(-omega * omega * s2);
  }
  const double half = param_ / 2.0;
  if (std::abs(omega) < 1e-8) return std::sqrt(2.0 / (kPi * param_)) * half * (1.0 - omega * omega * half * half / 6.0);
  return std::sqrt(2.0 / (kPi * param_)) * std::sin(omega * half) / omega;
}

ContinuousFilter continuous_filter(const FilterSpec& spec) { return ContinuousFilter(spec.kind, spec.param); }

Matrix ContinuousOft::at(int a, double omega) const {
  const auto& comps = components[static_cast<std::size_t>(a)];
  Matrix out = Matrix::Zero(comps.front().op.rows(), comps.front().op.cols());
  for (const auto& c : comps) out += filter.hat(omega - c.nu) * c.op;
  return out;
}

ContinuousOft oft_continuous(const JumpSet& jumps, const FilterSpec& spec, const GibbsContext& ctx) {
  check_jump_dims(jumps.ops(), ctx.dim());
  ContinuousOft out{{}, continuous_filter(spec)};
  for (const auto& a : jumps.ops()) {
    auto comps = ctx.bohr_decompose(a);
    if (comps.empty()) comps.push_back({0.0, Matrix::Zero(ctx.dim(), ctx.dim())});
    out.components.push_back(std::move(comps));
  }
  return out;
}

double wrapped_difference(const SpectralGrid& grid, double x) {
  const long steps = std::lround(x / grid.omega0());
  return grid.wrap(static_cast<int>(steps % grid.size())) * grid.omega0();
}

Vector filter_hat_on_grid(const FilterFunction& filter, const SpectralGrid& grid) {
  Vector out(grid.size());
  for (int k = 0; k < grid.size(); ++k) out(k) = filter.hat(grid.energy(k));
  return out;
}

namespace {

bool in_band(int wrapped_label, double omega0, double mu) {
  return std::abs(wrapped_label) * omega0 < mu - 1e-12 * std::max(mu, 1.0);
}

void require_rounded(const GibbsContext& ctx, double omega0) {
  for (double nu : ctx.bohr_frequencies()) {
    const double r = nu / omega0;
    if (std::abs(r - std::round(r)) > 1e-9)
      throw UnroundedHamiltonian("Bohr frequency " + std::to_string(nu) + " is not on the omega0 lattice");
  }
}

}  // namespace

Vector secular_filter_samples(const FilterFunction& filter, const SpectralGrid& grid, double mu) {
  const Vector fhat = filter_hat_on_grid(filter, grid);
  const int n = grid.size();
  Vector fs = Vector::Zero(n);
  for (int m = 0; m < n; ++m) {
    Complex acc = 0.0;
    for (int k = 0; k < n; ++k) {
      if (!in_band(grid.label(k), grid.omega0(), mu)) continue;
      // w t = 2 pi k m / N exactly
      const double phase = 2.0 * kPi * static_cast<double>(grid.label(k)) * grid.label(m) / n;
      acc += std::exp(Complex(0.0, phase)) * fhat(k);
    }
    fs(m) = acc / std::sqrt(static_cast<double>(n));
  }
  return fs;
}

OftFamily secular_truncate(const OftFamily& family, double mu, const GibbsContext& rounded_ctx) {
  const SpectralGrid& grid = family.grid();
  require_rounded(rounded_ctx, grid.omega0());
  check_jump_dims(family.jumps(), rounded_ctx.dim());
  const Vector fhat = filter_hat_on_grid(family.filter(), grid);
  const auto& bohr = rounded_ctx.bohr_frequencies();
  std::vector<long> bohr_steps;
  for (double nu : bohr) bohr_steps.push_back(std::lround(nu / grid.omega0()));

  std::vector<std::vector<Matrix>> entries;
  for (const auto& a : family.jumps()) {
    const Matrix tilde = rounded_ctx.to_eigenbasis(a);
    std::vector<Matrix> row;
    for (int k = 0; k < grid.size(); ++k) {
      std::vector<Complex> w(bohr.size());
      for (std::size_t c = 0; c < bohr.size(); ++c) {
        const int diff = grid.wrap(static_cast<int>((grid.label(k) - bohr_steps[c]) % grid.size()));
        w[c] = in_band(diff, grid.omega0(), mu) ? fhat(grid.index(diff)) : Complex(0.0);
      }
      row.push_back(weighted_in_eigenbasis(tilde, rounded_ctx, w));
    }
    entries.push_back(std::move(row));
  }
  return OftFamily(std::vector<Matrix>(family.jumps().begin(), family.jumps().end()), grid, family.filter(),
                   std::move(entries), mu);
}

TwoSidedFamily::TwoSidedFamily(SpectralGrid grid, std::vector<std::vector<Matrix>> entries)
    : grid_(grid), entries_(std::move(entries)) {}

Matrix TwoSidedFamily::sum_adag_a() const {
  const auto d = entries_.front().front().rows();
  Matrix s = Matrix::Zero(d, d);
  for (const auto& row : entries_)
    for (const auto& m : row) s.noalias() += m.adjoint() * m;
  return s;
}

TwoSidedFamily two_sided_oft(std::span<const Matrix> jumps, const Vector& filter_values, const SpectralGrid& grid,
                             const GibbsContext& ctx) {
  check_jump_dims(jumps, ctx.dim());
  const int n = grid.size();
  if (filter_values.size() != n) throw DimensionMismatch("filter is not defined on this grid");
  const int d = ctx.dim();
  Vector flipped(n);
  for (int k = 0; k < n; ++k) flipped(k) = filter_values(grid.index(-grid.label(k)));

  auto transform = [&](const Vector& f, double x) {
    Complex acc = 0.0;
    for (int m = 0; m < n; ++m) acc += std::exp(Complex(0.0, -x * grid.time(m))) * f(m);
    return acc / std::sqrt(static_cast<double>(n));
  };
  // row factor f_-hat(E2 - E_i), column factor f_hat(E1 - E_j)
  Matrix left(n, d);
  Matrix right(n, d);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < d; ++i) {
      left(k, i) = transform(flipped, grid.energy(k) - ctx.energies()(i));
      right(k, i) = transform(filter_values, grid.energy(k) - ctx.energies()(i));
    }

  std::vector<std::vector<Matrix>> entries;
  for (const auto& a : jumps) {
    const Matrix tilde = ctx.to_eigenbasis(a);
    std::vector<Matrix> row;
    row.reserve(static_cast<std::size_t>(n) * n);
    for (int e2 = 0; e2 < n; ++e2)
      for (int e1 = 0; e1 < n; ++e1) {
        Matrix m(d, d);
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) m(i, j) = tilde(i, j) * left(e2, i) * right(e1, j);
        row.push_back(ctx.from_eigenbasis(m));
      }
    entries.push_back(std::move(row));
  }
  return TwoSidedFamily(grid, std::move(entries));
}

TwoSidedFamily two_sided_oft(const JumpSet& jumps, const FilterFunction& filter, const SpectralGrid& grid,
                             const GibbsContext& ctx) {
  return two_sided_oft(jumps.ops(), filter.values(), grid, ctx);
}

ParsevalReport parseval_report(const OftFamily& family, const GibbsContext& ctx) {
  const Matrix sum = family.sum_adag_a();
  Matrix jump_sum = Matrix::Zero(family.dim(), family.dim());
  for (const auto& a : family.jumps()) jump_sum += a.adjoint() * a;
  const Vector& f = family.filter().values();
  Matrix expected = Matrix::Zero(family.dim(), family.dim());
  for (int m = 0; m < family.grid_size(); ++m) {
    const double w = std::norm(f(m));
    if (w == 0.0) continue;
    expected += w * ctx.heisenberg(jump_sum, family.grid().time(m));
  }
  ParsevalReport r;
  r.residual_identity = (sum - expected).cwiseAbs().maxCoeff();
  r.sum_norm = operator_norm(sum);
  r.bound = operator_norm(jump_sum) * f.squaredNorm();
  r.pass = r.residual_identity < 1e-10 && r.sum_norm <= r.bound * (1.0 + 1e-10) + 1e-12;
  return r;
}

double tail_mass(const FilterFunction& filter, const SpectralGrid& grid, double mu) {
  double acc = 0.0;
  for (int k = 0; k < grid.size(); ++k)
    if (std::abs(grid.energy(k)) > mu) acc += std::norm(filter.hat(grid.energy(k)));
  return acc;
}

double gaussian_tail_expression(double sigma_t, const SpectralGrid& grid, double mu) {
  const double n = grid.size();
  const double w0 = grid.omega0();
  const double t0 = grid.t0();
  const double aliasing = std::exp(-n * n * w0 * w0 * sigma_t * sigma_t / 2.0) / std::sqrt(n * w0 * sigma_t) +
                          std::exp(-n * n * t0 * t0 / (16.0 * sigma_t * sigma_t)) / std::sqrt(n * t0 / sigma_t);
  const double band = mu > 0.0 ? std::exp(-mu * mu * sigma_t * sigma_t) / std::sqrt(mu * sigma_t) : 1.0;
  return aliasing + band;
}

DiagnosticRecord tail_check(const FilterFunction& filter, const SpectralGrid& grid, double mu) {
  DiagnosticRecord rec;
  rec.measured = tail_mass(filter, grid, mu);
  switch (filter.kind()) {
    case FilterKind::uniform: {
      rec.check_name = "uniform_tail";
      const double support = static_cast<double>((filter.values().array().abs() > 0.0).count());
      const double t_eff = support * grid.t0() / 2.0;
      const double m = std::floor(mu / grid.omega0() + 1e-9);
      rec.bound = m >= 1.0 ? std::min(1.0, kPi / (2.0 * m * grid.omega0() * t_eff)) : 1.0;
      break;
    }
    case FilterKind::gaussian: {
      rec.check_name = "gaussian_tail";
      const double e = kGaussianTailConstant * gaussian_tail_expression(filter.param(), grid, mu);
      rec.bound = std::min(1.0, e * e);
      break;
    }
    case FilterKind::explicit_samples:
      rec.check_name = "explicit_tail";
      rec.bound = 1.0;
      break;
  }
  rec.pass = rec.measured <= rec.bound * (1.0 + 1e-12) + 1e-15;
  return rec;
}

GaussianDftReport gaussian_dft_check(double sigma_t, const SpectralGrid& grid) {
  const FilterFunction f(FilterSpec{FilterKind::gaussian, sigma_t, {}}, grid);
  const Vector fhat = filter_hat_on_grid(f, grid);
  const int n = grid.size();
  Vector ideal(n);
  for (int k = 0; k < n; ++k) {
    const double w = grid.energy(k);
    ideal(k) = std::exp(-w * w * sigma_t * sigma_t);
  }
  ideal /= ideal.norm();
  GaussianDftReport r;
  r.max_dev = (fhat - ideal).cwiseAbs().maxCoeff();
  r.tail_expression = gaussian_tail_expression(sigma_t, grid, 0.0) - 1.0;
  return r;
}

double periodic_sum_residual(double sigma_t, const SpectralGrid& grid, int wraps) {
  const int n = grid.size();
  const double s2 = sigma_t * sigma_t;
  const double period_t = n * grid.t0();
  const double period_w = n * grid.omega0();
  auto f_cont = [&](double t) { return std::pow(2.0 * kPi * s2, -0.25) * std::exp(-t * t / (4.0 * s2)); };
  auto fhat_cont = [&](double w) { return std::pow(2.0 * s2 / kPi, 0.25) * std::exp(-w * w * s2); };
  Vector wrapped(n);
  for (int m = 0; m < n; ++m) {
    double acc = 0.0;
    for (int l = -wraps; l <= wraps; ++l) acc += f_cont(grid.time(m) + l * period_t);
    wrapped(m) = std::sqrt(grid.t0()) * acc;
  }
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    Complex dft = 0.0;
    for (int m = 0; m < n; ++m) {
      const double phase = -2.0 * kPi * static_cast<double>(grid.label(k)) * grid.label(m) / n;
      dft += std::exp(Complex(0.0, phase)) * wrapped(m);
    }
    dft /= std::sqrt(static_cast<double>(n));
    double folded = 0.0;
    for (int l = -wraps; l <= wraps; ++l) folded += fhat_cont(grid.energy(k) + l * period_w);
    worst = std::max(worst, std::abs(dft - std::sqrt(grid.omega0()) * folded));
  }
  return worst;
}

}  // namespace qgl
