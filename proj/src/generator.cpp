#include "qgl/generator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

namespace qgl {

namespace {

constexpr double kPi = std::numbers::pi;

struct GslWorkspace {
  explicit GslWorkspace(std::size_t n) : ptr(gsl_integration_workspace_alloc(n)) {}
  ~GslWorkspace() { gsl_integration_workspace_free(ptr); }
  GslWorkspace(const GslWorkspace&) = delete;
  GslWorkspace& operator=(const GslWorkspace&) = delete;
  gsl_integration_workspace* ptr;
};

template <class F>
double integrate(const F& f, double lo, double hi, GslWorkspace& ws) {
  gsl_function fn;
  fn.function = [](double x, void* p) { return (*static_cast<const F*>(p))(x); };
  fn.params = const_cast<F*>(&f);
  double result = 0.0;
  double abserr = 0.0;
  const int status = gsl_integration_qag(&fn, lo, hi, 1e-13, 1e-10, 1000, GSL_INTEG_GAUSS61, ws.ptr, &result, &abserr);
  if (status != GSL_SUCCESS)
    throw QuadratureFailure(std::string("quadrature on [") + std::to_string(lo) + ", " + std::to_string(hi) +
                            "]: " + gsl_strerror(status));
  return result;
}

// Integral over [lo, hi] split into unit panels with a break at zero (Metropolis kink).
template <class F>
double integrate_panels(const F& f, double lo, double hi, GslWorkspace& ws) {
  std::vector<double> cuts;
  const double width = 1.0;
  for (double x = lo; x < hi; x += width) cuts.push_back(x);
  cuts.push_back(hi);
  if (lo < 0.0 && hi > 0.0) cuts.push_back(0.0);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
             cuts.end());
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) acc += integrate(f, cuts[k], cuts[k + 1], ws);
  return acc;
}

// Status codes are checked at every call; the default handler would abort.
void disable_gsl_abort() {
  static const bool done = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)done;
}

double gaussian_metropolis_kernel(double sigma, double beta, double nu, double nu_prime) {
  const double c = 2.0 * sigma * sigma;
  const double delta = nu - nu_prime;
  const double mean = 0.5 * (nu + nu_prime);
  const double prefactor = std::sqrt(c / kPi) * std::exp(-sigma * sigma * delta * delta / 2.0);
  const double half = 0.5 * std::sqrt(kPi / c);
  const double cold = half * std::erfc(mean * std::sqrt(c));
  const double shifted = mean - beta / (4.0 * sigma * sigma);
  const double hot_log = -beta * mean + beta * beta / (8.0 * sigma * sigma);
  const double hot = std::exp(hot_log) * half * std::erfc(-shifted * std::sqrt(c));
  return prefactor * (cold + hot);
}

// Tail of int_L^inf of (cos(a(nu'-nu)) - cos(T w - phi)) / ((w - nu)(w - nu')).
double uniform_right_tail(double window_t, double nu, double nu_prime, double lim) {
  const double a = window_t / 2.0;
  const double phi = a * (nu + nu_prime);
  const double smooth = std::abs(nu - nu_prime) < 1e-12 ? 1.0 / (lim - nu)
                                                        : std::log((lim - nu_prime) / (lim - nu)) / (nu - nu_prime);
  const double g = 1.0 / ((lim - nu) * (lim - nu_prime));
  const double dg = -g * (1.0 / (lim - nu) + 1.0 / (lim - nu_prime));
  const double arg = window_t * lim - phi;
  const double osc = -std::sin(arg) * g / window_t - std::cos(arg) * dg / (window_t * window_t);
  return std::cos(a * (nu_prime - nu)) * smooth - osc;
}

double uniform_left_tail(double window_t, double nu, double nu_prime, double lim) {
  const double a = window_t / 2.0;
  const double phi = -a * (nu + nu_prime);
  const double smooth = std::abs(nu - nu_prime) < 1e-12 ? 1.0 / (lim + nu)
                                                        : std::log((lim + nu_prime) / (lim + nu)) / (nu_prime - nu);
  const double h = 1.0 / ((lim + nu) * (lim + nu_prime));
  const double dh = -h * (1.0 / (lim + nu) + 1.0 / (lim + nu_prime));
  const double arg = window_t * lim - phi;
  const double osc = -std::sin(arg) * h / window_t - std::cos(arg) * dh / (window_t * window_t);
  return std::cos(a * (nu_prime - nu)) * smooth - osc;
}

std::vector<double> weight_table_of(const TransitionWeight& w) { return w.table(); }

}  // namespace

LindbladSpec make_spec(JumpSet jumps, GibbsContext ctx, int n_points, const FilterSpec& filter, WeightKind weight,
                       Variant variant, std::optional<double> omega0) {
  if (jumps.dim() != ctx.dim()) throw IncompatibleSpec("jump and Hamiltonian dimensions differ");
  SpectralGrid grid = make_grid(n_points, ctx, omega0);
  FilterFunction f(filter, grid);
  const double beta = ctx.beta();
  TransitionWeight w(weight, beta, grid);
  LindbladSpec spec{std::move(jumps), std::move(ctx), grid, std::move(f), std::move(w), variant, std::nullopt};
  if (variant == Variant::two_sided) spec.two_sided = make_two_sided_weight(weight, beta, grid);
  return spec;
}

WeightFn weight_fn(const TransitionWeight& w) {
  const WeightKind kind = w.kind();
  const double beta = w.beta();
  return [kind, beta](double omega) { return weight_function(kind, beta, omega); };
}

Superoperator lindbladian_from_family(const OftFamily& family, std::span<const double> weights) {
  if (static_cast<int>(weights.size()) != family.grid_size())
    throw IncompatibleSpec("weight table size differs from grid");
  Superoperator l(family.dim());
  for (int a = 0; a < family.jump_count(); ++a)
    for (int k = 0; k < family.grid_size(); ++k) {
      const double g = weights[static_cast<std::size_t>(k)];
      if (g == 0.0) continue;
      l.add_dissipator(g, family.at(a, k));
    }
  return l;
}

Superoperator build_davies(const JumpSet& jumps, const WeightFn& gamma, const GibbsContext& ctx) {
  if (jumps.dim() != ctx.dim()) throw IncompatibleSpec("jump and Hamiltonian dimensions differ");
  Superoperator l(ctx.dim());
  for (const auto& a : jumps.ops())
    for (const auto& comp : ctx.bohr_decompose(a)) l.add_dissipator(gamma(comp.nu), comp.op);
  return l;
}

double continuous_kernel(const ContinuousFilter& filter, const TransitionWeight& weight, double nu,
                         double nu_prime) {
  if (filter.kind() == FilterKind::gaussian && weight.kind() == WeightKind::metropolis)
    return gaussian_metropolis_kernel(filter.param(), weight.beta(), nu, nu_prime);

  disable_gsl_abort();
  GslWorkspace ws(1000);
  const WeightFn gamma = weight_fn(weight);
  auto integrand = [&](double w) { return gamma(w) * filter.hat(w - nu) * filter.hat(w - nu_prime); };

  if (filter.kind() == FilterKind::gaussian) {
    const double centre = 0.5 * (nu + nu_prime);
    const double reach = 12.0 / filter.param();
    return integrate_panels(integrand, centre - reach, centre + reach, ws);
  }

  const double beta = weight.beta();
  const double lim = std::max(200.0, beta > 0.0 ? 40.0 / beta : 0.0) + std::max(std::abs(nu), std::abs(nu_prime));
  const double inner = integrate_panels(integrand, -lim, lim, ws);
  const double scale = 1.0 / (kPi * filter.param());
  const double gamma_plus = gamma(1e6);
  const double gamma_minus = gamma(-1e6);
  const double tails = scale * (gamma_plus * uniform_right_tail(filter.param(), nu, nu_prime, lim) +
                                gamma_minus * uniform_left_tail(filter.param(), nu, nu_prime, lim));
  return inner + tails;
}

Superoperator build_continuous(const JumpSet& jumps, const ContinuousFilter& filter, const TransitionWeight& weight,
                               const GibbsContext& ctx) {
  if (jumps.dim() != ctx.dim()) throw IncompatibleSpec("jump and Hamiltonian dimensions differ");
  const int d = ctx.dim();
  const Matrix id = Matrix::Identity(d, d);
  std::map<std::pair<double, double>, double> cache;
  Superoperator l(d);
  for (const auto& a : jumps.ops()) {
    const auto comps = ctx.bohr_decompose(a);
    for (const auto& c1 : comps)
      for (const auto& c2 : comps) {
        const auto key = std::make_pair(c1.nu, c2.nu);
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, continuous_kernel(filter, weight, c1.nu, c2.nu)).first;
        const double k = it->second;
        if (k == 0.0) continue;
        const Matrix prod = c2.op.adjoint() * c1.op;
        l.add_term(k, c1.op, c2.op.adjoint());
        l.add_term(-0.5 * k, prod, id);
        l.add_term(-0.5 * k, id, prod);
      }
  }
  return l;
}

Superoperator build_cgme_dissipative(const JumpSet& jumps, const TransitionWeight& weight, double window_t,
                                     const GibbsContext& ctx) {
  if (!(window_t > 0.0)) throw IncompatibleSpec("CGME window must be positive");
  return build_continuous(jumps, ContinuousFilter(FilterKind::uniform, window_t), weight, ctx);
}

TwoSidedWeight two_sided_from_target(std::vector<double> target, const SpectralGrid& grid) {
  const int n = grid.size();
  if (static_cast<int>(target.size()) != n) throw DimensionMismatch("target weights need one value per grid label");
  TwoSidedWeight w{std::vector<double>(static_cast<std::size_t>(n) * n, 0.0), std::move(target)};
  for (int e2 = 0; e2 < n; ++e2)
    for (int e1 = 0; e1 < n; ++e1) {
      const double p2 = w.target[static_cast<std::size_t>(e2)];
      const double p1 = w.target[static_cast<std::size_t>(e1)];
      w.table[static_cast<std::size_t>(e2 * n + e1)] = p1 > 0.0 ? std::min(1.0, p2 / p1) : 1.0;
    }
  return w;
}

TwoSidedWeight make_two_sided_weight(WeightKind kind, double beta, const SpectralGrid& grid) {
  const int n = grid.size();
  std::vector<double> target(static_cast<std::size_t>(n));
  // relative to the grid origin to keep values representable
  for (int k = 0; k < n; ++k) target[static_cast<std::size_t>(k)] = std::exp(-beta * grid.energy(k));
  TwoSidedWeight w = two_sided_from_target(target, grid);
  if (kind == WeightKind::glauber)
    for (int e2 = 0; e2 < n; ++e2)
      for (int e1 = 0; e1 < n; ++e1) {
        const double p2 = target[static_cast<std::size_t>(e2)];
        const double p1 = target[static_cast<std::size_t>(e1)];
        w.table[static_cast<std::size_t>(e2 * n + e1)] = p2 / (p1 + p2);
      }
  return w;
}

void check_ratio(const TwoSidedWeight& w, int n_points) {
  const auto n = static_cast<std::size_t>(n_points);
  if (w.table.size() != n * n || w.target.size() != n) throw DimensionMismatch("two-sided table has the wrong size");
  for (std::size_t e2 = 0; e2 < n; ++e2)
    for (std::size_t e1 = 0; e1 < n; ++e1) {
      const double g21 = w.table[e2 * n + e1];
      const double g12 = w.table[e1 * n + e2];
      if (g21 < 0.0 || g21 > 1.0) throw RatioViolation("two-sided weight outside [0, 1]");
      // cross-multiplied form avoids dividing by zero
      const double lhs = g21 * w.target[e1];
      const double rhs = g12 * w.target[e2];
      if (std::abs(lhs - rhs) > 1e-10 * std::max({1.0, std::abs(lhs), std::abs(rhs)}))
        throw RatioViolation("gamma(E2,E1)/gamma(E1,E2) differs from p(E2)/p(E1)");
    }
}

Superoperator build_two_sided(const LindbladSpec& spec) {
  if (!spec.two_sided) throw IncompatibleSpec("two-sided variant needs a gamma(E2, E1) table");
  const int n = spec.grid.size();
  check_ratio(*spec.two_sided, n);
  const TwoSidedFamily family = two_sided_oft(spec.jumps, spec.filter, spec.grid, spec.context);
  Superoperator l(spec.context.dim());
  for (int a = 0; a < family.jump_count(); ++a)
    for (int e2 = 0; e2 < n; ++e2)
      for (int e1 = 0; e1 < n; ++e1) {
        const double g = spec.two_sided->table[static_cast<std::size_t>(e2 * n + e1)];
        if (g == 0.0) continue;
        l.add_dissipator(g, family.at(a, e2, e1));
      }
  return l;
}

Superoperator build_lindbladian(const LindbladSpec& spec) {
  if (spec.jumps.dim() != spec.context.dim()) throw IncompatibleSpec("jump and Hamiltonian dimensions differ");
  if (spec.filter.size() != spec.grid.size() || static_cast<int>(spec.weight.table().size()) != spec.grid.size())
    throw IncompatibleSpec("filter or weight not defined on the grid");
  switch (spec.variant) {
    case Variant::discrete: {
      const OftFamily family = oft_discrete(spec.jumps, spec.filter, spec.grid, spec.context);
      const auto table = weight_table_of(spec.weight);
      return lindbladian_from_family(family, table);
    }
    case Variant::davies: return build_davies(spec.jumps, weight_fn(spec.weight), spec.context);
    case Variant::continuous:
      return build_continuous(spec.jumps, continuous_filter(spec.filter.spec()), spec.weight, spec.context);
    case Variant::two_sided: return build_two_sided(spec);
  }
  throw IncompatibleSpec("unknown variant");
}

SecularParts secular_parts(const LindbladSpec& spec, double mu) {
  if (spec.variant != Variant::discrete) throw IncompatibleSpec("secular approximation needs the discrete variant");
  GibbsContext rounded(round_hamiltonian(spec.context, spec.grid.omega0()), spec.context.beta());
  const OftFamily plain = oft_discrete(spec.jumps, spec.filter, spec.grid, rounded);
  OftFamily secular = secular_truncate(plain, mu, rounded);
  const auto table = weight_table_of(spec.weight);
  Superoperator gen = lindbladian_from_family(secular, table);
  return SecularParts{std::move(rounded), std::move(secular), std::move(gen)};
}

Superoperator build_secular(const LindbladSpec& spec, double mu) { return secular_parts(spec, mu).generator; }

SecularBoundReport secular_bound(const LindbladSpec& spec, double mu, std::uint64_t seed) {
  const Superoperator full = build_lindbladian(spec);
  const Superoperator sec = build_secular(spec, mu);
  const Matrix diff = full.dense() - sec.dense();
  SecularBoundReport r;
  r.mu = mu;
  r.diff_22 = superop_norm_22(diff);
  r.diff_11_lb = superop_norm_11_lb(diff, 10000, seed);
  const Vector fhat = filter_hat_on_grid(spec.filter, spec.grid);
  double tail = 0.0;
  for (int k = 0; k < spec.grid.size(); ++k)
    if (!(std::abs(spec.grid.label(k)) * spec.grid.omega0() < mu - 1e-12 * std::max(mu, 1.0))) tail += std::norm(fhat(k));
  r.fhat_term = 4.0 * std::sqrt(tail);
  // T is the grid half-range, so f_T = f
  const double half_range = spec.grid.size() * spec.grid.t0() / 2.0;
  r.window_term = 0.0;
  r.time_term = 4.0 * half_range * spec.grid.omega0();
  r.bound = r.fhat_term + r.window_term + r.time_term;
  r.pass = r.diff_22 <= r.bound * (1.0 + 1e-9) && r.diff_11_lb <= r.bound * (1.0 + 1e-9);
  return r;
}

GkslReport gksl_checks(const Superoperator& generator, double delta, std::uint64_t seed) {
  const int d = generator.dim();
  Rng rng(seed);
  GkslReport r;
  for (int k = 0; k < 20; ++k) {
    const Matrix rho = random_density(d, rng);
    r.trace_residual = std::max(r.trace_residual, std::abs(generator.apply(rho).trace()));
  }
  const Matrix channel = matrix_exp(delta * generator.dense());
  const Matrix choi = choi_matrix(channel);
  Eigen::SelfAdjointEigenSolver<Matrix> solver((choi + choi.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  r.cp_min_eig = solver.eigenvalues().minCoeff();
  r.norm_11_lb = superop_norm_11_lb(generator, 10000, seed);
  r.pass = r.trace_residual < 1e-10 && r.cp_min_eig >= -1e-8 && r.norm_11_lb <= 2.0 + 1e-9;
  return r;
}

}  // namespace qgl
