#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qgl/oft.hpp"

namespace qgl {

// discrete: operator Fourier transform on the grid (gaussian or uniform filter)
// davies: exact Bohr frequencies
// continuous: integral over omega of the closed-form transform (gaussian, or the CGME uniform window)
// two_sided: two-sided transform with a gamma(E2, E1) table
enum class Variant { discrete, davies, continuous, two_sided };

struct TwoSidedWeight {
  std::vector<double> table;   // index e2 * N + e1
  std::vector<double> target;  // p(E) per grid index
};

struct LindbladSpec {
  JumpSet jumps;
  GibbsContext context;
  SpectralGrid grid;
  FilterFunction filter;
  TransitionWeight weight;
  Variant variant = Variant::discrete;
  std::optional<TwoSidedWeight> two_sided;
};

LindbladSpec make_spec(JumpSet jumps, GibbsContext ctx, int n_points, const FilterSpec& filter, WeightKind weight,
                       Variant variant = Variant::discrete, std::optional<double> omega0 = std::nullopt);

using WeightFn = std::function<double(double)>;
WeightFn weight_fn(const TransitionWeight& w);

Superoperator lindbladian_from_family(const OftFamily& family, std::span<const double> weights);
Superoperator build_lindbladian(const LindbladSpec& spec);
Superoperator build_davies(const JumpSet& jumps, const WeightFn& gamma, const GibbsContext& ctx);

// Pair kernel  int gamma(w) f_hat(w - nu) f_hat(w - nu') dw  for real closed-form transforms.
double continuous_kernel(const ContinuousFilter& filter, const TransitionWeight& weight, double nu, double nu_prime);
Superoperator build_continuous(const JumpSet& jumps, const ContinuousFilter& filter, const TransitionWeight& weight,
                               const GibbsContext& ctx);
// Uniform window of full length T.
Superoperator build_cgme_dissipative(const JumpSet& jumps, const TransitionWeight& weight, double window_t,
                                     const GibbsContext& ctx);

TwoSidedWeight make_two_sided_weight(WeightKind kind, double beta, const SpectralGrid& grid);
TwoSidedWeight two_sided_from_target(std::vector<double> target, const SpectralGrid& grid);
void check_ratio(const TwoSidedWeight& w, int n_points);  // throws RatioViolation
Superoperator build_two_sided(const LindbladSpec& spec);

struct SecularParts {
  GibbsContext rounded;
  OftFamily family;   // secular operators S_hat^a(w)
  Superoperator generator;
};
SecularParts secular_parts(const LindbladSpec& spec, double mu);
Superoperator build_secular(const LindbladSpec& spec, double mu);

struct SecularBoundReport {
  double mu = 0.0;
  double diff_22 = 0.0;
  double diff_11_lb = 0.0;
  double fhat_term = 0.0;  // 4 ||f_hat - f_hat_s||
  double window_term = 0.0;  // 8 ||f - f_T||
  double time_term = 0.0;  // 4 T omega0
  double bound = 0.0;
  bool pass = false;
};
SecularBoundReport secular_bound(const LindbladSpec& spec, double mu, std::uint64_t seed = 1);

struct GkslReport {
  double trace_residual = 0.0;
  double cp_min_eig = 0.0;
  double norm_11_lb = 0.0;
  bool pass = false;
};
GkslReport gksl_checks(const Superoperator& generator, double delta = 0.01, std::uint64_t seed = 1);

}  // namespace qgl
