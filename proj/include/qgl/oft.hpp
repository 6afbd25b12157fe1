#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qgl/model.hpp"

namespace qgl {

// Discrete operator Fourier transform: entries A_hat^a(w) indexed by jump and grid index.
class OftFamily {
 public:
  OftFamily(std::vector<Matrix> jumps, SpectralGrid grid, FilterFunction filter,
            std::vector<std::vector<Matrix>> entries, std::optional<double> secular_mu = std::nullopt);

  int jump_count() const noexcept { return static_cast<int>(entries_.size()); }
  int grid_size() const noexcept { return grid_.size(); }
  int dim() const noexcept { return static_cast<int>(jumps_.front().rows()); }
  const Matrix& at(int a, int index) const {
    return entries_[static_cast<std::size_t>(a)][static_cast<std::size_t>(index)];
  }
  const SpectralGrid& grid() const noexcept { return grid_; }
  const FilterFunction& filter() const noexcept { return filter_; }
  std::span<const Matrix> jumps() const noexcept { return jumps_; }
  std::optional<double> secular_mu() const noexcept { return mu_; }

  // sum_{a,w} weight(w) A_hat^dag A_hat; all weights one when omitted.
  Matrix sum_adag_a(const std::vector<double>* weights = nullptr) const;

 private:
  std::vector<Matrix> jumps_;
  SpectralGrid grid_;
  FilterFunction filter_;
  std::vector<std::vector<Matrix>> entries_;
  std::optional<double> mu_;
};

OftFamily oft_discrete(std::span<const Matrix> jumps, const FilterFunction& filter, const SpectralGrid& grid,
                       const GibbsContext& ctx);
OftFamily oft_discrete(const JumpSet& jumps, const FilterFunction& filter, const SpectralGrid& grid,
                       const GibbsContext& ctx);

// Closed-form continuous transforms. Gaussian: f(t) ~ exp(-t^2 / 4 sigma^2).
// Uniform: f(t) = 1(|t| <= T/2) / sqrt(T), param = T (full window).
class ContinuousFilter {
 public:
  ContinuousFilter(FilterKind kind, double param);
  FilterKind kind() const noexcept { return kind_; }
  double param() const noexcept { return param_; }
  double hat(double omega) const;

 private:
  FilterKind kind_;
  double param_;
};

ContinuousFilter continuous_filter(const FilterSpec& spec);

struct ContinuousOft {
  std::vector<std::vector<BohrComponent>> components;  // per jump
  ContinuousFilter filter;
  Matrix at(int a, double omega) const;
};

ContinuousOft oft_continuous(const JumpSet& jumps, const FilterSpec& spec, const GibbsContext& ctx);

// Grid difference wrapped into the signed label range, in energy units.
double wrapped_difference(const SpectralGrid& grid, double x);

// Requires the context Hamiltonian to have Bohr frequencies on omega0 Z.
OftFamily secular_truncate(const OftFamily& family, double mu, const GibbsContext& rounded_ctx);

// f_s = inverse DFT of f_hat * 1(|w| < mu) on the grid; not renormalized.
Vector secular_filter_samples(const FilterFunction& filter, const SpectralGrid& grid, double mu);

// f_hat on the grid labels, in grid index order.
Vector filter_hat_on_grid(const FilterFunction& filter, const SpectralGrid& grid);

class TwoSidedFamily {
 public:
  TwoSidedFamily(SpectralGrid grid, std::vector<std::vector<Matrix>> entries);
  int jump_count() const noexcept { return static_cast<int>(entries_.size()); }
  int grid_size() const noexcept { return grid_.size(); }
  const SpectralGrid& grid() const noexcept { return grid_; }
  // e2, e1 are grid indices
  const Matrix& at(int a, int e2, int e1) const {
    return entries_[static_cast<std::size_t>(a)][static_cast<std::size_t>(e2 * grid_.size() + e1)];
  }
  Matrix sum_adag_a() const;

 private:
  SpectralGrid grid_;
  std::vector<std::vector<Matrix>> entries_;
};

TwoSidedFamily two_sided_oft(std::span<const Matrix> jumps, const Vector& filter_values, const SpectralGrid& grid,
                             const GibbsContext& ctx);
TwoSidedFamily two_sided_oft(const JumpSet& jumps, const FilterFunction& filter, const SpectralGrid& grid,
                             const GibbsContext& ctx);

struct ParsevalReport {
  double residual_identity = 0.0;  // against sum_t |f|^2 e^{iHt}(sum A^dag A)e^{-iHt}
  double sum_norm = 0.0;
  double bound = 0.0;  // ||sum A^dag A|| * ||f||^2
  bool pass = false;
};
ParsevalReport parseval_report(const OftFamily& family, const GibbsContext& ctx);

struct DiagnosticRecord {
  std::string check_name;
  double measured = 0.0;
  double bound = 0.0;
  bool pass = false;
};

// sum over |w| > mu of |f_hat(w)|^2
double tail_mass(const FilterFunction& filter, const SpectralGrid& grid, double mu);

// Uniform: pi / (2 mu T_eff). Gaussian: the squared O-expression times kGaussianTailConstant^2.
inline constexpr double kGaussianTailConstant = 4.0;
DiagnosticRecord tail_check(const FilterFunction& filter, const SpectralGrid& grid, double mu);
double gaussian_tail_expression(double sigma_t, const SpectralGrid& grid, double mu);

struct GaussianDftReport {
  double max_dev = 0.0;        // DFT(f) vs renormalized exp(-w^2 sigma^2)
  double tail_expression = 0.0;  // aliasing terms of the O-expression
};
GaussianDftReport gaussian_dft_check(double sigma_t, const SpectralGrid& grid);

// Periodic summation: DFT of time-wrapped continuous samples vs frequency-wrapped continuous transform.
double periodic_sum_residual(double sigma_t, const SpectralGrid& grid, int wraps = 8);

}  // namespace qgl
