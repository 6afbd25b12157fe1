#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qgl/discriminant.hpp"

namespace qgl {

Matrix propagator(const Superoperator& generator, double t);  // exp(t L) on vec space
Matrix evolve(const Superoperator& generator, const Matrix& rho0, double t);

// Unique trace-one fixed point; throws DegenerateKernel for a kernel of dimension > 1.
Matrix fixed_point(const Superoperator& generator);

struct GapData {
  double lambda1 = 0.0;   // top eigenvalue of the Hermitian part of the discriminant
  double lambda2 = 0.0;
  double gap = 0.0;       // lambda1 - lambda2
  double re_gap = 0.0;    // minus the second-largest real part of the spectrum of L
  double adb_norm = 0.0;
};
GapData gap_data(const Superoperator& generator, const GibbsContext& ctx);
double real_gap(const Superoperator& generator);

enum class MixingMethod { bisection, gap_bound };

struct ContractionSample {
  double t = 0.0;
  double worst = 0.0;  // max sampled ||e^{tL}[R]||_1 / ||R||_1
};

struct MixingReport {
  double t_mix = 0.0;  // lower estimate: worst case is sampled
  MixingMethod method = MixingMethod::bisection;
  std::vector<ContractionSample> samples;
  std::optional<GapData> gaps;
};

struct MixingOptions {
  double t_max = 1e4;
  int samples = 10000;
  std::uint64_t seed = 1;
  double rel_tol = 1e-7;
  int polish_iterations = 200;
};

// Worst sampled contraction ratio at time t.
double worst_contraction(const Superoperator& generator, double t, const MixingOptions& opt = {});
MixingReport mixing_time(const Superoperator& generator, const MixingOptions& opt = {});
MixingReport mixing_time(const Superoperator& generator, const GibbsContext& ctx, const MixingOptions& opt = {});

struct EigvecComparison {
  double distance = 0.0;
  double lambda1 = 0.0;
  double gap = 0.0;
  Vector top_vector;  // phase aligned with the purification
};
EigvecComparison top_eigvec_compare(const Matrix& proxy, const GibbsContext& ctx);

struct BoundEntry {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
  bool informational = false;
  bool skipped = false;
  std::string reason;
};

inline constexpr double kBoundRelSlack = 1e-9;
inline constexpr double kBoundAbsFloor = 1e-12;
bool bound_holds(double lhs, double rhs);

// Perturbation, mixing and fixed-point inequalities evaluated on one generator; the optional
// second generator adds the fixed-point and mixing-time difference entries.
std::vector<BoundEntry> bound_suite(const Superoperator& generator, const GibbsContext& ctx,
                                    const Superoperator* other = nullptr, const MixingOptions& opt = {});

}  // namespace qgl
