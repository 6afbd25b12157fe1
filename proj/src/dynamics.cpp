#include "qgl/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qgl {

namespace {

constexpr double kKernelTol = 1e-9;

// Fixed pool of extreme points R = (|u><u| - |v><v|)/2 plus pairs read off the slow eigenmodes.
class ContractionProbe {
 public:
  ContractionProbe(const Superoperator& generator, const MixingOptions& opt)
      : dim_(generator.dim()), opt_(opt) {
    Rng rng(opt.seed);
    add_eigenmode_pairs(generator.dense());
    for (int k = 0; k < opt.samples; ++k) pairs_.push_back(random_ortho_pair(dim_, rng));
    batch_.resize(static_cast<Eigen::Index>(dim_) * dim_, static_cast<Eigen::Index>(pairs_.size()));
    for (std::size_t k = 0; k < pairs_.size(); ++k) batch_.col(static_cast<Eigen::Index>(k)) = vec(pair_operator(pairs_[k]));
  }

  double worst(const Matrix& prop) const {
    const std::vector<double> ratios = column_trace_norms(prop * batch_, dim_);
    std::vector<std::size_t> order(ratios.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t keep = std::min<std::size_t>(4, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                      [&](std::size_t a, std::size_t b) { return ratios[a] > ratios[b]; });
    double best = ratios[order.front()];
    Rng rng(opt_.seed ^ 0x9e3779b97f4a7c15ULL);
    for (std::size_t k = 0; k < keep; ++k) best = std::max(best, polish(prop, pairs_[order[k]], ratios[order[k]], rng));
    return best;
  }

 private:
  void add_eigenmode_pairs(const Matrix& dense) {
    Eigen::ComplexEigenSolver<Matrix> solver(dense);
    const auto& values = solver.eigenvalues();
    for (Eigen::Index c = 0; c < values.size(); ++c) {
      if (std::abs(values(c)) < kKernelTol) continue;
      const Matrix mode = unvec(solver.eigenvectors().col(c));
      for (const Complex phase : {Complex(1.0, 0.0), Complex(0.0, 1.0)}) {
        const Matrix herm = (phase * mode + (phase * mode).adjoint()) / 2.0;
        if (herm.norm() < 1e-12) continue;
        const EigenSystem es = eig_hermitian(herm, 1e-8);
        pairs_.push_back({es.vectors.col(0), es.vectors.col(dim_ - 1)});
      }
    }
  }

  double polish(const Matrix& prop, OrthoPair start, double start_ratio, Rng& rng) const {
    std::normal_distribution<double> g(0.0, 1.0);
    double best = start_ratio;
    double step = 0.2;
    for (int it = 0; it < opt_.polish_iterations; ++it) {
      OrthoPair cand = start;
      for (int i = 0; i < dim_; ++i) {
        cand.u(i) += step * Complex(g(rng), g(rng));
        cand.v(i) += step * Complex(g(rng), g(rng));
      }
      cand.u /= cand.u.norm();
      cand.v -= cand.u * cand.u.dot(cand.v);
      if (cand.v.norm() < 1e-12) continue;
      cand.v /= cand.v.norm();
      const double r = trace_norm(unvec(prop * vec(pair_operator(cand))));
      if (r > best) {
        best = r;
        start = cand;
      } else if (it % 20 == 19) {
        step *= 0.5;
      }
    }
    return best;
  }

  int dim_;
  MixingOptions opt_;
  std::vector<OrthoPair> pairs_;
  Matrix batch_;
};

double inverse_sqrt_norm(const GibbsContext& ctx) { return 1.0 / std::sqrt(ctx.populations().minCoeff()); }

BoundEntry make_entry(std::string name, double lhs, double rhs, bool informational = false) {
  BoundEntry e;
  e.name = std::move(name);
  e.lhs = lhs;
  e.rhs = rhs;
  e.pass = bound_holds(lhs, rhs);
  e.informational = informational;
  return e;
}

BoundEntry skipped_entry(std::string name, std::string reason, bool informational = false) {
  BoundEntry e;
  e.name = std::move(name);
  e.skipped = true;
  e.pass = true;
  e.informational = informational;
  e.reason = std::move(reason);
  return e;
}

}  // namespace

Matrix propagator(const Superoperator& generator, double t) {
  if (t < 0.0) throw PreconditionFailed("evolution time must be non-negative");
  return matrix_exp(t * generator.dense());
}

Matrix evolve(const Superoperator& generator, const Matrix& rho0, double t) {
  if (rho0.rows() != generator.dim()) throw DimensionMismatch("state dimension differs from generator");
  return unvec(propagator(generator, t) * vec(rho0));
}

Matrix fixed_point(const Superoperator& generator) {
  const Matrix& dense = generator.dense();
  Eigen::JacobiSVD<Matrix> svd(dense, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double tol = kKernelTol * std::max(1.0, sv(0));
  const Eigen::Index n = sv.size();
  if (sv(n - 1) > tol) throw DegenerateKernel("generator has no zero eigenvalue");
  if (n > 1 && sv(n - 2) <= tol) throw DegenerateKernel("generator kernel has dimension greater than one");
  Matrix x = unvec(svd.matrixV().col(n - 1));
  const Complex tr = x.trace();
  if (std::abs(tr) < 1e-14) throw DegenerateKernel("kernel vector is traceless");
  x /= tr;
  x = (x + x.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(x);
  RealVector vals = es.eigenvalues().cwiseMax(0.0);
  x = es.eigenvectors() * vals.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  return x / x.trace().real();
}

double real_gap(const Superoperator& generator) {
  const Eigen::VectorXcd ev = eigenvalues_general(generator.dense());
  std::vector<double> re(static_cast<std::size_t>(ev.size()));
  for (Eigen::Index i = 0; i < ev.size(); ++i) re[static_cast<std::size_t>(i)] = ev(i).real();
  std::sort(re.begin(), re.end(), std::greater<>());
  return re.size() > 1 ? -re[1] : 0.0;
}

GapData gap_data(const Superoperator& generator, const GibbsContext& ctx) {
  const DiscriminantReport rep = analyze_discriminant(generator, ctx);
  const EigenSystem es = eig_hermitian(rep.h_part);
  GapData g;
  g.lambda1 = es.values(0);
  g.lambda2 = es.values.size() > 1 ? es.values(1) : es.values(0);
  g.gap = g.lambda1 - g.lambda2;
  g.re_gap = real_gap(generator);
  g.adb_norm = rep.adb_norm;
  return g;
}

double worst_contraction(const Superoperator& generator, double t, const MixingOptions& opt) {
  const ContractionProbe probe(generator, opt);
  return probe.worst(propagator(generator, t));
}

MixingReport mixing_time(const Superoperator& generator, const MixingOptions& opt) {
  const ContractionProbe probe(generator, opt);
  MixingReport report;
  auto eval = [&](double t) {
    const double w = probe.worst(propagator(generator, t));
    report.samples.push_back({t, w});
    return w;
  };
  const double scale = std::max(superop_norm_22(generator.dense()), 1e-12);
  double lo = 0.0;
  double hi = 1.0 / scale;
  if (eval(hi) > 0.5) {
    lo = hi;
    for (;;) {
      hi = std::min(2.0 * lo, opt.t_max);
      if (eval(hi) <= 0.5) break;
      if (hi >= opt.t_max) throw NotMixed("worst contraction exceeds 1/2 at t_max = " + std::to_string(opt.t_max));
      lo = hi;
    }
  } else {
    for (int k = 0; k < 200; ++k) {
      const double t = hi / 2.0;
      if (eval(t) > 0.5) {
        lo = t;
        break;
      }
      hi = t;
    }
  }
  while (hi - lo > opt.rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (eval(mid) <= 0.5)
      hi = mid;
    else
      lo = mid;
  }
  report.t_mix = hi;
  std::sort(report.samples.begin(), report.samples.end(),
            [](const ContractionSample& a, const ContractionSample& b) { return a.t < b.t; });
  return report;
}

MixingReport mixing_time(const Superoperator& generator, const GibbsContext& ctx, const MixingOptions& opt) {
  MixingReport r = mixing_time(generator, opt);
  r.gaps = gap_data(generator, ctx);
  return r;
}

EigvecComparison top_eigvec_compare(const Matrix& proxy, const GibbsContext& ctx) {
  const Vector& target = ctx.purification();
  if (proxy.rows() != target.size()) throw DimensionMismatch("proxy dimension differs from the doubled system");
  const EigenSystem es = eig_hermitian(proxy);
  EigvecComparison out;
  out.lambda1 = es.values(0);
  out.gap = es.values.size() > 1 ? es.values(0) - es.values(1) : 0.0;
  Vector v = es.vectors.col(0);
  const Complex overlap = v.dot(target);
  if (std::abs(overlap) > 0.0) v *= overlap / std::abs(overlap);
  out.distance = (v - target).norm();
  out.top_vector = std::move(v);
  return out;
}

bool bound_holds(double lhs, double rhs) { return lhs <= rhs * (1.0 + kBoundRelSlack) + kBoundAbsFloor; }

std::vector<BoundEntry> bound_suite(const Superoperator& generator, const GibbsContext& ctx,
                                    const Superoperator* other, const MixingOptions& opt) {
  std::vector<BoundEntry> out;
  const DiscriminantReport rep = analyze_discriminant(generator, ctx);
  const EigenSystem hs = eig_hermitian(rep.h_part);
  const double eps = rep.adb_norm;
  const double lambda1 = hs.values(0);
  const double lambda2 = hs.values(1);
  const double gap_h = lambda1 - lambda2;
  const double re_gap = real_gap(generator);
  const double inv_sqrt = inverse_sqrt_norm(ctx);

  std::optional<Matrix> fixed;
  std::string fixed_reason;
  try {
    fixed = fixed_point(generator);
  } catch (const DegenerateKernel& e) {
    fixed_reason = e.what();
  }
  std::optional<double> t_mix;
  std::string mix_reason;
  try {
    t_mix = mixing_time(generator, opt).t_mix;
  } catch (const NotMixed& e) {
    mix_reason = e.what();
  }

  const double fixed_err = fixed ? trace_norm(*fixed - ctx.rho()) : 0.0;
  if (fixed && t_mix)
    out.push_back(make_entry("fixed_point_mix", fixed_err, 20.0 * *t_mix * eps));
  else
    out.push_back(skipped_entry("fixed_point_mix", fixed ? mix_reason : fixed_reason));

  if (!fixed)
    out.push_back(skipped_entry("fixed_point_gap", fixed_reason));
  else if (gap_h > 2.0 * eps)
    out.push_back(make_entry("fixed_point_gap", fixed_err, 14.0 * eps / gap_h));
  else
    out.push_back(skipped_entry("fixed_point_gap", "hermitian gap does not exceed 2 eps"));

  if (!t_mix)
    out.push_back(skipped_entry("gap_to_mixing", mix_reason));
  else if (std::abs(lambda1) <= gap_h / 100.0)
    out.push_back(make_entry("gap_to_mixing", *t_mix, 3.0 * std::log(3.0 * inv_sqrt) / gap_h));
  else
    out.push_back(skipped_entry("gap_to_mixing", "lambda1 / gap exceeds 1/100"));

  const bool exact_db = eps <= 1e-10 * std::max(1.0, operator_norm(rep.d));
  if (!t_mix)
    out.push_back(skipped_entry("mix_detail", mix_reason));
  else if (exact_db)
    out.push_back(make_entry("mix_detail", *t_mix, std::log(2.0 * inv_sqrt) / gap_h));
  else
    out.push_back(skipped_entry("mix_detail", "generator is not exactly detailed balanced"));

  if (t_mix)
    out.push_back(make_entry("mixing_to_gap", std::log(2.0) / *t_mix, re_gap));
  else
    out.push_back(skipped_entry("mixing_to_gap", mix_reason));
  out.push_back(make_entry("re_gap_hermitian", re_gap, eps - lambda2));

  // Spectrum of D = H + A lies within ||A|| of the spectrum of H.
  const Eigen::VectorXcd dspec = eigenvalues_general(rep.d);
  double worst_dist = 0.0;
  for (Eigen::Index i = 0; i < dspec.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < hs.values.size(); ++j) best = std::min(best, std::abs(dspec(i) - hs.values(j)));
    worst_dist = std::max(worst_dist, best);
  }
  out.push_back(make_entry("bauer_fike", worst_dist, eps));

  // Top eigenvector of H against the matching right eigenvector of D.
  {
    Eigen::ComplexEigenSolver<Matrix> solver(rep.d);
    Eigen::Index k = 0;
    for (Eigen::Index i = 1; i < solver.eigenvalues().size(); ++i)
      if (std::abs(solver.eigenvalues()(i) - lambda1) < std::abs(solver.eigenvalues()(k) - lambda1)) k = i;
    Vector vp = solver.eigenvectors().col(k).normalized();
    const Vector v = hs.vectors.col(0);
    const Complex ov = vp.dot(v);
    if (std::abs(ov) > 0.0) vp *= ov / std::abs(ov);
    const double shift = std::abs(solver.eigenvalues()(k) - lambda1);
    if (gap_h > 0.0)
      out.push_back(make_entry("eigvec_perturb", (vp - v).norm(), 2.0 * std::sqrt(2.0) * (eps + shift) / gap_h));
    else
      out.push_back(skipped_entry("eigvec_perturb", "hermitian part has a degenerate top eigenvalue"));
  }

  if (other != nullptr) {
    const Matrix diff = generator.dense() - other->dense();
    const double diff_11 = superop_norm_11_lb(diff, opt.samples, opt.seed);
    std::optional<Matrix> fixed2;
    try {
      fixed2 = fixed_point(*other);
    } catch (const DegenerateKernel&) {
    }
    if (fixed && fixed2 && t_mix)
      out.push_back(make_entry("fixed_point_difference", trace_norm(*fixed - *fixed2), 4.0 * diff_11 * *t_mix, true));
    else
      out.push_back(skipped_entry("fixed_point_difference", "fixed point or mixing time unavailable", true));
    if (t_mix && *t_mix * diff_11 < 0.5) {
      try {
        const double t2 = mixing_time(*other, opt).t_mix;
        const double factor = std::ceil(std::log(0.5) / std::log(0.5 + *t_mix * diff_11));
        out.push_back(make_entry("mixing_time_difference", t2, *t_mix * factor, true));
      } catch (const NotMixed& e) {
        out.push_back(skipped_entry("mixing_time_difference", e.what(), true));
      }
    } else {
      out.push_back(skipped_entry("mixing_time_difference", "t_mix * ||L1 - L2|| is not below 1/2", true));
    }
  }
  return out;
}

}  // namespace qgl
