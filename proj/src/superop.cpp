#include "qgl/superop.hpp"

#include <algorithm>
#include <cmath>

namespace qgl {

Matrix vectorize(std::span<const SuperTerm> terms, int dim) {
  const Eigen::Index d2 = static_cast<Eigen::Index>(dim) * dim;
  Matrix out = Matrix::Zero(d2, d2);
  for (const auto& t : terms) {
    if (t.left.rows() != dim || t.left.cols() != dim || t.right.rows() != dim || t.right.cols() != dim)
      throw DimensionMismatch("vectorize: term dimension does not match superoperator");
    out.noalias() += t.coeff * kron(t.left, t.right.transpose());
  }
  return out;
}

Superoperator::Superoperator(int dim, Picture picture)
    : dim_(dim), picture_(picture), dense_(Matrix::Zero(dim * dim, dim * dim)) {}

Superoperator Superoperator::from_terms(std::vector<SuperTerm> terms, int dim, Picture picture) {
  Superoperator s(dim, picture);
  s.dense_ = vectorize(terms, dim);
  s.terms_ = std::move(terms);
  return s;
}

Superoperator Superoperator::from_dense(Matrix dense, Picture picture) {
  const auto d = static_cast<int>(std::llround(std::sqrt(static_cast<double>(dense.rows()))));
  if (dense.rows() != dense.cols() || static_cast<Eigen::Index>(d) * d != dense.rows())
    throw DimensionMismatch("from_dense: matrix is not d^2 x d^2");
  Superoperator s(d, picture);
  s.dense_ = std::move(dense);
  s.dense_only_ = true;
  return s;
}

Superoperator Superoperator::identity(int dim) {
  return from_terms({SuperTerm{1.0, Matrix::Identity(dim, dim), Matrix::Identity(dim, dim)}}, dim);
}

void Superoperator::add_term(Complex coeff, const Matrix& left, const Matrix& right) {
  if (left.rows() != dim_ || right.rows() != dim_ || left.cols() != dim_ || right.cols() != dim_)
    throw DimensionMismatch("add_term: operand dimension mismatch");
  dense_.noalias() += coeff * kron(left, right.transpose());
  if (!dense_only_) terms_.push_back({coeff, left, right});
}

void Superoperator::add_dissipator(double rate, const Matrix& jump) {
  if (rate == 0.0) return;
  const Matrix id = Matrix::Identity(dim_, dim_);
  const Matrix ldl = jump.adjoint() * jump;
  add_term(rate, jump, jump.adjoint());
  add_term(-0.5 * rate, ldl, id);
  add_term(-0.5 * rate, id, ldl);
}

Matrix Superoperator::apply(const Matrix& x) const {
  if (x.rows() != dim_ || x.cols() != dim_) throw DimensionMismatch("apply: input dimension mismatch");
  if (dense_only_) return unvec(dense_ * vec(x));
  Matrix out = Matrix::Zero(dim_, dim_);
  for (const auto& t : terms_) out.noalias() += t.coeff * (t.left * x * t.right);
  return out;
}

Superoperator Superoperator::adjoint() const {
  const Picture flipped = picture_ == Picture::schrodinger ? Picture::heisenberg : Picture::schrodinger;
  if (dense_only_) return from_dense(dense_.adjoint(), flipped);
  std::vector<SuperTerm> adj;
  adj.reserve(terms_.size());
  // Tr(X^dag c A Y B) = Tr((conj(c) A^dag X B^dag)^dag Y)
  for (const auto& t : terms_) adj.push_back({std::conj(t.coeff), t.left.adjoint(), t.right.adjoint()});
  return from_terms(std::move(adj), dim_, flipped);
}

Superoperator Superoperator::compose(const Superoperator& inner) const {
  if (inner.dim_ != dim_) throw DimensionMismatch("compose: dimension mismatch");
  if (dense_only_ || inner.dense_only_) return from_dense(dense_ * inner.dense_, picture_);
  std::vector<SuperTerm> out;
  out.reserve(terms_.size() * inner.terms_.size());
  for (const auto& a : terms_)
    for (const auto& b : inner.terms_) out.push_back({a.coeff * b.coeff, a.left * b.left, b.right * a.right});
  return from_terms(std::move(out), dim_, picture_);
}

Superoperator& Superoperator::operator+=(const Superoperator& other) {
  if (other.dim_ != dim_) throw DimensionMismatch("superoperator sum: dimension mismatch");
  dense_ += other.dense_;
  if (other.dense_only_) {
    dense_only_ = true;
    terms_.clear();
  } else if (!dense_only_) {
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  }
  return *this;
}

Superoperator& Superoperator::operator-=(const Superoperator& other) {
  Superoperator neg = other;
  neg *= -1.0;
  return *this += neg;
}

Superoperator& Superoperator::operator*=(Complex s) {
  dense_ *= s;
  for (auto& t : terms_) t.coeff *= s;
  return *this;
}

Superoperator operator+(Superoperator a, const Superoperator& b) { return a += b; }
Superoperator operator-(Superoperator a, const Superoperator& b) { return a -= b; }
Superoperator operator*(Complex s, Superoperator a) { return a *= s; }

double superop_norm_22(const Matrix& dense) { return operator_norm(dense); }
double superop_norm_22(const Superoperator& s) { return operator_norm(s.dense()); }

OrthoPair random_ortho_pair(int dim, Rng& rng) {
  Vector u = random_unit_vector(dim, rng);
  Vector v = random_unit_vector(dim, rng);
  v -= u * u.dot(v);
  const double nv = v.norm();
  if (nv < 1e-12) return random_ortho_pair(dim, rng);
  return {u, v / nv};
}

Matrix pair_operator(const OrthoPair& p) { return (p.u * p.u.adjoint() - p.v * p.v.adjoint()) / 2.0; }

std::vector<double> column_trace_norms(const Matrix& vecs, int dim) {
  std::vector<double> out(static_cast<std::size_t>(vecs.cols()));
  Matrix m(dim, dim);
  Eigen::SelfAdjointEigenSolver<Matrix> solver;
  for (Eigen::Index c = 0; c < vecs.cols(); ++c) {
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) m(i, j) = vecs(i * dim + j, c);
    const Matrix herm = (m + m.adjoint()) / 2.0;
    solver.compute(herm, Eigen::EigenvaluesOnly);
    out[static_cast<std::size_t>(c)] = solver.eigenvalues().cwiseAbs().sum();
  }
  return out;
}

namespace {

double pair_ratio(const Matrix& dense, const OrthoPair& p) {
  const Vector out = dense * vec(pair_operator(p));
  return trace_norm(unvec(out));
}

}  // namespace

double superop_norm_11_lb(const Matrix& dense, int trials, std::uint64_t seed) {
  const auto dim = static_cast<int>(std::llround(std::sqrt(static_cast<double>(dense.rows()))));
  Rng rng(seed);
  Matrix batch(dense.rows(), trials);
  std::vector<OrthoPair> pairs;
  pairs.reserve(static_cast<std::size_t>(trials));
  for (int k = 0; k < trials; ++k) {
    pairs.push_back(random_ortho_pair(dim, rng));
    batch.col(k) = vec(pair_operator(pairs.back()));
  }
  const std::vector<double> ratios = column_trace_norms(dense * batch, dim);
  const auto best_it = std::max_element(ratios.begin(), ratios.end());
  double best = *best_it;
  OrthoPair best_pair = pairs[static_cast<std::size_t>(best_it - ratios.begin())];

  // local polish around the best sample
  std::normal_distribution<double> g(0.0, 1.0);
  double step = 0.3;
  for (int it = 0; it < 400; ++it) {
    OrthoPair cand = best_pair;
    for (int i = 0; i < dim; ++i) {
      cand.u(i) += step * Complex(g(rng), g(rng));
      cand.v(i) += step * Complex(g(rng), g(rng));
    }
    cand.u /= cand.u.norm();
    cand.v -= cand.u * cand.u.dot(cand.v);
    if (cand.v.norm() < 1e-12) continue;
    cand.v /= cand.v.norm();
    const double r = pair_ratio(dense, cand);
    if (r > best) {
      best = r;
      best_pair = cand;
    } else if (it % 40 == 39) {
      step *= 0.5;
    }
  }
  return best;
}

double superop_norm_11_lb(const Superoperator& s, int trials, std::uint64_t seed) {
  return superop_norm_11_lb(s.dense(), trials, seed);
}

Matrix choi_matrix(const Matrix& dense) {
  const auto d = static_cast<int>(std::llround(std::sqrt(static_cast<double>(dense.rows()))));
  Matrix choi = Matrix::Zero(static_cast<Eigen::Index>(d) * d, static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Matrix unit = Matrix::Zero(d, d);
      unit(i, j) = 1.0;
      const Matrix img = unvec(dense * vec(unit));
      Matrix eij = Matrix::Zero(d, d);
      eij(i, j) = 1.0;
      choi += kron(eij, img);
    }
  return choi;
}

}  // namespace qgl
