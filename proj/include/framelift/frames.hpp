#pragma once

#include "framelift/core.hpp"
#include "framelift/matalg.hpp"
#include "framelift/random.hpp"
#include "framelift/weights.hpp"

#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

namespace framelift {

struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
  bool is_frame(double tol = Tolerances{}.frame) const { return upper > 0 && lower > tol * upper; }
};

/// Extreme eigenvalues of Psi Psi*. Never throws on rank deficiency.
inline FrameBounds frame_bounds(const Mat& vectors) {
  if (vectors.rows() == 0) return {};
  const Mat s = vectors * vectors.adjoint();
  Eigen::SelfAdjointEigenSolver<Mat> eig(s, Eigen::EigenvaluesOnly);
  const RVec& ev = eig.eigenvalues();
  return {std::max(0.0, ev(0)), ev(ev.size() - 1)};
}

/// Finite frame in C^d, vectors stored as the n columns of a d x n matrix.
/// Immutable; Gram matrix and canonical dual are computed once on demand.
class Frame {
 public:
  explicit Frame(Mat vectors, std::shared_ptr<const IndexSet> index = nullptr, double frame_tol = Tolerances{}.frame)
      : vectors_(std::move(vectors)), index_(std::move(index)), cache_(std::make_shared<Cache>()) {
    if (!index_) index_ = std::make_shared<const IndexSet>(IndexSet::line(vectors_.cols()));
    require_dims(index_->size() == vectors_.cols(), "Frame: index set size differs from vector count");
    require_dims(vectors_.rows() > 0, "Frame: ambient dimension must be positive");
    frame_operator_ = vectors_ * vectors_.adjoint();
    bounds_ = frame_bounds(vectors_);
    if (!bounds_.is_frame(frame_tol)) throw NotAFrameError(bounds_.lower, bounds_.upper);
  }

  static Frame orthonormal_basis(Index d) { return Frame(Mat::Identity(d, d)); }

  Index dim() const { return vectors_.rows(); }
  Index count() const { return vectors_.cols(); }
  const Mat& vectors() const { return vectors_; }
  const IndexSet& index_set() const { return *index_; }
  const std::shared_ptr<const IndexSet>& index_ptr() const { return index_; }

  /// (C f)_k = <f, psi_k>
  Vec analysis(const Vec& f) const {
    require_dims(f.size() == dim(), "Frame::analysis: vector length differs from ambient dimension");
    return vectors_.adjoint() * f;
  }
  /// D c = sum_k c_k psi_k
  Vec synthesis(const Vec& c) const {
    require_dims(c.size() == count(), "Frame::synthesis: sequence length differs from frame size");
    return vectors_ * c;
  }
  Mat analysis_matrix() const { return vectors_.adjoint(); }
  const Mat& synthesis_matrix() const { return vectors_; }
  const Mat& frame_operator() const { return frame_operator_; }
  const FrameBounds& bounds() const { return bounds_; }

  /// G_kl = <psi_l, psi_k>
  const Mat& gram() const {
    std::call_once(cache_->gram_once, [this] { cache_->gram = vectors_.adjoint() * vectors_; });
    return cache_->gram;
  }

  /// psi~_k = S^{-1} psi_k
  const Mat& dual_vectors() const {
    std::call_once(cache_->dual_once, [this] { cache_->dual = frame_operator_.llt().solve(vectors_); });
    return cache_->dual;
  }

  /// Canonical dual as a frame over the same index set.
  Frame dual() const { return Frame(dual_vectors(), index_, FrameBounds{1.0 / bounds_.upper, 1.0 / bounds_.lower}); }

 private:
  struct Cache {
    std::once_flag gram_once;
    std::once_flag dual_once;
    Mat gram;
    Mat dual;
  };

  Frame(Mat vectors, std::shared_ptr<const IndexSet> index, FrameBounds known)
      : vectors_(std::move(vectors)), index_(std::move(index)), bounds_(known), cache_(std::make_shared<Cache>()) {
    frame_operator_ = vectors_ * vectors_.adjoint();
  }

  Mat vectors_;
  std::shared_ptr<const IndexSet> index_;
  Mat frame_operator_;
  FrameBounds bounds_;
  std::shared_ptr<Cache> cache_;
};

inline FrameBounds frame_bounds(const Frame& f) { return f.bounds(); }

inline Frame canonical_dual(const Frame& f) { return f.dual(); }

/// G_Psi, or the cross-Gram G_{Psi,Phi} = C_Psi D_Phi when a second frame is given.
inline Mat gram(const Frame& psi) { return psi.gram(); }
inline Mat gram(const Frame& psi, const Frame& phi) {
  require_dims(psi.dim() == phi.dim(), "gram: frames live in different ambient dimensions");
  return psi.vectors().adjoint() * phi.vectors();
}

/// G_{Psi,Psi~}: the orthogonal projection of C^n onto ran C_Psi.
inline Mat coefficient_projection(const Frame& psi) { return psi.vectors().adjoint() * psi.dual_vectors(); }

/// Orthonormal basis of ker D_Psi (columns).
inline Mat synthesis_kernel(const Frame& psi, double rel_tol = Tolerances{}.rank) {
  return null_space(psi.vectors(), rel_tol);
}

struct NamedResidual {
  std::string name;
  double value;
};

struct GramIdentityReport {
  std::vector<NamedResidual> residuals;
  double projection_trace = 0.0;
  double max() const {
    double m = 0.0;
    for (const auto& r : residuals) m = std::max(m, r.value);
    return m;
  }
  bool ok(double tol = Tolerances{}.identity) const { return max() < tol; }
  double get(const std::string& name) const {
    for (const auto& r : residuals)
      if (r.name == name) return r.value;
    throw std::out_of_range("GramIdentityReport: no residual named " + name);
  }
};

/// Reconstruction, Gram products, pseudo-inverse formulas for the dual Grams,
/// and the projection laws of P = G_{Psi,Psi~}. Residuals are relative.
inline GramIdentityReport gram_identities_check(const Frame& psi, Rng& rng, const Tolerances& tol = {}) {
  GramIdentityReport rep;
  auto add = [&](std::string name, double v) { rep.residuals.push_back({std::move(name), v}); };
  const Index d = psi.dim();
  const Index n = psi.count();
  const Mat& v = psi.vectors();
  const Mat& vd = psi.dual_vectors();
  const Mat id_d = Mat::Identity(d, d);

  add("reconstruction_dual_coefficients", relative_residual(v * vd.adjoint(), id_d));
  add("reconstruction_frame_coefficients", relative_residual(vd * v.adjoint(), id_d));
  const Vec f = rng.complex_vector(d);
  add("reconstruction_random_vector", (v * (vd.adjoint() * f) - f).norm() / f.norm());

  const Mat& g = psi.gram();
  const Mat gd = vd.adjoint() * vd;
  const Mat p = v.adjoint() * vd;
  add("gram_product", relative_residual(g * gd, p));

  const Mat gp = pseudo_inverse(g, tol.rank);
  add("cross_gram_pinv", relative_residual(gp * g, p));
  add("dual_gram_pinv", relative_residual(gp * gp * g, gd));

  add("projection_idempotent", relative_residual(p * p, p));
  add("projection_selfadjoint", relative_residual(p.adjoint(), p));
  const Mat c = v.adjoint();
  add("projection_fixes_range", relative_residual(p * c, c));
  const Mat ker = synthesis_kernel(psi, tol.rank);
  add("projection_kills_kernel", ker.cols() ? max_abs(p * ker) : 0.0);
  const Vec seq = rng.complex_vector(n);
  add("synthesis_kills_complement", (v * (seq - p * seq)).norm() / std::max(1.0, seq.norm()));
  rep.projection_trace = p.trace().real();
  add("projection_rank", std::abs(rep.projection_trace - static_cast<double>(d)) / std::max<double>(1.0, d));
  return rep;
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

/// n i.i.d. complex Gaussian vectors in C^d (a frame with probability one for n >= d).
inline Frame random_frame(Index d, Index n, Rng& rng) { return Frame(rng.complex_matrix(d, n)); }

/// Tight frame with bound A: sqrt(A) times d rows of an n x n unitary.
inline Frame tight_frame(Index d, Index n, double bound, Rng& rng) {
  require_dims(n >= d, "tight_frame: need n >= d");
  const Mat u = rng.unitary(n);
  return Frame(std::sqrt(bound) * u.topRows(d));
}

/// Union of k orthonormal bases of C^d (first one standard, the rest random).
inline Frame union_of_bases(Index d, int k, Rng& rng) {
  Mat v(d, d * k);
  v.leftCols(d) = Mat::Identity(d, d);
  for (int j = 1; j < k; ++j) v.middleCols(j * d, d) = rng.unitary(d);
  return Frame(std::move(v));
}

}  // namespace framelift
