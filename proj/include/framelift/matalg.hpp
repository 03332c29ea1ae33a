#pragma once

#include "framelift/core.hpp"
#include "framelift/random.hpp"
#include "framelift/weights.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace framelift {

// ---------------------------------------------------------------------------
// Spectral helpers
// ---------------------------------------------------------------------------

/// Singular values in decreasing order.
inline RVec singular_values(const Mat& a) {
  if (a.size() == 0) return RVec();
  Eigen::BDCSVD<Mat> svd(a);
  return svd.singularValues();
}

/// sigma_min / sigma_max over min(rows, cols) singular values; 0 for a zero matrix.
inline double sigma_ratio(const Mat& a) {
  const RVec s = singular_values(a);
  if (s.size() == 0 || s(0) == 0.0) return 0.0;
  return s(s.size() - 1) / s(0);
}

inline bool numerically_invertible(const Mat& a, double tol = Tolerances{}.invertible) {
  return a.rows() == a.cols() && sigma_ratio(a) > tol;
}

/// Orthonormal basis (columns) of ker(a); rank decided by the relative threshold.
inline Mat null_space(const Mat& a, double rel_tol = Tolerances{}.rank) {
  Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeFullV);
  const RVec& s = svd.singularValues();
  const double cut = s.size() ? rel_tol * s(0) : 0.0;
  Index rank = 0;
  while (rank < s.size() && s(rank) > cut) ++rank;
  return svd.matrixV().rightCols(a.cols() - rank);
}

struct Extremes {
  double min = 0.0;
  double max = 0.0;
};

/// Extremes of ||X f|| / ||Y f|| over f != 0. Y must have full column rank.
inline Extremes generalized_singular_extremes(const Mat& x, const Mat& y) {
  require_dims(x.cols() == y.cols(), "generalized_singular_extremes: column count mismatch");
  require_dims(y.rows() >= y.cols(), "generalized_singular_extremes: Y must have at least as many rows as columns");
  const Index d = y.cols();
  Eigen::HouseholderQR<Mat> qr(y);
  const Mat r = qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
  const RVec rd = r.diagonal().cwiseAbs();
  if (d > 0 && rd.minCoeff() <= 1e-14 * rd.maxCoeff())
    throw PreconditionError("generalized_singular_extremes: Y is rank deficient");
  Mat k = x;
  r.triangularView<Eigen::Upper>().solveInPlace<Eigen::OnTheRight>(k);
  const RVec s = singular_values(k);
  if (s.size() == 0) return {};
  // k has min(n, d) singular values; when n < d the map has a kernel.
  const double lo = k.rows() < d ? 0.0 : s(s.size() - 1);
  return {lo, s(0)};
}

// ---------------------------------------------------------------------------
// Off-diagonal decay
// ---------------------------------------------------------------------------

struct DecayProfile {
  double s = 0.0;
  double constant = 0.0;
  Index rows = 0;
  Index cols = 0;
  Index argmax_row = 0;
  Index argmax_col = 0;
};

/// Minimal C with |a_kl| <= C (1 + dist(k,l))^{-s} on the finite index set.
inline DecayProfile decay_constant(const Mat& a, double s, const IndexSet& index) {
  require_dims(a.rows() == a.cols(), "decay_constant: matrix must be square");
  require_dims(a.rows() == index.size(), "decay_constant: matrix size differs from index set size");
  if (!(s > 0)) throw std::invalid_argument("decay_constant: s must be positive");
  DecayProfile out{s, 0.0, a.rows(), a.cols(), 0, 0};
  for (Index l = 0; l < a.cols(); ++l)
    for (Index k = 0; k < a.rows(); ++k) {
      const double v = std::abs(a(k, l)) * std::pow(1.0 + index.distance(k, l), s);
      if (v > out.constant) {
        out.constant = v;
        out.argmax_row = k;
        out.argmax_col = l;
      }
    }
  return out;
}

/// max_k sum_l (1 + dist(k,l))^{-s}
inline double schur_constant(double s, const IndexSet& index) {
  double best = 0.0;
  for (Index k = 0; k < index.size(); ++k) {
    double acc = 0.0;
    for (Index l = 0; l < index.size(); ++l) acc += std::pow(1.0 + index.distance(k, l), -s);
    best = std::max(best, acc);
  }
  return best;
}

/// Constant K with decay(AB, s) <= K decay(A, s) decay(B, s) on this index set.
/// Follows from (1+d_kj)^s <= 2^s ((1+d_kl)^s + (1+d_lj)^s).
inline double algebra_constant(double s, const IndexSet& index) {
  return std::pow(2.0, s + 1.0) * schur_constant(s, index);
}

// ---------------------------------------------------------------------------
// Diagonal conjugation  B^mu = diag(mu) B diag(1/mu)
// ---------------------------------------------------------------------------

inline Mat conjugate(const Mat& a, const Weight& mu) {
  require_dims(a.rows() == a.cols(), "conjugate: matrix must be square");
  require_dims(a.rows() == mu.size(), "conjugate: matrix size differs from weight length");
  Mat out(a.rows(), a.cols());
  const RVec& w = mu.values();
  for (Index l = 0; l < a.cols(); ++l)
    for (Index k = 0; k < a.rows(); ++k) out(k, l) = a(k, l) * (w(k) / w(l));
  return out;
}

// ---------------------------------------------------------------------------
// Moore-Penrose pseudo-inverse
// ---------------------------------------------------------------------------

inline Mat pseudo_inverse(const Mat& a, double rel_tol = Tolerances{}.rank) {
  if (a.size() == 0) return Mat(a.cols(), a.rows());
  Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVec& s = svd.singularValues();
  const double cut = rel_tol * s(0);
  RVec inv = RVec::Zero(s.size());
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) inv(i) = 1.0 / s(i);
  return svd.matrixV() * inv.cast<cplx>().asDiagonal() * svd.matrixU().adjoint();
}

/// Moore-Penrose inverse with respect to the l^2_w inner product on domain
/// and codomain: W^{-1} (W A W^{-1})^dagger W.
inline Mat weighted_pseudo_inverse(const Mat& a, const Weight& w, double rel_tol = Tolerances{}.rank) {
  return conjugate(pseudo_inverse(conjugate(a, w), rel_tol), w.reciprocal());
}

struct PenroseResiduals {
  double axa = 0.0;   // A X A = A
  double xax = 0.0;   // X A X = X
  double ax_h = 0.0;  // (AX)* = AX
  double xa_h = 0.0;  // (XA)* = XA
  double max() const { return std::max({axa, xax, ax_h, xa_h}); }
};

inline PenroseResiduals penrose_residuals(const Mat& a, const Mat& x) {
  const Mat ax = a * x;
  const Mat xa = x * a;
  return {relative_residual(ax * a, a), relative_residual(xa * x, x), relative_residual(ax.adjoint(), ax),
          relative_residual(xa.adjoint(), xa)};
}

// ---------------------------------------------------------------------------
// Induced operator norms on weighted l^p
// ---------------------------------------------------------------------------

struct NormBracket {
  double lower = 0.0;
  double upper = 0.0;
  bool exact = false;
  double width() const { return upper - lower; }
};

namespace detail {

inline double column_sum_norm(const Mat& a) { return a.size() ? a.cwiseAbs().colwise().sum().maxCoeff() : 0.0; }
inline double row_sum_norm(const Mat& a) { return a.size() ? a.cwiseAbs().rowwise().sum().maxCoeff() : 0.0; }
inline double spectral_norm(const Mat& a) {
  const RVec s = singular_values(a);
  return s.size() ? s(0) : 0.0;
}

inline double lp_norm(const Vec& v, Exponent p) { return weighted_norm(v, p, Weight::constant(v.size())); }

/// Hoelder dual direction: <y, dual(y)> = ||y||_p, ||dual(y)||_{p'} = 1.
inline Vec dual_direction(const Vec& y, Exponent p) {
  const double q = p.value();
  const double ny = lp_norm(y, p);
  Vec out = Vec::Zero(y.size());
  if (ny == 0.0) return out;
  for (Index i = 0; i < y.size(); ++i) {
    const double a = std::abs(y(i));
    if (a == 0.0) continue;
    out(i) = (y(i) / a) * std::pow(a / ny, q - 1.0);
  }
  return out;
}

}  // namespace detail

/// Exact ||A||_{p -> p} for p in {1, 2, inf}.
inline double induced_norm(const Mat& a, Exponent p) {
  if (p.is_infinite()) return detail::row_sum_norm(a);
  if (p.is(1.0)) return detail::column_sum_norm(a);
  if (p.is(2.0)) return detail::spectral_norm(a);
  throw std::invalid_argument("induced_norm: exact value only for p in {1, 2, inf}; use induced_norm_bracket");
}

/// Riesz-Thorin upper bound combined with a sampled lower bound. Exact (and
/// collapsed) for p in {1, 2, inf}.
inline NormBracket induced_norm_bracket(const Mat& a, Exponent p, Rng& rng, int samples = 64) {
  if (p.exact_norm_available()) {
    const double v = induced_norm(a, p);
    return {v, v, true};
  }
  const double q = p.value();
  const double n1 = detail::column_sum_norm(a);
  const double n2 = detail::spectral_norm(a);
  const double ninf = detail::row_sum_norm(a);
  double upper = std::pow(n1, 1.0 / q) * std::pow(ninf, 1.0 - 1.0 / q);
  if (q < 2.0) {
    const double theta = 2.0 * (1.0 - 1.0 / q);
    upper = std::min(upper, std::pow(n1, 1.0 - theta) * std::pow(n2, theta));
  } else {
    const double theta = 1.0 - 2.0 / q;
    upper = std::min(upper, std::pow(n2, 1.0 - theta) * std::pow(ninf, theta));
  }

  double lower = 0.0;
  Vec best = Vec::Zero(a.cols());
  auto consider = [&](const Vec& x) {
    const double nx = detail::lp_norm(x, p);
    if (nx == 0.0) return;
    const double r = detail::lp_norm(a * x, p) / nx;
    if (r > lower) {
      lower = r;
      best = x;
    }
  };
  for (Index j = 0; j < a.cols(); ++j) consider(Vec::Unit(a.cols(), j));
  for (int i = 0; i < samples; ++i) consider(rng.complex_vector(a.cols()));
  // Power-type refinement (Boyd / Higham); every iterate is a valid lower bound.
  Vec x = best;
  const Exponent pc = p.conjugate();
  for (int it = 0; it < 20 && x.size(); ++it) {
    const Vec z = a.adjoint() * detail::dual_direction(a * x, p);
    x = detail::dual_direction(z, pc);
    consider(x);
  }
  return {std::min(lower, upper), upper, false};
}

/// ||A||_{l^p_w -> l^p_w} = ||diag(w) A diag(1/w)||_p
inline NormBracket weighted_induced_norm(const Mat& a, const Weight& w, Exponent p, Rng& rng, int samples = 64) {
  return induced_norm_bracket(conjugate(a, w), p, rng, samples);
}

// ---------------------------------------------------------------------------
// Invertibility transfer through a weighted l^2 space
// ---------------------------------------------------------------------------

struct WeightedNormEntry {
  std::string weight_label;
  Exponent p;
  NormBracket norm_b;
  NormBracket norm_inverse;
};

struct WeightedInvertibilityReport {
  bool precondition_ok = false;
  std::string precondition_message;
  double sigma_ratio = 0.0;  // of B^mu
  DecayProfile conjugated_decay;
  double residual_cb = 0.0;  // ||C B - I||
  double residual_bc = 0.0;  // ||B C - I||
  Mat inverse;
  std::vector<WeightedNormEntry> norms;
  bool ok(double tol = Tolerances{}.identity) const {
    return precondition_ok && residual_cb < tol && residual_bc < tol;
  }
};

/// Builds C = diag(1/mu) (B^mu)^{-1} diag(mu), checks C B = B C = I and
/// reports the norms of B and C on l^p_{mu m} for each test weight m.
inline WeightedInvertibilityReport verify_weighted_invertibility(const Mat& b, const Weight& mu, double s,
                                                                 const IndexSet& index,
                                                                 const std::vector<LabeledWeight>& test_weights,
                                                                 const std::vector<Exponent>& ps, Rng& rng,
                                                                 const Tolerances& tol = {}) {
  require_dims(b.rows() == b.cols() && b.rows() == mu.size(), "verify_weighted_invertibility: dimension mismatch");
  WeightedInvertibilityReport rep;
  const Mat bmu = conjugate(b, mu);
  rep.sigma_ratio = sigma_ratio(bmu);
  rep.conjugated_decay = decay_constant(bmu, s, index);
  if (!(rep.sigma_ratio > tol.invertible)) {
    rep.precondition_message = "B is not invertible on l^2_mu (sigma_min/sigma_max = " + std::to_string(rep.sigma_ratio) + ")";
    return rep;
  }
  if (!std::isfinite(rep.conjugated_decay.constant)) {
    rep.precondition_message = "B^mu has no finite decay constant";
    return rep;
  }
  rep.precondition_ok = true;
  const Mat bmu_inv = bmu.partialPivLu().inverse();
  rep.inverse = conjugate(bmu_inv, mu.reciprocal());
  const Mat id = Mat::Identity(b.rows(), b.cols());
  rep.residual_cb = relative_residual(rep.inverse * b, id);
  rep.residual_bc = relative_residual(b * rep.inverse, id);
  for (const auto& tw : test_weights) {
    const Weight w = mu * tw.weight;
    for (const auto& p : ps) {
      rep.norms.push_back({tw.label, p, weighted_induced_norm(b, w, p, rng), weighted_induced_norm(rep.inverse, w, p, rng)});
    }
  }
  return rep;
}

}  // namespace framelift
