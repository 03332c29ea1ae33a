#pragma once
// Brute-force reference computations. Each takes a different numerical route
// from the library code it checks.

#include "framelift/core.hpp"
#include "framelift/random.hpp"

#include <Eigen/Eigenvalues>

#include <complex>
#include <vector>

namespace oracle {

using framelift::cplx;
using framelift::Index;
using framelift::Mat;
using framelift::RMat;
using framelift::RVec;
using framelift::Vec;

inline double lp_weighted(const Vec& c, double p, const RVec& m) {
  double acc = 0.0;
  for (Index k = 0; k < c.size(); ++k) acc += std::pow(m(k) * std::abs(c(k)), p);
  return std::pow(acc, 1.0 / p);
}

inline double linf_weighted(const Vec& c, const RVec& m) {
  double best = 0.0;
  for (Index k = 0; k < c.size(); ++k) best = std::max(best, m(k) * std::abs(c(k)));
  return best;
}

/// Pseudo-inverse via the eigendecomposition of A* A.
inline Mat pinv_eig(const Mat& a, double rel = 1e-10) {
  const Mat h = a.adjoint() * a;
  Eigen::SelfAdjointEigenSolver<Mat> eig(h);
  const RVec ev = eig.eigenvalues();
  const double top = ev.cwiseAbs().maxCoeff();
  RVec inv = RVec::Zero(ev.size());
  for (Index i = 0; i < ev.size(); ++i)
    if (ev(i) > rel * rel * top) inv(i) = 1.0 / ev(i);
  return eig.eigenvectors() * inv.cast<cplx>().asDiagonal() * eig.eigenvectors().adjoint() * a.adjoint();
}

/// Extreme frame bounds as squared singular values of the synthesis matrix.
inline std::pair<double, double> frame_bounds_svd(const Mat& v) {
  Eigen::JacobiSVD<Mat> svd(v);
  const RVec s = svd.singularValues();
  const double lo = v.rows() <= v.cols() ? s(s.size() - 1) : 0.0;
  return {lo * lo, s(0) * s(0)};
}

/// Extremes of (f* A f) / (f* B f), B positive definite.
inline std::pair<double, double> generalized_eig_extremes(const Mat& a, const Mat& b) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> ges(a, b, Eigen::EigenvaluesOnly);
  const RVec ev = ges.eigenvalues();
  return {ev(0), ev(ev.size() - 1)};
}

/// Canonical dual by dense inverse of S.
inline Mat dual_by_inverse(const Mat& v) { return (v * v.adjoint()).inverse() * v; }

/// Smallest/largest singular value via the eigenvalues of A* A (square A).
inline std::pair<double, double> sigma_extremes(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(a.adjoint() * a, Eigen::EigenvaluesOnly);
  const RVec ev = eig.eigenvalues();
  return {std::sqrt(std::max(0.0, ev(0))), std::sqrt(ev(ev.size() - 1))};
}

/// pi(x, w) applied entrywise.
inline Vec tf(const Vec& f, Index x, Index w) {
  const Index n = f.size();
  Vec out(n);
  for (Index t = 0; t < n; ++t) {
    const Index src = ((t - x) % n + n) % n;
    out(t) = std::exp(cplx(0.0, 2.0 * M_PI * double(w) * double(t) / double(n))) * f(src);
  }
  return out;
}

/// Fock kernel inner product by direct series summation (small |lambda| only).
inline cplx fock_inner_series(cplx a, cplx b, int terms = 200) {
  // <psi_b, psi_a> = e^{-pi(|a|^2+|b|^2)/2} sum_n (pi a conj(b))^n / n!
  const cplx z = M_PI * a * std::conj(b);
  cplx term = 1.0;
  cplx acc = 0.0;
  for (int n = 0; n < terms; ++n) {
    acc += term;
    term *= z / double(n + 1);
  }
  return acc * std::exp(-0.5 * M_PI * (std::norm(a) + std::norm(b)));
}

/// Number of points within distance r of z.
inline int count_in_disk(const std::vector<cplx>& pts, cplx z, double r) {
  int c = 0;
  for (const auto& p : pts)
    if (std::abs(p - z) <= r + 1e-12) ++c;
  return c;
}

}  // namespace oracle
