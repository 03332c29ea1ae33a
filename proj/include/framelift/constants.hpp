#pragma once

#include "framelift/core.hpp"
#include "framelift/matalg.hpp"
#include "framelift/random.hpp"
#include "framelift/weights.hpp"

#include <optional>

namespace framelift {

/// Best constants lower, upper with lower ||f||_X <= ||L f||_Y <= upper ||f||_X.
///
/// Exact when `exact` is set. Otherwise each constant is bracketed:
/// lower in [lower, lower_sampled], upper in [upper_sampled, upper]; the
/// outer values are certified, the inner ones come from sampled vectors.
struct TwoSidedConstants {
  double lower = 0.0;
  double upper = 0.0;
  double lower_sampled = 0.0;
  double upper_sampled = 0.0;
  bool exact = false;

  double condition() const {
    return lower > 0 ? upper / lower : std::numeric_limits<double>::infinity();
  }
  double lower_width() const { return lower_sampled - lower; }
  double upper_width() const { return upper - upper_sampled; }
  bool isomorphism(double tol = Tolerances{}.invertible) const { return upper > 0 && lower > tol * upper; }
};

/// A norm on C^d given by ||f|| = ||w . (A f)||_{l^p}, where A is injective
/// with a known left inverse (A = C_Psi~ with left inverse D_Psi, say).
struct CoefficientNorm {
  Mat analysis;      // n x d
  Mat left_inverse;  // d x n, left_inverse * analysis = I
  Weight weight;     // length n
};

/// Constants of the map f -> L f from (C^d, dom) to (C^d, cod) in l^p.
///
/// p = 2: generalized singular values of (w_cod A_cod L, w_dom A_dom).
/// Other p: upper <= ||W_cod A_cod L D_dom W_dom^{-1}||_p, and when L^{-1} is
/// supplied, lower >= 1 / ||W_dom A_dom L^{-1} D_cod W_cod^{-1}||_p. Those
/// norms are exact for p in {1, inf} and Riesz-Thorin bounds otherwise.
inline TwoSidedConstants map_constants(const Mat& l, const std::optional<Mat>& l_inverse, const CoefficientNorm& dom,
                                       const CoefficientNorm& cod, Exponent p, Rng& rng, int samples = 256) {
  const Index d = l.rows();
  require_dims(l.cols() == d && dom.analysis.cols() == d && cod.analysis.cols() == d,
               "map_constants: ambient dimension mismatch");
  const Vec wd = dom.weight.values().cast<cplx>();
  const Vec wc = cod.weight.values().cast<cplx>();
  const Mat x = wc.asDiagonal() * (cod.analysis * l);
  const Mat y = wd.asDiagonal() * dom.analysis;

  TwoSidedConstants out;
  if (p.is(2.0)) {
    const Extremes e = generalized_singular_extremes(x, y);
    out.lower = out.lower_sampled = e.min;
    out.upper = out.upper_sampled = e.max;
    out.exact = true;
    return out;
  }

  auto norm_of = [&](const Mat& k) {
    if (p.exact_norm_available()) return induced_norm(k, p);
    return induced_norm_bracket(k, p, rng, 64).upper;
  };
  const Vec wd_inv = dom.weight.reciprocal().values().cast<cplx>();
  const Vec wc_inv = cod.weight.reciprocal().values().cast<cplx>();
  out.upper = norm_of(x * dom.left_inverse * wd_inv.asDiagonal());
  if (l_inverse) {
    const Mat back = wd.asDiagonal() * (dom.analysis * (*l_inverse) * cod.left_inverse) * wc_inv.asDiagonal();
    const double nb = norm_of(back);
    out.lower = nb > 0 ? 1.0 / nb : 0.0;
  }

  const Weight ones = Weight::constant(x.rows());
  const Weight ones_dom = Weight::constant(y.rows());
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Vec f = rng.complex_vector(d);
    const double den = weighted_norm(y * f, p, ones_dom);
    if (den == 0.0) continue;
    const double r = weighted_norm(x * f, p, ones) / den;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  out.lower_sampled = std::isfinite(lo) ? lo : 0.0;
  out.upper_sampled = hi;
  // Sampled values never beat the certified ones beyond rounding.
  out.lower = std::min(out.lower, out.lower_sampled);
  out.upper_sampled = std::min(out.upper_sampled, out.upper);
  return out;
}

}  // namespace framelift
