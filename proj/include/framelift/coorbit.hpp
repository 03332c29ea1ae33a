#pragma once

#include "framelift/constants.hpp"
#include "framelift/core.hpp"
#include "framelift/frames.hpp"
#include "framelift/matalg.hpp"
#include "framelift/multipliers.hpp"
#include "framelift/random.hpp"
#include "framelift/weights.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace framelift {

/// H^p_m over a frame: ||f|| = ||C_Psi~ f||_{l^p_m}.
struct CoorbitSpace {
  Frame frame;
  Exponent p;
  Weight m;
};

inline double coorbit_norm(const CoorbitSpace& h, const Vec& f) {
  require_dims(f.size() == h.frame.dim(), "coorbit_norm: vector length differs from ambient dimension");
  return weighted_norm(h.frame.dual_vectors().adjoint() * f, h.p, h.m);
}

/// Norm of the dual space H^{p'}_{1/m}, measured with frame coefficients C_Psi g.
inline double coorbit_dual_norm(const CoorbitSpace& h, const Vec& g) {
  return weighted_norm(h.frame.analysis(g), h.p.conjugate(), h.m.reciprocal());
}

/// sum_k <f, psi~_k> conj(<g, psi_k>); equals <f, g>.
inline cplx duality_pairing(const Vec& f, const Vec& g, const Frame& psi) {
  require_dims(f.size() == psi.dim() && g.size() == psi.dim(), "duality_pairing: dimension mismatch");
  return sequence_pairing(psi.dual_vectors().adjoint() * f, psi.analysis(g));
}

inline cplx duality_pairing(const Vec& f, const Vec& g, const CoorbitSpace& h) { return duality_pairing(f, g, h.frame); }

/// Constants c_low, c_high with c_low ||C_Psi~ f|| <= ||C_Phi f|| <= c_high ||C_Psi~ f|| in l^p_m.
inline TwoSidedConstants equivalence_constants(const CoorbitSpace& h, const Frame& alt, Rng& rng, int samples = 256) {
  require_dims(alt.dim() == h.frame.dim(), "equivalence_constants: frames live in different ambient dimensions");
  require_dims(alt.count() == h.m.size(), "equivalence_constants: weight length differs from alternative frame size");
  const CoefficientNorm dom{h.frame.dual_vectors().adjoint(), h.frame.vectors(), h.m};
  const CoefficientNorm cod{alt.vectors().adjoint(), alt.dual_vectors(), h.m};
  const Index d = h.frame.dim();
  return map_constants(Mat::Identity(d, d), Mat(Mat::Identity(d, d)), dom, cod, h.p, rng, samples);
}

// ---------------------------------------------------------------------------
// Coercivity
// ---------------------------------------------------------------------------

struct CoercivityReport {
  int draws = 0;
  double identity_residual = 0.0;  // max relative | <M f, f> - sum mu |<f,psi>|^2 |
  double imaginary_part = 0.0;     // max |Im <M f, f>| / |<M f, f>|
  Extremes ambient;                // [f,f] / ||f||^2
  Extremes coorbit;                // [f,f] / ||f||^2_{H^2_sqrt(mu)}
  Extremes sampled_coorbit;
  double mapping_lower = 0.0;      // M_mu: H^2_sqrt(mu) -> H^2_{1/sqrt(mu)}
  double mapping_upper = 0.0;
  bool injective = false;
  bool surjective = false;
};

/// [f,f] = <M_mu f, f> = sum_k mu_k |<f, psi_k>|^2 and its two-sided bounds.
inline CoercivityReport coercivity_check(const Frame& psi, const Weight& mu, Rng& rng, int draws = 100,
                                         const Tolerances& tol = {}) {
  require_dims(mu.size() == psi.count(), "coercivity_check: weight length differs from frame size");
  CoercivityReport rep;
  rep.draws = draws;
  const Mat m = multiplier(mu, psi).matrix;
  const Vec sq = mu.sqrt().values().cast<cplx>();
  const Mat c = psi.vectors().adjoint();
  const Mat cd = psi.dual_vectors().adjoint();
  const Mat x = sq.asDiagonal() * c;
  const Mat y = sq.asDiagonal() * cd;

  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int i = 0; i < draws; ++i) {
    const Vec f = rng.complex_vector(psi.dim());
    const cplx form = f.dot(m * f);
    const Vec coef = c * f;
    double direct = 0.0;
    for (Index k = 0; k < coef.size(); ++k) direct += mu[k] * std::norm(coef(k));
    rep.identity_residual = std::max(rep.identity_residual, std::abs(form - direct) / direct);
    rep.imaginary_part = std::max(rep.imaginary_part, std::abs(form.imag()) / std::abs(form));
    const double r = direct / (y * f).squaredNorm();
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  rep.sampled_coorbit = {draws ? lo : 0.0, hi};

  const RVec sv = singular_values(x);
  rep.ambient = {x.rows() < x.cols() ? 0.0 : sv(sv.size() - 1) * sv(sv.size() - 1), sv(0) * sv(0)};
  const Extremes g = generalized_singular_extremes(x, y);
  rep.coorbit = {g.min * g.min, g.max * g.max};

  const Vec isq = mu.sqrt().reciprocal().values().cast<cplx>();
  const Extremes map = generalized_singular_extremes(isq.asDiagonal() * (cd * m), y);
  rep.mapping_lower = map.min;
  rep.mapping_upper = map.max;
  rep.injective = map.max > 0 && map.min > tol.invertible * map.max;
  // Square map between spaces of equal finite dimension.
  rep.surjective = rep.injective;
  return rep;
}

// ---------------------------------------------------------------------------
// Lifting constants  M_mu : H^p_{m sqrt(mu)} -> H^p_{m / sqrt(mu)}
// ---------------------------------------------------------------------------

inline TwoSidedConstants lifting_constants(const Frame& psi, const Weight& mu, const Weight& m, Exponent p, Rng& rng,
                                           int samples = 256, const Tolerances& tol = {}) {
  require_dims(mu.size() == psi.count() && m.size() == psi.count(), "lifting_constants: weight length mismatch");
  const Mat mm = multiplier(mu, psi).matrix;
  std::optional<Mat> inv;
  if (numerically_invertible(mm, tol.invertible)) inv = mm.partialPivLu().inverse();
  const Mat a = psi.dual_vectors().adjoint();
  const Weight sq = mu.sqrt();
  const CoefficientNorm dom{a, psi.vectors(), m * sq};
  const CoefficientNorm cod{a, psi.vectors(), m / sq};
  return map_constants(mm, inv, dom, cod, p, rng, samples);
}

// ---------------------------------------------------------------------------
// Lifting pipeline
// ---------------------------------------------------------------------------

struct DecayEntry {
  std::string name;
  DecayProfile profile;
};

struct ModeratenessEntry {
  std::string name;
  double constant = 0.0;
  bool flagged = false;  // constant above LiftingOptions::moderateness_flag
};

struct LiftingPerP {
  Exponent p;
  std::string weight_label;
  TwoSidedConstants constants;
};

struct LiftingOptions {
  std::vector<Exponent> ps{Exponent(2.0)};
  double s = 4.0;
  std::optional<GrowthProfile> moderateness;  // default: polynomial with exponent s
  double moderateness_flag = 100.0;
  int samples = 256;
  std::uint64_t seed = 1;
  std::string weight_label = "m";
  Tolerances tol;
};

struct LiftingReport {
  bool passed = false;
  std::string failed_step;  // empty when passed
  std::string failure_message;

  Index dim = 0;
  Index count = 0;
  FrameBounds frame_bounds;
  double s = 0.0;
  std::uint64_t seed = 0;
  int samples = 0;

  std::vector<ModeratenessEntry> moderateness;
  std::string moderateness_profile;
  std::vector<DecayEntry> decay;

  // (i)
  double composition_residual = 0.0;  // Mat(M_{1/mu} M_mu) vs G G^{1/mu} G
  double b_sigma_ratio = 0.0;         // of B on l^2_sqrt(mu)
  bool b_invertible = false;
  // (iii)
  double conjugation_residual = 0.0;
  // (iv), (v)
  WeightedInvertibilityReport forward;   // B on l^p_{m sqrt(mu)}
  WeightedInvertibilityReport backward;  // mu -> 1/mu
  // verdicts
  bool forward_composition_invertible = false;   // M_{1/mu} M_mu on C^d
  bool backward_composition_invertible = false;  // M_mu M_{1/mu} on C^d
  bool composition_verdicts_agree = false;

  std::vector<LiftingPerP> per_p;
  double lower = 0.0;
  double upper = 0.0;
  double condition = std::numeric_limits<double>::infinity();
  std::vector<std::string> notes;
};

namespace detail {

inline LiftingReport fail(LiftingReport rep, std::string step, std::string message) {
  rep.passed = false;
  rep.failed_step = std::move(step);
  rep.failure_message = std::move(message);
  return rep;
}

}  // namespace detail

/// Runs the lifting argument as computation on one frame:
///  (i)   B = G G^{1/mu} G + I - P, invertible on l^2_sqrt(mu);
///  (ii)  decay of G, G^mu, G^{1/mu}, G_dual^mu, P^mu;
///  (iii) B^mu = G^mu G G^mu + I - P^mu;
///  (iv)  B invertible on l^p_{m sqrt(mu)};
///  (v)   the same with mu -> 1/mu;
/// then the lifting constants for every p.
inline LiftingReport lifting_theorem_pipeline(const Frame& psi, const RVec& mu_values, const Weight& m,
                                              const LiftingOptions& opt = {}) {
  LiftingReport rep;
  rep.dim = psi.dim();
  rep.count = psi.count();
  rep.frame_bounds = psi.bounds();
  rep.s = opt.s;
  rep.seed = opt.seed;
  rep.samples = opt.samples;
  rep.notes.push_back("p = 0 coincides with p = inf in finite dimension");
  rep.notes.push_back("inverse-closedness of the decay algebra is a hypothesis; finite sizes can only fail to falsify it");

  if (opt.ps.empty()) throw std::invalid_argument("lifting_theorem_pipeline: no exponents requested");
  const Index n = psi.count();
  require_dims(mu_values.size() == n && m.size() == n, "lifting_theorem_pipeline: weight length differs from frame size");
  for (Index k = 0; k < n; ++k)
    if (!(mu_values(k) > 0) || !std::isfinite(mu_values(k)))
      return detail::fail(rep, "mu > 0", "mu is not strictly positive at index " + std::to_string(k));
  const auto idx = psi.index_ptr();
  const Weight mu(mu_values, idx);
  const Weight m_idx(m.values(), idx);
  const Weight sq = mu.sqrt();
  const Tolerances& tol = opt.tol;
  Rng rng(opt.seed);

  // Hypothesis logging.
  const GrowthProfile profile = opt.moderateness ? *opt.moderateness : GrowthProfile::polynomial(opt.s);
  rep.moderateness_profile = profile.label;
  const std::vector<LabeledWeight> logged{
      {"mu", mu}, {"m", m_idx}, {"sqrt_mu", sq}, {"m_sqrt_mu", m_idx * sq}, {"m_over_sqrt_mu", m_idx / sq}};
  for (const auto& w : logged) {
    const double c = moderateness_constant(w.weight, *idx, profile);
    rep.moderateness.push_back({w.label, c, c > opt.moderateness_flag});
  }

  const Mat& g = psi.gram();
  const Mat p = coefficient_projection(psi);
  const Mat gd = psi.dual_vectors().adjoint() * psi.dual_vectors();
  const Mat id = Mat::Identity(n, n);
  const Weight imu = mu.reciprocal();

  // (ii) computed first so failures in (i) still carry the profiles.
  const Mat g_mu = conjugate(g, mu);
  const Mat g_imu = conjugate(g, imu);
  const Mat p_mu = conjugate(p, mu);
  rep.decay = {{"gram", decay_constant(g, opt.s, *idx)},
               {"gram_mu", decay_constant(g_mu, opt.s, *idx)},
               {"gram_inv_mu", decay_constant(g_imu, opt.s, *idx)},
               {"dual_gram_mu", decay_constant(conjugate(gd, mu), opt.s, *idx)},
               {"cross_gram_mu", decay_constant(p_mu, opt.s, *idx)}};
  for (const auto& e : rep.decay)
    if (!std::isfinite(e.profile.constant))
      return detail::fail(rep, "decay", "decay constant of " + e.name + " is not finite");

  // (i)
  const Mat m_fwd = multiplier(mu, psi).matrix;
  const Mat m_bwd = multiplier(imu, psi).matrix;
  const Mat b = g * g_imu * g + id - p;
  rep.composition_residual = relative_residual(galerkin_matrix(m_bwd * m_fwd, psi.vectors(), psi.vectors()), g * g_imu * g);
  rep.b_sigma_ratio = sigma_ratio(conjugate(b, sq));
  rep.b_invertible = rep.b_sigma_ratio > tol.invertible;

  rep.forward_composition_invertible = numerically_invertible(m_bwd * m_fwd, tol.invertible);
  rep.backward_composition_invertible = numerically_invertible(m_fwd * m_bwd, tol.invertible);
  rep.composition_verdicts_agree = rep.forward_composition_invertible == rep.backward_composition_invertible;

  if (!(rep.composition_residual < tol.identity))
    return detail::fail(rep, "(i)", "composition identity residual " + std::to_string(rep.composition_residual));
  if (!rep.b_invertible)
    return detail::fail(rep, "(i)", "B is not invertible on l^2_sqrt(mu), sigma ratio " + std::to_string(rep.b_sigma_ratio));

  // (iii)
  rep.conjugation_residual = relative_residual(conjugate(b, mu), g_mu * g * g_mu + id - p_mu);
  if (!(rep.conjugation_residual < tol.identity))
    return detail::fail(rep, "(iii)", "conjugated identity residual " + std::to_string(rep.conjugation_residual));

  // (iv), (v)
  const std::vector<LabeledWeight> test{{opt.weight_label, m_idx}};
  rep.forward = verify_weighted_invertibility(b, sq, opt.s, *idx, test, opt.ps, rng, tol);
  if (!rep.forward.ok(tol.identity * 1e2))
    return detail::fail(rep, "(iv)", rep.forward.precondition_ok ? "two-sided inverse residual too large"
                                                                  : rep.forward.precondition_message);
  const Mat b_back = g * g_mu * g + id - p;
  rep.backward = verify_weighted_invertibility(b_back, sq.reciprocal(), opt.s, *idx, test, opt.ps, rng, tol);
  if (!rep.backward.ok(tol.identity * 1e2))
    return detail::fail(rep, "(v)", rep.backward.precondition_ok ? "two-sided inverse residual too large"
                                                                  : rep.backward.precondition_message);
  if (!rep.composition_verdicts_agree || !rep.forward_composition_invertible)
    return detail::fail(rep, "verdicts", "compositions of M_mu and M_{1/mu} are not invertible on C^d");

  // Lifting constants.
  for (const auto& p_exp : opt.ps)
    rep.per_p.push_back({p_exp, opt.weight_label, lifting_constants(psi, mu, m_idx, p_exp, rng, opt.samples, tol)});
  const LiftingPerP* headline = &rep.per_p.front();
  for (const auto& e : rep.per_p)
    if (e.p.is(2.0)) headline = &e;
  rep.lower = headline->constants.lower;
  rep.upper = headline->constants.upper;
  rep.condition = headline->constants.condition();
  for (const auto& e : rep.per_p)
    if (!e.constants.isomorphism(tol.invertible))
      return detail::fail(rep, "constants", "lower lifting constant vanishes at p = " + e.p.label());
  rep.passed = true;
  return rep;
}

inline LiftingReport lifting_theorem_pipeline(const Frame& psi, const Weight& mu, const Weight& m,
                                              const LiftingOptions& opt = {}) {
  return lifting_theorem_pipeline(psi, mu.values(), m, opt);
}

}  // namespace framelift
