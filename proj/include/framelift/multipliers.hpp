#pragma once

#include "framelift/constants.hpp"
#include "framelift/core.hpp"
#include "framelift/frames.hpp"
#include "framelift/matalg.hpp"
#include "framelift/weights.hpp"

#include <string>
#include <vector>

namespace framelift {

struct Multiplier {
  Vec symbol;
  Mat matrix;  // D_Phi diag(symbol) C_Psi
};

/// f -> sum_k symbol_k <f, psi_k> phi_k
inline Multiplier multiplier(const Vec& symbol, const Frame& psi, const Frame& phi) {
  require_dims(psi.dim() == phi.dim(), "multiplier: frames live in different ambient dimensions");
  require_dims(symbol.size() == psi.count() && symbol.size() == phi.count(), "multiplier: symbol length mismatch");
  return {symbol, phi.vectors() * symbol.asDiagonal() * psi.vectors().adjoint()};
}

inline Multiplier multiplier(const Weight& symbol, const Frame& psi, const Frame& phi) {
  return multiplier(Vec(symbol.values().cast<cplx>()), psi, phi);
}

inline Multiplier multiplier(const Weight& symbol, const Frame& psi) { return multiplier(symbol, psi, psi); }

struct GalerkinMatrix {
  Mat entries;
  std::string frames;  // e.g. "(Psi,Psi~)"
};

/// Mat^{(Phi,Psi)}(O) = C_Phi O D_Psi, entries <O psi_l, phi_k>.
inline Mat galerkin_matrix(const Mat& o, const Mat& phi_vectors, const Mat& psi_vectors) {
  require_dims(o.rows() == o.cols() && o.rows() == phi_vectors.rows() && o.rows() == psi_vectors.rows(),
               "galerkin: dimension mismatch");
  return phi_vectors.adjoint() * o * psi_vectors;
}

inline GalerkinMatrix galerkin(const Mat& o, const Frame& phi, const Frame& psi, std::string label = "(Phi,Psi)") {
  return {galerkin_matrix(o, phi.vectors(), psi.vectors()), std::move(label)};
}

/// Op^{(Phi,Psi)}(M) = D_Phi M C_Psi
inline Mat op_from_matrix(const Mat& m, const Frame& phi, const Frame& psi) {
  require_dims(phi.dim() == psi.dim(), "op_from_matrix: frames live in different ambient dimensions");
  require_dims(m.rows() == phi.count() && m.cols() == psi.count(), "op_from_matrix: matrix shape mismatch");
  return phi.vectors() * m * psi.vectors().adjoint();
}

// ---------------------------------------------------------------------------
// Invertibility through the augmented Galerkin matrix
// ---------------------------------------------------------------------------

/// Which of frame / dual occupies the row and column slots of Mat(O).
enum class SlotConvention { FrameFrame, FrameDual, DualFrame, DualDual };

inline const char* to_string(SlotConvention s) {
  switch (s) {
    case SlotConvention::FrameFrame: return "frame-frame";
    case SlotConvention::FrameDual: return "frame-dual";
    case SlotConvention::DualFrame: return "dual-frame";
    case SlotConvention::DualDual: return "dual-dual";
  }
  return "?";
}

inline constexpr SlotConvention kAllSlotConventions[] = {SlotConvention::FrameFrame, SlotConvention::FrameDual,
                                                          SlotConvention::DualFrame, SlotConvention::DualDual};

/// B_O = Mat(O) + I - G_{Psi,Psi~}. Block diagonal on ran C_Psi + ker D_Psi,
/// so O is invertible on C^d iff B_O is invertible on C^n, for every slot choice.
/// Phi must span the same coefficient range as Psi (Phi = Psi in practice).
inline Mat invertibility_matrix(const Mat& o, const Frame& psi, const Frame& phi,
                                SlotConvention slots = SlotConvention::FrameFrame) {
  require_dims(psi.dim() == phi.dim() && psi.count() == phi.count(), "invertibility_matrix: frame shape mismatch");
  const bool row_dual = slots == SlotConvention::DualFrame || slots == SlotConvention::DualDual;
  const bool col_dual = slots == SlotConvention::FrameDual || slots == SlotConvention::DualDual;
  const Mat& rows = row_dual ? phi.dual_vectors() : phi.vectors();
  const Mat& cols = col_dual ? psi.dual_vectors() : psi.vectors();
  const Index n = psi.count();
  return galerkin_matrix(o, rows, cols) + Mat::Identity(n, n) - coefficient_projection(psi);
}

inline Mat invertibility_matrix(const Mat& o, const Frame& psi, SlotConvention slots = SlotConvention::FrameFrame) {
  return invertibility_matrix(o, psi, psi, slots);
}

struct InvertibilityVerdict {
  double operator_sigma_ratio = 0.0;
  double matrix_sigma_ratio = 0.0;
  bool operator_invertible = false;
  bool matrix_invertible = false;
  bool agree() const { return operator_invertible == matrix_invertible; }
};

inline InvertibilityVerdict compare_invertibility(const Mat& o, const Frame& psi,
                                                  SlotConvention slots = SlotConvention::FrameFrame,
                                                  const Tolerances& tol = {}) {
  InvertibilityVerdict v;
  v.operator_sigma_ratio = sigma_ratio(o);
  v.matrix_sigma_ratio = sigma_ratio(invertibility_matrix(o, psi, slots));
  v.operator_invertible = v.operator_sigma_ratio > tol.invertible;
  v.matrix_invertible = v.matrix_sigma_ratio > tol.invertible;
  return v;
}

/// Mat^{(Phi,Psi)}(O^{-1}) against the pseudo-inverse of Mat(O) in two dual
/// slot orders: (Psi~, Phi~) and (Phi~, Psi~).
struct InverseGalerkinCheck {
  double residual_swapped = 0.0;   // vs Mat^{(Psi~,Phi~)}(O)^dagger
  double residual_straight = 0.0;  // vs Mat^{(Phi~,Psi~)}(O)^dagger
  std::string passing;             // "swapped", "straight", "both" or "none"
};

inline InverseGalerkinCheck mat_inverse_cross_check(const Mat& o, const Frame& psi, const Frame& phi,
                                                    const Tolerances& tol = {}) {
  require_dims(psi.dim() == phi.dim(), "mat_inverse_cross_check: frames live in different ambient dimensions");
  if (!numerically_invertible(o, tol.invertible)) throw PreconditionError("mat_inverse_cross_check: O is not invertible");
  const Mat lhs = galerkin_matrix(o.partialPivLu().inverse(), phi.vectors(), psi.vectors());
  InverseGalerkinCheck out;
  out.residual_swapped =
      relative_residual(pseudo_inverse(galerkin_matrix(o, psi.dual_vectors(), phi.dual_vectors()), tol.rank), lhs);
  out.residual_straight =
      relative_residual(pseudo_inverse(galerkin_matrix(o, phi.dual_vectors(), psi.dual_vectors()), tol.rank), lhs);
  const double t = 1e3 * tol.identity;
  const bool a = out.residual_swapped < t;
  const bool b = out.residual_straight < t;
  out.passing = a && b ? "both" : a ? "swapped" : b ? "straight" : "none";
  return out;
}

// ---------------------------------------------------------------------------
// Spectral invariance over coorbit spaces
// ---------------------------------------------------------------------------

struct SpectralInvarianceEntry {
  Exponent p;
  std::string weight_label;
  TwoSidedConstants constants;
  bool invertible = false;
};

struct SpectralInvarianceReport {
  double operator_sigma_ratio = 0.0;
  DecayProfile galerkin_decay;
  std::vector<SpectralInvarianceEntry> entries;
  bool verdicts_agree = true;
  bool invertible_everywhere() const {
    for (const auto& e : entries)
      if (!e.invertible) return false;
    return !entries.empty();
  }
};

/// Constants of O as a map H^p_m -> H^p_m (norms of dual-frame coefficients)
/// for every requested (p, m), with the invertibility verdict of each.
inline SpectralInvarianceReport spectral_invariance_suite(const Mat& o, const Frame& psi,
                                                          const std::vector<LabeledWeight>& weights,
                                                          const std::vector<Exponent>& ps, double s, Rng& rng,
                                                          int samples = 256, const Tolerances& tol = {}) {
  require_dims(o.rows() == psi.dim() && o.cols() == psi.dim(), "spectral_invariance_suite: operator size mismatch");
  SpectralInvarianceReport rep;
  rep.operator_sigma_ratio = sigma_ratio(o);
  rep.galerkin_decay = decay_constant(galerkin_matrix(o, psi.vectors(), psi.dual_vectors()), s, psi.index_set());
  const bool invertible = rep.operator_sigma_ratio > tol.invertible;
  std::optional<Mat> inv;
  if (invertible) inv = o.partialPivLu().inverse();
  const Mat a = psi.dual_vectors().adjoint();
  for (const auto& w : weights) {
    const CoefficientNorm norm{a, psi.vectors(), w.weight};
    for (const auto& p : ps) {
      SpectralInvarianceEntry e{p, w.label, map_constants(o, inv, norm, norm, p, rng, samples), false};
      e.invertible = invertible && e.constants.isomorphism(tol.invertible);
      rep.entries.push_back(e);
    }
  }
  for (const auto& e : rep.entries)
    if (e.invertible != rep.entries.front().invertible) rep.verdicts_agree = false;
  return rep;
}

}  // namespace framelift
