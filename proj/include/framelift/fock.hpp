#pragma once

#include "framelift/coorbit.hpp"
#include "framelift/core.hpp"
#include "framelift/frames.hpp"
#include "framelift/random.hpp"
#include "framelift/series.hpp"
#include "framelift/weights.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace framelift {

/// Finite point set in C with the Euclidean metric.
struct FockLattice {
  std::vector<cplx> points;
  double delta = 0.0;  // nominal spacing, 0 for arbitrary point sets
  double radius = 0.0;
  double jitter = 0.0;
  std::uint64_t seed = 0;

  Index size() const { return static_cast<Index>(points.size()); }

  std::shared_ptr<const IndexSet> index_set() const {
    RMat pts(size(), 2);
    for (Index k = 0; k < size(); ++k) {
      pts(k, 0) = points[k].real();
      pts(k, 1) = points[k].imag();
    }
    return std::make_shared<const IndexSet>(IndexSet::euclidean(std::move(pts)));
  }

  double min_separation() const {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < points.size(); ++k)
      for (std::size_t l = k + 1; l < points.size(); ++l) d = std::min(d, std::abs(points[k] - points[l]));
    return d;
  }
};

/// delta (Z + iZ) inside the closed disk of radius R. Jitter moves each
/// coordinate by up to jitter * delta / 2.
inline FockLattice square_lattice(double delta, double radius, double jitter = 0.0, std::uint64_t seed = 1) {
  if (!(delta > 0)) throw std::invalid_argument("square_lattice: delta must be positive");
  if (!(radius >= 0)) throw std::invalid_argument("square_lattice: R must be nonnegative");
  if (!(jitter >= 0 && jitter < 1)) throw std::invalid_argument("square_lattice: jitter must lie in [0, 1)");
  FockLattice lat;
  lat.delta = delta;
  lat.radius = radius;
  lat.jitter = jitter;
  lat.seed = seed;
  Rng rng(seed);
  const int k = static_cast<int>(std::floor(radius / delta)) + 1;
  for (int i = -k; i <= k; ++i)
    for (int j = -k; j <= k; ++j) {
      const cplx z(i * delta, j * delta);
      if (std::abs(z) > radius + 1e-12) continue;
      cplx p = z;
      if (jitter > 0) p += cplx(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)) * (jitter * delta);
      lat.points.push_back(p);
    }
  return lat;
}

inline FockLattice point_set(std::vector<cplx> points) {
  FockLattice lat;
  lat.points = std::move(points);
  for (const auto& p : lat.points) lat.radius = std::max(lat.radius, std::abs(p));
  return lat;
}

/// <psi_l, psi_k> = exp(pi lambda_k conj(lambda_l) - pi (|lambda_k|^2 + |lambda_l|^2) / 2)
inline Mat fock_gram_exact(const FockLattice& lat) {
  const Index n = lat.size();
  Mat g(n, n);
  for (Index l = 0; l < n; ++l)
    for (Index k = 0; k < n; ++k) {
      const cplx a = lat.points[k];
      const cplx b = lat.points[l];
      g(k, l) = std::exp(kPi * a * std::conj(b) - 0.5 * kPi * (std::norm(a) + std::norm(b)));
    }
  return g;
}

/// <psi_lambda, e_n> = e^{-pi |lambda|^2 / 2} (sqrt(pi) conj(lambda))^n / sqrt(n!), n = 0..degree.
inline Vec kernel_coefficients(cplx lambda, Index degree) {
  Vec c = Vec::Zero(degree + 1);
  const double r = std::abs(lambda);
  if (r == 0.0) {
    c(0) = 1.0;
    return c;
  }
  const double theta = -std::arg(lambda);
  const double log_base = std::log(std::sqrt(kPi) * r);
  for (Index n = 0; n <= degree; ++n) {
    const double lg = -0.5 * kPi * r * r + n * log_base - 0.5 * std::lgamma(static_cast<double>(n) + 1.0);
    c(n) = std::polar(std::exp(lg), n * theta);
  }
  return c;
}

/// Kernels expanded in the first degree + 1 normalized monomials.
struct TruncatedFock {
  Index degree = 0;
  Mat coefficients;  // (degree + 1) x n
  RVec residuals;    // 1 - sum_n |coef|^2 per kernel
  std::shared_ptr<const IndexSet> index;

  double epsilon() const { return residuals.size() ? residuals.maxCoeff() : 0.0; }
  Mat gram() const { return coefficients.adjoint() * coefficients; }
  /// Throws NotAFrameError when the projected kernels do not span C^{degree+1}.
  Frame frame(double tol = Tolerances{}.frame) const { return Frame(coefficients, index, tol); }
};

/// Gram-accuracy default: ceil(4 pi R^2).
inline Index default_truncation(double radius) { return static_cast<Index>(std::ceil(4.0 * kPi * radius * radius)); }

/// Dimension of the polynomial frame space: ceil(factor * pi R^2), at least 1.
inline Index frame_space_dimension(double radius, double factor = 0.75) {
  return std::max<Index>(1, static_cast<Index>(std::ceil(factor * kPi * radius * radius)));
}

inline TruncatedFock embed_truncated(const FockLattice& lat, Index degree) {
  if (degree < 0) throw std::invalid_argument("embed_truncated: degree must be nonnegative");
  TruncatedFock t;
  t.degree = degree;
  t.index = lat.index_set();
  t.coefficients.resize(degree + 1, lat.size());
  t.residuals.resize(lat.size());
  for (Index k = 0; k < lat.size(); ++k) {
    t.coefficients.col(k) = kernel_coefficients(lat.points[k], degree);
    t.residuals(k) = std::max(0.0, 1.0 - t.coefficients.col(k).squaredNorm());
  }
  return t;
}

// ---------------------------------------------------------------------------
// Density
// ---------------------------------------------------------------------------

class UndefinedDensityError : public std::invalid_argument {
 public:
  explicit UndefinedDensityError(const std::string& what) : std::invalid_argument(what) {}
};

struct DensityProxy {
  std::vector<double> radii;
  std::vector<double> values;  // min over centers of count / (pi r^2), per radius
  std::vector<Index> centers;  // number of admissible centers per radius
  double proxy = 0.0;          // value at the largest radius
};

/// Lower-density proxy on a disk of radius `sample_radius` around 0: centers on
/// a delta/4 grid with |z| + r <= sample_radius, radii given by the grid.
inline DensityProxy beurling_density_lower(const FockLattice& lat, const std::vector<double>& radii,
                                           double sample_radius, double spacing) {
  if (lat.points.empty()) throw UndefinedDensityError("beurling_density_lower: empty point set");
  if (!(spacing > 0)) throw std::invalid_argument("beurling_density_lower: grid spacing must be positive");
  DensityProxy out;
  const double h = spacing / 4.0;
  for (double r : radii) {
    if (!(r > 0) || r > sample_radius + 1e-12) continue;
    const int k = static_cast<int>(std::floor((sample_radius - r) / h + 1e-9));
    double best = std::numeric_limits<double>::infinity();
    Index n_centers = 0;
    for (int i = -k; i <= k; ++i)
      for (int j = -k; j <= k; ++j) {
        const cplx z(i * h, j * h);
        if (std::abs(z) + r > sample_radius + 1e-12) continue;
        ++n_centers;
        Index count = 0;
        for (const auto& p : lat.points)
          if (std::abs(p - z) <= r + 1e-12) ++count;
        best = std::min(best, static_cast<double>(count) / (kPi * r * r));
      }
    if (n_centers == 0) continue;
    out.radii.push_back(r);
    out.values.push_back(best);
    out.centers.push_back(n_centers);
  }
  if (out.radii.empty()) throw UndefinedDensityError("beurling_density_lower: no admissible (center, radius) pair");
  out.proxy = out.values.back();
  return out;
}

/// Default grid: 5 geometric radii from max(delta, R/8) to R.
inline DensityProxy beurling_density_lower(const FockLattice& lat) {
  const double spacing = lat.delta > 0 ? lat.delta : std::max(lat.min_separation(), 1e-3);
  const double r_max = lat.radius;
  if (!(r_max > 0)) throw UndefinedDensityError("beurling_density_lower: sampled disk has zero radius");
  const double r_min = std::min(r_max, std::max(spacing, r_max / 8.0));
  std::vector<double> radii;
  for (int i = 0; i < 5; ++i) radii.push_back(r_min * std::pow(r_max / r_min, i / 4.0));
  return beurling_density_lower(lat, radii, r_max, spacing);
}

// ---------------------------------------------------------------------------
// Toeplitz-type multiplier
// ---------------------------------------------------------------------------

/// normalized: e^{-pi |lambda|^2} (equals the frame multiplier of the normalized kernels);
/// half: e^{-pi |lambda|^2 / 2}.
enum class FockNormalization { normalized, half };

/// M F(z) = sum mu_lambda F(lambda) e^{pi conj(lambda) z} e^{-kappa pi |lambda|^2}
/// on polynomials of degree <= D, built from monomial evaluations.
inline Mat fock_multiplier(const FockLattice& lat, const RVec& mu, Index degree,
                           FockNormalization norm = FockNormalization::normalized) {
  require_dims(mu.size() == lat.size(), "fock_multiplier: symbol length differs from point count");
  for (Index k = 0; k < mu.size(); ++k)
    if (!(mu(k) > 0)) throw PreconditionError("fock_multiplier: mu must be strictly positive");
  const double kappa = norm == FockNormalization::normalized ? 1.0 : 0.5;
  Mat out = Mat::Zero(degree + 1, degree + 1);
  Vec e(degree + 1);
  for (Index k = 0; k < lat.size(); ++k) {
    const cplx lam = lat.points[k];
    // e_n(lambda) = (sqrt(pi) lambda)^n / sqrt(n!)
    e(0) = 1.0;
    for (Index n = 1; n <= degree; ++n) e(n) = e(n - 1) * std::sqrt(kPi / static_cast<double>(n)) * lam;
    const double w = mu(k) * std::exp(-kappa * kPi * std::norm(lam));
    out.noalias() += w * e.conjugate() * e.transpose();
  }
  return out;
}

inline Mat fock_multiplier(const FockLattice& lat, const Weight& mu, Index degree,
                           FockNormalization norm = FockNormalization::normalized) {
  return fock_multiplier(lat, mu.values(), degree, norm);
}

// ---------------------------------------------------------------------------
// Scaling experiment
// ---------------------------------------------------------------------------

struct FockExperiment {
  double delta = 0.8;
  std::vector<double> radii{1.5, 2.0, 2.5};
  double jitter = 0.0;
  std::uint64_t lattice_seed = 1;
  double frame_space_factor = 0.75;
  WeightSpec mu = WeightSpec::polynomial_of(2.0);
  WeightSpec m = WeightSpec::constant_of(1.0);
  LiftingOptions options;  // options.moderateness defaults to subexponential(1, 1)
  double max_growth = 1.5;
  int threads = 1;
};

inline SeriesEntry fock_entry(double radius, const FockExperiment& cfg) {
  SeriesEntry e;
  e.size = radius;
  e.size_label = "R=" + std::to_string(radius);
  try {
    const FockLattice lat = square_lattice(cfg.delta, radius, cfg.jitter, cfg.lattice_seed);
    const Index dim = frame_space_dimension(radius, cfg.frame_space_factor);
    e.metadata = {{"R", radius}, {"delta", cfg.delta}, {"points", double(lat.size())}, {"dim", double(dim)}};
    const TruncatedFock accurate = embed_truncated(lat, default_truncation(radius));
    e.metadata.push_back({"gram_error", max_abs(accurate.gram() - fock_gram_exact(lat))});
    e.metadata.push_back({"truncation_epsilon", accurate.epsilon()});
    try {
      e.metadata.push_back({"density_proxy", beurling_density_lower(lat).proxy});
    } catch (const UndefinedDensityError&) {
    }
    const TruncatedFock t = embed_truncated(lat, dim - 1);
    const FrameBounds fb = frame_bounds(t.coefficients);
    e.metadata.push_back({"frame_lower", fb.lower});
    e.metadata.push_back({"frame_upper", fb.upper});
    if (!fb.is_frame(cfg.options.tol.frame)) {
      e.failure = "not a frame: lower frame bound " + std::to_string(fb.lower) +
                  " (sampling needs lower density above 1)";
      return e;
    }
    const Frame psi = t.frame(cfg.options.tol.frame);
    LiftingOptions opt = cfg.options;
    if (!opt.moderateness) opt.moderateness = GrowthProfile::subexponential(1.0, 1.0);
    e.report = lifting_theorem_pipeline(psi, cfg.mu.resolve_values(t.index), cfg.m.resolve(t.index), opt);
    e.ok = e.report->passed;
    if (!e.ok) e.failure = "step " + e.report->failed_step + ": " + e.report->failure_message;
  } catch (const std::exception& ex) {
    e.ok = false;
    e.failure = ex.what();
  }
  return e;
}

inline ExperimentSeries fock_lifting_experiment(const FockExperiment& cfg) {
  ExperimentSeries s;
  s.kind = "fock";
  s.mu_label = cfg.mu.label();
  s.m_label = cfg.m.label();
  s.max_growth = cfg.max_growth;
  s.entries = parallel_map<SeriesEntry>(cfg.radii.size(), cfg.threads,
                                        [&](std::size_t i) { return fock_entry(cfg.radii[i], cfg); });
  s.compute_growth();
  return s;
}

}  // namespace framelift
