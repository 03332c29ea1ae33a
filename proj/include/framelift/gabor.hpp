#pragma once

#include "framelift/coorbit.hpp"
#include "framelift/core.hpp"
#include "framelift/frames.hpp"
#include "framelift/series.hpp"
#include "framelift/weights.hpp"

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace framelift {

namespace detail {
inline Index mod(Index a, Index n) {
  const Index r = a % n;
  return r < 0 ? r + n : r;
}
}  // namespace detail

/// pi(x, w) f (t) = e^{2 pi i w t / N} f(t - x) on Z_N.
inline Vec tf_shift(const Vec& f, Index x, Index omega) {
  const Index n = f.size();
  Vec out(n);
  for (Index t = 0; t < n; ++t) {
    const double ph = 2.0 * kPi * static_cast<double>(detail::mod(omega * t, n)) / static_cast<double>(n);
    out(t) = std::polar(1.0, ph) * f(detail::mod(t - x, n));
  }
  return out;
}

/// Periodized Gaussian sum_{|j| <= 3} exp(-pi (t + jN)^2 / N), unit l^2 norm.
inline Vec gaussian_window(Index n) {
  if (n < 4) throw std::invalid_argument("gaussian_window: N must be at least 4");
  Vec g(n);
  const double nn = static_cast<double>(n);
  for (Index t = 0; t < n; ++t) {
    double acc = 0.0;
    for (int j = -3; j <= 3; ++j) {
      const double u = static_cast<double>(t) + j * nn;
      acc += std::exp(-kPi * u * u / nn);
    }
    g(t) = acc;
  }
  return g / g.norm();
}

/// V_g f (x, w) = sum_t f(t) conj(g(t - x)) e^{-2 pi i w t / N}; rows x, columns w.
inline Mat stft(const Vec& f, const Vec& g) {
  require_dims(f.size() == g.size(), "stft: signal and window lengths differ");
  const Index n = f.size();
  Mat v(n, n);
  Vec twiddle(n);
  for (Index k = 0; k < n; ++k) twiddle(k) = std::polar(1.0, -2.0 * kPi * static_cast<double>(k) / static_cast<double>(n));
  for (Index x = 0; x < n; ++x) {
    Vec prod(n);
    for (Index t = 0; t < n; ++t) prod(t) = f(t) * std::conj(g(detail::mod(t - x, n)));
    for (Index w = 0; w < n; ++w) {
      cplx acc = 0.0;
      for (Index t = 0; t < n; ++t) acc += prod(t) * twiddle(detail::mod(w * t, n));
      v(x, w) = acc;
    }
  }
  return v;
}

inline Mat stft(const Vec& f, const Vec& g, Index n) {
  require_dims(f.size() == n && g.size() == n, "stft: length differs from N");
  return stft(f, g);
}

// ---------------------------------------------------------------------------
// Lattices in Z_N x Z_N
// ---------------------------------------------------------------------------

/// natural: coordinates measured in units of sqrt(N) (the window's TF scale);
/// raw: integer coordinates.
enum class TFScale { natural, raw };

class TFLattice {
 public:
  TFLattice(Index n, Index a, Index b, TFScale scale = TFScale::natural) : n_(n), a_(a), b_(b), scale_(scale) {
    if (n < 1) throw std::invalid_argument("TFLattice: N must be positive");
    if (a < 1 || b < 1) throw std::invalid_argument("TFLattice: steps must be positive");
    if (n % a != 0 || n % b != 0) throw std::invalid_argument("TFLattice: steps must divide N");
    RMat pts((n / a) * (n / b), 2);
    Index k = 0;
    for (Index x = 0; x < n; x += a)
      for (Index w = 0; w < n; w += b) {
        pts(k, 0) = static_cast<double>(x);
        pts(k, 1) = static_cast<double>(w);
        ++k;
      }
    const double sc = scale == TFScale::natural ? 1.0 / std::sqrt(static_cast<double>(n)) : 1.0;
    index_ = std::make_shared<const IndexSet>(IndexSet::torus(pts, RVec::Constant(2, static_cast<double>(n)), sc));
  }

  Index n() const { return n_; }
  Index a() const { return a_; }
  Index b() const { return b_; }
  TFScale scale() const { return scale_; }
  Index size() const { return index_->size(); }
  double redundancy() const { return static_cast<double>(size()) / static_cast<double>(n_); }
  Index x(Index k) const { return static_cast<Index>(index_->points()(k, 0)); }
  Index omega(Index k) const { return static_cast<Index>(index_->points()(k, 1)); }
  const std::shared_ptr<const IndexSet>& index_set() const { return index_; }

 private:
  Index n_, a_, b_;
  TFScale scale_;
  std::shared_ptr<const IndexSet> index_;
};

/// Divisors a <= b of N with a b = N / redundancy, as close to square as possible.
inline std::pair<Index, Index> choose_steps(Index n, Index redundancy) {
  if (redundancy < 1 || n % redundancy != 0) throw std::invalid_argument("choose_steps: redundancy must divide N");
  const Index prod = n / redundancy;
  std::optional<std::pair<Index, Index>> best;
  for (Index a = 1; a * a <= prod; ++a) {
    if (prod % a != 0) continue;
    const Index b = prod / a;
    if (n % a != 0 || n % b != 0) continue;
    if (!best || (b - a) < (best->second - best->first)) best = std::make_pair(a, b);
  }
  if (!best) throw std::invalid_argument("choose_steps: no admissible step pair");
  return *best;
}

/// Columns pi(lambda) g for lambda in the lattice.
inline Mat gabor_vectors(const Vec& g, const TFLattice& lattice) {
  require_dims(g.size() == lattice.n(), "gabor_vectors: window length differs from N");
  Mat v(lattice.n(), lattice.size());
  for (Index k = 0; k < lattice.size(); ++k) v.col(k) = tf_shift(g, lattice.x(k), lattice.omega(k));
  return v;
}

struct GaborSystem {
  Vec window;
  TFLattice lattice;
  Frame frame;
};

/// Throws NotAFrameError when the system has no lower frame bound.
inline GaborSystem gabor_system(const Vec& g, const TFLattice& lattice, double frame_tol = Tolerances{}.frame) {
  return {g, lattice, Frame(gabor_vectors(g, lattice), lattice.index_set(), frame_tol)};
}

// ---------------------------------------------------------------------------
// Scaling experiment
// ---------------------------------------------------------------------------

struct GaborLatticeRule {
  enum class Mode { redundancy, steps, ratios };
  Mode mode = Mode::redundancy;
  Index redundancy = 4;
  Index a = 0, b = 0;              // steps
  Index a_ratio = 0, b_ratio = 0;  // a = N / a_ratio

  std::pair<Index, Index> steps_for(Index n) const {
    switch (mode) {
      case Mode::redundancy: return choose_steps(n, redundancy);
      case Mode::steps: return {a, b};
      case Mode::ratios:
        if (a_ratio < 1 || b_ratio < 1 || n % a_ratio != 0 || n % b_ratio != 0)
          throw std::invalid_argument("lattice ratios must divide N");
        return {n / a_ratio, n / b_ratio};
    }
    throw std::logic_error("GaborLatticeRule: unknown mode");
  }
};

struct GaborExperiment {
  std::vector<Index> ns{16, 32, 64};
  GaborLatticeRule lattice;
  TFScale scale = TFScale::natural;
  WeightSpec mu = WeightSpec::polynomial_of(2.0);
  WeightSpec m = WeightSpec::constant_of(1.0);
  LiftingOptions options;
  double max_growth = 1.5;
  int threads = 1;
};

inline SeriesEntry gabor_entry(Index n, const GaborExperiment& cfg) {
  SeriesEntry e;
  e.size = static_cast<double>(n);
  e.size_label = "N=" + std::to_string(n);
  try {
    const auto [a, b] = cfg.lattice.steps_for(n);
    const TFLattice lat(n, a, b, cfg.scale);
    e.metadata = {{"N", double(n)}, {"a", double(a)}, {"b", double(b)}, {"redundancy", lat.redundancy()}};
    const Mat v = gabor_vectors(gaussian_window(n), lat);
    const FrameBounds fb = frame_bounds(v);
    e.metadata.push_back({"frame_lower", fb.lower});
    e.metadata.push_back({"frame_upper", fb.upper});
    if (lat.redundancy() <= 1.0 || !fb.is_frame(cfg.options.tol.frame)) {
      e.failure = "not a frame: redundancy " + std::to_string(lat.redundancy()) + ", lower frame bound " +
                  std::to_string(fb.lower);
      return e;
    }
    const Frame psi(v, lat.index_set(), cfg.options.tol.frame);
    const RVec mu = cfg.mu.resolve_values(lat.index_set());
    const Weight m = cfg.m.resolve(lat.index_set());
    e.report = lifting_theorem_pipeline(psi, mu, m, cfg.options);
    e.ok = e.report->passed;
    if (!e.ok) e.failure = "step " + e.report->failed_step + ": " + e.report->failure_message;
  } catch (const std::exception& ex) {
    e.ok = false;
    e.failure = ex.what();
  }
  return e;
}

inline ExperimentSeries gabor_lifting_experiment(const GaborExperiment& cfg) {
  ExperimentSeries s;
  s.kind = "gabor";
  s.mu_label = cfg.mu.label();
  s.m_label = cfg.m.label();
  s.max_growth = cfg.max_growth;
  s.entries = parallel_map<SeriesEntry>(cfg.ns.size(), cfg.threads,
                                        [&](std::size_t i) { return gabor_entry(cfg.ns[i], cfg); });
  s.compute_growth();
  return s;
}

}  // namespace framelift
