#pragma once

#include "framelift/core.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace framelift {

enum class MetricKind { euclidean, torus };

/// Finite index set with coordinates in R^D (or Z_N^D) and a metric.
///
/// The torus metric takes the coordinatewise circular distance with respect
/// to `period` and then the Euclidean norm. Both metrics multiply the result
/// by `scale`, which lets lattices on Z_N be measured in natural units.
class IndexSet {
 public:
  static IndexSet euclidean(RMat points, double scale = 1.0) {
    return IndexSet(std::move(points), MetricKind::euclidean, RVec(), scale);
  }

  static IndexSet torus(RMat points, RVec period, double scale = 1.0) {
    require_dims(period.size() == points.cols(), "IndexSet::torus: period length must equal point dimension");
    for (Index i = 0; i < period.size(); ++i)
      if (!(period(i) > 0)) throw std::invalid_argument("IndexSet::torus: periods must be positive");
    return IndexSet(std::move(points), MetricKind::torus, std::move(period), scale);
  }

  /// {0, 1, ..., n-1} on the real line.
  static IndexSet line(Index n) {
    RMat pts(n, 1);
    for (Index k = 0; k < n; ++k) pts(k, 0) = static_cast<double>(k);
    return euclidean(std::move(pts));
  }

  Index size() const { return points_.rows(); }
  Index dimension() const { return points_.cols(); }
  MetricKind metric() const { return kind_; }
  const RMat& points() const { return points_; }
  const RVec& period() const { return period_; }
  double scale() const { return scale_; }

  double distance(Index k, Index l) const { return distance_between(points_.row(k), points_.row(l)); }

  /// Distance from point k to an arbitrary location (e.g. the origin).
  double distance_to(Index k, const RVec& where) const {
    require_dims(where.size() == dimension(), "IndexSet::distance_to: dimension mismatch");
    return distance_between(points_.row(k), where.transpose());
  }

  double distance_to_origin(Index k) const { return distance_to(k, RVec::Zero(dimension())); }

  /// Largest pairwise distance.
  double diameter() const {
    double d = 0.0;
    for (Index k = 0; k < size(); ++k)
      for (Index l = k + 1; l < size(); ++l) d = std::max(d, distance(k, l));
    return d;
  }

 private:
  IndexSet(RMat points, MetricKind kind, RVec period, double scale)
      : points_(std::move(points)), kind_(kind), period_(std::move(period)), scale_(scale) {
    if (!(scale_ > 0)) throw std::invalid_argument("IndexSet: scale must be positive");
    if (kind_ == MetricKind::torus) {
      for (Index k = 0; k < points_.rows(); ++k)
        for (Index j = 0; j < points_.cols(); ++j) {
          double v = std::fmod(points_(k, j), period_(j));
          points_(k, j) = v < 0 ? v + period_(j) : v;
        }
    }
    for (Index k = 0; k < size(); ++k)
      for (Index l = k + 1; l < size(); ++l)
        if (distance(k, l) == 0.0) throw std::invalid_argument("IndexSet: points must be distinct");
  }

  template <typename A, typename B>
  double distance_between(const A& p, const B& q) const {
    double acc = 0.0;
    for (Index j = 0; j < dimension(); ++j) {
      double d = std::abs(p(j) - q(j));
      if (kind_ == MetricKind::torus) {
        d = std::fmod(d, period_(j));
        d = std::min(d, period_(j) - d);
      }
      acc += d * d;
    }
    return scale_ * std::sqrt(acc);
  }

  RMat points_;
  MetricKind kind_;
  RVec period_;
  double scale_;
};

/// Strictly positive sequence over an index set.
class Weight {
 public:
  explicit Weight(RVec values, std::shared_ptr<const IndexSet> index = nullptr)
      : values_(std::move(values)), index_(std::move(index)) {
    for (Index k = 0; k < values_.size(); ++k)
      if (!(values_(k) > 0) || !std::isfinite(values_(k)))
        throw PreconditionError("Weight: values must be strictly positive and finite (index " + std::to_string(k) + ")");
    if (index_ && index_->size() != values_.size()) throw DimensionError("Weight: value count differs from index set size");
  }

  static Weight constant(Index n, double c = 1.0, std::shared_ptr<const IndexSet> index = nullptr) {
    return Weight(RVec::Constant(n, c), std::move(index));
  }

  /// w_k = (1 + dist(k, origin))^t
  static Weight polynomial(std::shared_ptr<const IndexSet> index, double t) {
    RVec v(index->size());
    for (Index k = 0; k < v.size(); ++k) v(k) = std::pow(1.0 + index->distance_to_origin(k), t);
    return Weight(std::move(v), std::move(index));
  }

  /// w_k = exp(alpha * dist(k, origin)^beta)
  static Weight subexponential(std::shared_ptr<const IndexSet> index, double alpha, double beta) {
    RVec v(index->size());
    for (Index k = 0; k < v.size(); ++k) v(k) = std::exp(alpha * std::pow(index->distance_to_origin(k), beta));
    return Weight(std::move(v), std::move(index));
  }

  Index size() const { return values_.size(); }
  const RVec& values() const { return values_; }
  double operator[](Index k) const { return values_(k); }
  const std::shared_ptr<const IndexSet>& index_set() const { return index_; }

  Weight reciprocal() const { return Weight(values_.cwiseInverse(), index_); }
  Weight sqrt() const { return Weight(values_.cwiseSqrt(), index_); }
  Weight pow(double t) const { return Weight(values_.array().pow(t).matrix(), index_); }
  Weight scaled(double c) const { return Weight(c * values_, index_); }

  friend Weight operator*(const Weight& a, const Weight& b) {
    require_dims(a.size() == b.size(), "Weight product: length mismatch");
    return Weight(a.values_.cwiseProduct(b.values_), a.index_ ? a.index_ : b.index_);
  }
  friend Weight operator/(const Weight& a, const Weight& b) { return a * b.reciprocal(); }

  double min() const { return values_.minCoeff(); }
  double max() const { return values_.maxCoeff(); }

 private:
  RVec values_;
  std::shared_ptr<const IndexSet> index_;
};

struct LabeledWeight {
  std::string label;
  Weight weight;
};

/// ||c||_{l^p_m} = ||m . c||_{l^p}
inline double weighted_norm(const Vec& c, Exponent p, const Weight& m) {
  require_dims(c.size() == m.size(), "weighted_norm: sequence length differs from weight length");
  if (c.size() == 0) return 0.0;
  const RVec a = c.cwiseAbs().cwiseProduct(m.values());
  const double top = a.maxCoeff();
  if (p.is_infinite() || top == 0.0) return top;
  const double q = p.value();
  if (q == 1.0) return a.sum();
  if (q == 2.0) return a.norm();
  double acc = 0.0;
  for (Index k = 0; k < a.size(); ++k) acc += std::pow(a(k) / top, q);
  return top * std::pow(acc, 1.0 / q);
}

/// (mu_k c_k)_k. Isometric from l^p_{mu m} onto l^p_m.
inline Vec diag_lift(const Vec& c, const Weight& mu) {
  require_dims(c.size() == mu.size(), "diag_lift: sequence length differs from weight length");
  return c.cwiseProduct(mu.values().cast<cplx>());
}

/// sum_k c_k conj(d_k)
inline cplx sequence_pairing(const Vec& c, const Vec& d) {
  require_dims(c.size() == d.size(), "sequence_pairing: length mismatch");
  return d.dot(c);
}

/// Growth profile used by moderateness checks: (1+d)^t or exp(alpha d^beta).
struct GrowthProfile {
  std::function<double(double)> growth;
  std::string label;

  static GrowthProfile polynomial(double t) {
    return {[t](double d) { return std::pow(1.0 + d, t); }, "polynomial(t=" + std::to_string(t) + ")"};
  }
  static GrowthProfile subexponential(double alpha, double beta) {
    return {[alpha, beta](double d) { return std::exp(alpha * std::pow(d, beta)); },
            "subexponential(alpha=" + std::to_string(alpha) + ",beta=" + std::to_string(beta) + ")"};
  }
};

/// Smallest C with m_k <= C growth(dist(k,l)) m_l over all pairs.
inline double moderateness_constant(const Weight& m, const IndexSet& index, const GrowthProfile& profile) {
  require_dims(m.size() == index.size(), "moderateness_constant: weight length differs from index set size");
  double c = 0.0;
  for (Index k = 0; k < m.size(); ++k)
    for (Index l = 0; l < m.size(); ++l) c = std::max(c, m[k] / (profile.growth(index.distance(k, l)) * m[l]));
  return c;
}

inline double moderateness_constant(const Weight& m, const IndexSet& index, double t) {
  return moderateness_constant(m, index, GrowthProfile::polynomial(t));
}

inline double moderateness_constant(const Weight& m, double t) {
  if (!m.index_set()) throw PreconditionError("moderateness_constant: weight carries no index set");
  return moderateness_constant(m, *m.index_set(), t);
}

/// Declarative weight description, resolved against an index set.
struct WeightSpec {
  enum class Kind { constant, polynomial, subexponential, values };
  Kind kind = Kind::constant;
  double c = 1.0;      // constant
  double t = 0.0;      // polynomial exponent
  double alpha = 0.0;  // subexponential
  double beta = 1.0;
  RVec values;         // explicit

  static WeightSpec constant_of(double c) {
    WeightSpec w;
    w.c = c;
    return w;
  }
  static WeightSpec polynomial_of(double t) {
    WeightSpec w;
    w.kind = Kind::polynomial;
    w.t = t;
    return w;
  }

  std::string label() const {
    switch (kind) {
      case Kind::constant: return "constant(" + std::to_string(c) + ")";
      case Kind::polynomial: return "polynomial(t=" + std::to_string(t) + ")";
      case Kind::subexponential:
        return "subexponential(alpha=" + std::to_string(alpha) + ",beta=" + std::to_string(beta) + ")";
      case Kind::values: return "values";
    }
    return "?";
  }

  Weight resolve(const std::shared_ptr<const IndexSet>& index) const {
    switch (kind) {
      case Kind::constant: return Weight::constant(index->size(), c, index);
      case Kind::polynomial: return Weight::polynomial(index, t);
      case Kind::subexponential: return Weight::subexponential(index, alpha, beta);
      case Kind::values: return Weight(values, index);
    }
    throw std::logic_error("WeightSpec: unknown kind");
  }

  /// Raw values without the positivity check (lets pipelines report bad symbols).
  RVec resolve_values(const std::shared_ptr<const IndexSet>& index) const {
    if (kind == Kind::values) {
      require_dims(values.size() == index->size(), "WeightSpec: value count differs from index set size");
      return values;
    }
    return resolve(index).values();
  }
};

}  // namespace framelift
