#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace framelift {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kPi = 3.14159265358979323846;

// Defaults shared by every module. All of them can be overridden per call.
struct Tolerances {
  double frame = 1e-8;        // frame property: A > frame * B
  double rank = 1e-10;        // singular values <= rank * sigma_max count as zero
  double invertible = 1e-8;   // sigma_min > invertible * sigma_max
  double identity = 1e-10;    // relative residual for exact algebraic identities
};

class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

class NotAFrameError : public std::runtime_error {
 public:
  NotAFrameError(double lower, double upper)
      : std::runtime_error("not a frame: lower bound " + std::to_string(lower) +
                           " below threshold (upper bound " + std::to_string(upper) + ")"),
        lower_(lower),
        upper_(upper) {}
  double lower() const { return lower_; }
  double upper() const { return upper_; }

 private:
  double lower_;
  double upper_;
};

inline void require_dims(bool ok, const std::string& what) {
  if (!ok) throw DimensionError(what);
}

/// Exponent p of an l^p space, p in [1, inf]. Infinity is a distinct state,
/// never a large float.
class Exponent {
 public:
  explicit Exponent(double p) : p_(p), inf_(false) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("exponent p must be a finite value >= 1");
  }
  static constexpr Exponent infinity() { return Exponent(); }

  constexpr bool is_infinite() const { return inf_; }
  constexpr double value() const { return inf_ ? std::numeric_limits<double>::infinity() : p_; }
  bool is(double q) const { return !inf_ && p_ == q; }
  bool exact_norm_available() const { return inf_ || p_ == 1.0 || p_ == 2.0; }

  /// Hoelder conjugate p' with 1/p + 1/p' = 1.
  Exponent conjugate() const {
    if (inf_) return Exponent(1.0);
    if (p_ == 1.0) return infinity();
    return Exponent(p_ / (p_ - 1.0));
  }

  std::string label() const {
    if (inf_) return "inf";
    if (p_ == std::floor(p_)) return std::to_string(static_cast<long long>(p_));
    std::string s = std::to_string(p_);
    while (!s.empty() && s.back() == '0') s.pop_back();
    return s;
  }

  friend bool operator==(const Exponent& a, const Exponent& b) {
    return a.inf_ == b.inf_ && (a.inf_ || a.p_ == b.p_);
  }

 private:
  constexpr Exponent() : p_(0.0), inf_(true) {}
  double p_;
  bool inf_;
};

inline double max_abs(const Mat& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

/// max |a - b| / max(1, max |b|)
inline double relative_residual(const Mat& a, const Mat& b) {
  require_dims(a.rows() == b.rows() && a.cols() == b.cols(), "relative_residual: shape mismatch");
  return max_abs(a - b) / std::max(1.0, max_abs(b));
}

}  // namespace framelift
