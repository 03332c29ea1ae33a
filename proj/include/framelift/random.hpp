#pragma once

#include "framelift/core.hpp"

#include <cstdint>
#include <random>

namespace framelift {

/// Seeded source for every randomized estimate in the library. Same seed,
/// same platform: same draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  double normal() { return normal_(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

  /// Standard complex Gaussian: real and imaginary parts N(0, 1/2).
  cplx complex_normal() {
    const double s = std::sqrt(0.5);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
  }

  Vec complex_vector(Index n) {
    Vec v(n);
    for (Index i = 0; i < n; ++i) v(i) = complex_normal();
    return v;
  }

  Mat complex_matrix(Index rows, Index cols) {
    Mat m(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) m(i, j) = complex_normal();
    return m;
  }

  RVec uniform_vector(Index n, double lo, double hi) {
    RVec v(n);
    for (Index i = 0; i < n; ++i) v(i) = uniform(lo, hi);
    return v;
  }

  /// Haar-ish unitary via QR of a complex Gaussian matrix.
  Mat unitary(Index n) {
    Eigen::HouseholderQR<Mat> qr(complex_matrix(n, n));
    Mat q = qr.householderQ();
    const Mat r = qr.matrixQR();
    for (Index j = 0; j < n; ++j) {
      const cplx d = r(j, j);
      if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
    }
    return q;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace framelift
