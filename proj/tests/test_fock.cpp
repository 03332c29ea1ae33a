#include "framelift/fock.hpp"
#include "framelift/multipliers.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace framelift;

TEST(Lattice, SquarePointsInDisk) {
  EXPECT_EQ(square_lattice(1.0, 1.0).size(), 5);
  EXPECT_EQ(square_lattice(1.0, 0.5).size(), 1);
  EXPECT_EQ(square_lattice(0.5, 1.0).size(), 13);
  const FockLattice lat = square_lattice(0.8, 3.0);
  for (const auto& p : lat.points) EXPECT_LE(std::abs(p), 3.0 + 1e-12);
  EXPECT_NEAR(lat.min_separation(), 0.8, 1e-12);
  EXPECT_THROW(square_lattice(0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(square_lattice(1.0, 1.0, 1.0), std::invalid_argument);
}

TEST(Lattice, JitterIsSeededAndBounded) {
  const FockLattice a = square_lattice(1.0, 3.0, 0.2, 7);
  const FockLattice b = square_lattice(1.0, 3.0, 0.2, 7);
  const FockLattice c = square_lattice(1.0, 3.0, 0.2, 8);
  const FockLattice base = square_lattice(1.0, 3.0);
  ASSERT_EQ(a.size(), base.size());
  bool differs = false;
  for (Index k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a.points[k], b.points[k]);
    differs |= a.points[k] != c.points[k];
    EXPECT_LE(std::abs(a.points[k].real() - base.points[k].real()), 0.1 + 1e-12);
    EXPECT_LE(std::abs(a.points[k].imag() - base.points[k].imag()), 0.1 + 1e-12);
  }
  EXPECT_TRUE(differs);
}

TEST(Gram, ClosedFormValues) {
  const FockLattice lat = point_set({0.0, 1.0, cplx(0, 2)});
  const Mat g = fock_gram_exact(lat);
  for (Index k = 0; k < 3; ++k) EXPECT_NEAR(g(k, k).real(), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(g(0, 1)), 0.207880, 5e-7);
  EXPECT_NEAR(std::abs(g(0, 2)), 0.00186744, 5e-9);
  EXPECT_LT(relative_residual(g.adjoint(), g), 1e-15);
}

TEST(Gram, MatchesSeriesOracle) {
  Rng rng(1);
  std::vector<cplx> pts;
  for (int i = 0; i < 8; ++i) pts.emplace_back(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5));
  const Mat g = fock_gram_exact(point_set(pts));
  for (Index k = 0; k < 8; ++k)
    for (Index l = 0; l < 8; ++l) EXPECT_LT(std::abs(g(k, l) - oracle::fock_inner_series(pts[k], pts[l])), 1e-12);
}

TEST(Embedding, OriginIsFirstMonomial) {
  const Vec c = kernel_coefficients(0.0, 6);
  EXPECT_EQ(c(0), cplx(1.0));
  EXPECT_EQ(c.tail(6).norm(), 0.0);
}

TEST(Embedding, GramAccurateAtDefaultTruncation) {
  for (double r : {1.5, 2.0, 3.0}) {
    const FockLattice lat = square_lattice(0.8, r);
    const TruncatedFock t = embed_truncated(lat, default_truncation(r));
    EXPECT_LT(max_abs(t.gram() - fock_gram_exact(lat)), 1e-8) << "R=" << r;
    EXPECT_LT(t.epsilon(), 1e-8);
  }
}

TEST(Embedding, LargeArgumentStaysFinite) {
  const Vec c = kernel_coefficients(cplx(6.0, -4.0), 400);
  EXPECT_TRUE(c.allFinite());
  EXPECT_NEAR(c.squaredNorm(), 1.0, 1e-10);
}

TEST(Embedding, RotationChangesOnlyPhases) {
  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const cplx lam(rng.uniform(-2, 2), rng.uniform(-2, 2));
    const cplx rot = std::polar(1.0, rng.uniform(0, 2 * M_PI));
    const Vec a = kernel_coefficients(lam, 30);
    const Vec b = kernel_coefficients(lam * rot, 30);
    EXPECT_LT((a.cwiseAbs() - b.cwiseAbs()).norm(), 1e-13);
  }
}

TEST(Embedding, ReproducingProperty) {
  // F(lambda) e^{-pi |lambda|^2 / 2} = <F, psi_lambda> for F = sum a_n e_n.
  Rng rng(3);
  const Index deg = 12;
  const Vec a = rng.complex_vector(deg + 1);
  for (int trial = 0; trial < 10; ++trial) {
    const cplx lam(rng.uniform(-1, 1), rng.uniform(-1, 1));
    cplx f = 0.0;
    for (Index n = 0; n <= deg; ++n)
      f += a(n) * std::pow(std::sqrt(M_PI) * lam, double(n)) / std::sqrt(std::tgamma(double(n) + 1.0));
    const Vec psi = kernel_coefficients(lam, deg);
    EXPECT_LT(std::abs(psi.dot(a) - f * std::exp(-M_PI * std::norm(lam) / 2)), 1e-12);
  }
}

TEST(Density, SquareLatticeNearReciprocalArea) {
  for (double r : {2.0, 4.0, 6.0}) {
    const double d = beurling_density_lower(square_lattice(0.8, r)).proxy;
    EXPECT_NEAR(d, 1.5625, 0.15 * 1.5625) << "R=" << r;
  }
  const double unit = beurling_density_lower(square_lattice(1.0, 4.0)).proxy;
  EXPECT_NEAR(unit, 1.0, 0.15);
}

TEST(Density, ExplicitGridMatchesCountOracle) {
  const FockLattice lat = square_lattice(0.8, 3.0);
  const auto d = beurling_density_lower(lat, {1.0, 2.0}, 3.0, 0.8);
  ASSERT_EQ(d.radii.size(), 2u);
  double best = 1e300;
  for (int i = -10; i <= 10; ++i)
    for (int j = -10; j <= 10; ++j) {
      const cplx z(i * 0.2, j * 0.2);
      if (std::abs(z) + 2.0 > 3.0 + 1e-12) continue;
      best = std::min(best, oracle::count_in_disk(lat.points, z, 2.0) / (M_PI * 4.0));
    }
  EXPECT_NEAR(d.proxy, best, 1e-12);
}

TEST(Density, UndefinedCases) {
  EXPECT_THROW(beurling_density_lower(point_set({})), UndefinedDensityError);
  EXPECT_THROW(beurling_density_lower(point_set({0.0})), UndefinedDensityError);
  EXPECT_THROW(beurling_density_lower(square_lattice(1.0, 2.0), {5.0}, 2.0, 1.0), UndefinedDensityError);
}

TEST(Multiplier, MatchesGenericFrameMultiplier) {
  Rng rng(4);
  const FockLattice lat = square_lattice(0.8, 2.0);
  const Index deg = frame_space_dimension(2.0) - 1;
  const TruncatedFock t = embed_truncated(lat, deg);
  const RVec mu = rng.uniform_vector(lat.size(), 0.5, 3.0);
  const Mat generic = multiplier(Weight(mu), t.frame()).matrix;
  EXPECT_LT(relative_residual(fock_multiplier(lat, mu, deg), generic), 1e-10);
}

TEST(Multiplier, HalfNormalizationRescalesSymbol) {
  Rng rng(5);
  const FockLattice lat = square_lattice(0.8, 1.5);
  const RVec mu = rng.uniform_vector(lat.size(), 0.5, 3.0);
  RVec scaled = mu;
  for (Index k = 0; k < lat.size(); ++k) scaled(k) *= std::exp(M_PI * std::norm(lat.points[k]) / 2);
  EXPECT_LT(relative_residual(fock_multiplier(lat, mu, 5, FockNormalization::half),
                              fock_multiplier(lat, scaled, 5)),
            1e-12);
}

TEST(Multiplier, SinglePointAtOriginIsRankOne) {
  const Mat m = fock_multiplier(point_set({0.0}), RVec::Constant(1, 2.5), 4);
  EXPECT_NEAR(m(0, 0).real(), 2.5, 1e-15);
  EXPECT_NEAR(m.norm(), 2.5, 1e-15);
  const RVec sv = singular_values(m);
  EXPECT_LT(sv(1), 1e-15);
}

TEST(Multiplier, InvertibleForDenseLattice) {
  const FockLattice lat = square_lattice(0.8, 2.0);
  const Mat m = fock_multiplier(lat, RVec::Ones(lat.size()), frame_space_dimension(2.0) - 1);
  EXPECT_TRUE(numerically_invertible(m));
  EXPECT_LT(relative_residual(m.adjoint(), m), 1e-14);
}

TEST(Multiplier, RejectsNonPositiveSymbol) {
  const FockLattice lat = square_lattice(1.0, 1.0);
  RVec mu = RVec::Ones(lat.size());
  mu(0) = 0.0;
  EXPECT_THROW(fock_multiplier(lat, mu, 3), PreconditionError);
}

TEST(Decay, GramDecayStableInRadius) {
  std::vector<double> cs;
  for (double r : {2.0, 3.0, 4.0}) {
    const FockLattice lat = square_lattice(0.8, r);
    cs.push_back(decay_constant(fock_gram_exact(lat), 2.0, *lat.index_set()).constant);
  }
  for (double c : cs) EXPECT_NEAR(c, cs.front(), 1e-6 * cs.front());
}

TEST(Experiment, DenseLatticePassesSparseFails) {
  FockExperiment dense;
  dense.options.samples = 16;
  const ExperimentSeries s = fock_lifting_experiment(dense);
  ASSERT_EQ(s.entries.size(), 3u);
  EXPECT_TRUE(s.all_ok()) << s.entries[0].failure;
  for (const auto& e : s.entries) EXPECT_LT(e.meta("gram_error"), 1e-8);

  FockExperiment sparse = dense;
  sparse.delta = 1.2;
  const ExperimentSeries f = fock_lifting_experiment(sparse);
  EXPECT_FALSE(f.any_ok());
  for (const auto& e : f.entries) EXPECT_EQ(e.failure.rfind("not a frame", 0), 0u) << e.failure;
}
