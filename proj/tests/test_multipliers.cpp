#include "framelift/gabor.hpp"
#include "framelift/multipliers.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace framelift;

namespace {

/// Random d x d operator with the given singular values.
Mat with_singular_values(const RVec& s, Rng& rng) {
  const Index d = s.size();
  return rng.unitary(d) * s.cast<cplx>().asDiagonal() * rng.unitary(d);
}

}  // namespace

TEST(Multiplier, ConstantSymbolGivesFrameOperator) {
  Rng rng(1);
  const Frame fr = random_frame(4, 9, rng);
  const Multiplier m = multiplier(Weight::constant(9), fr);
  EXPECT_LT(relative_residual(m.matrix, fr.frame_operator()), 1e-14);
}

TEST(Multiplier, DualSynthesisGivesIdentity) {
  Rng rng(2);
  const Frame fr = random_frame(3, 7, rng);
  const Multiplier m = multiplier(Vec::Ones(7), fr, fr.dual());
  EXPECT_LT(max_abs(m.matrix - Mat::Identity(3, 3)), 1e-12);
}

TEST(Multiplier, OrthonormalBasisGivesDiagonal) {
  Vec sym(4);
  sym << 1, cplx(0, 2), -3, 0.5;
  const Frame onb = Frame::orthonormal_basis(4);
  EXPECT_LT(max_abs(multiplier(sym, onb, onb).matrix - Mat(sym.asDiagonal())), 1e-15);
}

TEST(Multiplier, SymbolLengthMismatchThrows) {
  const Frame onb = Frame::orthonormal_basis(3);
  EXPECT_THROW(multiplier(Vec::Ones(4), onb, onb), DimensionError);
}

TEST(Multiplier, NormBoundedBySymbolAndFrameBounds) {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = 2 + trial % 5;
    const Index n = d + 1 + trial % 6;
    const Frame psi = random_frame(d, n, rng);
    const Frame phi = random_frame(d, n, rng);
    const Vec sym = rng.complex_vector(n);
    const double op = singular_values(multiplier(sym, psi, phi).matrix)(0);
    const double bound = std::sqrt(psi.bounds().upper * phi.bounds().upper) * sym.cwiseAbs().maxCoeff();
    EXPECT_LE(op, bound * (1 + 1e-12));
  }
}

TEST(Galerkin, IdentityGivesGram) {
  Rng rng(4);
  const Frame fr = random_frame(4, 8, rng);
  EXPECT_LT(relative_residual(galerkin(Mat::Identity(4, 4), fr, fr).entries, fr.gram()), 1e-14);
}

TEST(Galerkin, RoundTripOfReciprocalMultiplier) {
  Rng rng(5);
  const Frame fr = random_frame(3, 6, rng);
  const RVec mu = rng.uniform_vector(6, 0.5, 3.0);
  const Mat o = multiplier(Weight(mu.cwiseInverse()), fr).matrix;
  const Mat expect = fr.gram() * mu.cwiseInverse().cast<cplx>().asDiagonal() * fr.gram();
  EXPECT_LT(relative_residual(galerkin_matrix(o, fr.vectors(), fr.vectors()), expect), 1e-12);
}

TEST(Galerkin, OpIsLeftInverseWithDualFrames) {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const Frame psi = random_frame(4, 7 + trial % 4, rng);
    const Frame phi = random_frame(4, 6 + trial % 3, rng);
    const Mat o = rng.complex_matrix(4, 4);
    const Mat back = op_from_matrix(galerkin(o, phi, psi).entries, phi.dual(), psi.dual());
    EXPECT_LT(relative_residual(back, o), 1e-10);
  }
}

TEST(Galerkin, ShapeMismatchThrows) {
  const Frame a = Frame::orthonormal_basis(3);
  EXPECT_THROW(galerkin_matrix(Mat::Identity(4, 4), a.vectors(), a.vectors()), DimensionError);
  EXPECT_THROW(op_from_matrix(Mat::Identity(2, 2), a, a), DimensionError);
}

TEST(InvertibilityMatrix, IdentityOperatorWithDualColumns) {
  Rng rng(7);
  const Frame fr = random_frame(3, 8, rng);
  const Mat b = invertibility_matrix(Mat::Identity(3, 3), fr, SlotConvention::FrameDual);
  EXPECT_LT(max_abs(b - Mat::Identity(8, 8)), 1e-12);
}

TEST(InvertibilityMatrix, SingularAndScaledOperators) {
  Rng rng(8);
  const Frame fr = random_frame(3, 6, rng);
  for (SlotConvention slots : kAllSlotConventions) {
    EXPECT_FALSE(compare_invertibility(Mat::Zero(3, 3), fr, slots).matrix_invertible) << to_string(slots);
    RVec s(3);
    s << 1, 1, 0;
    const auto v = compare_invertibility(with_singular_values(s, rng), fr, slots);
    EXPECT_FALSE(v.operator_invertible);
    EXPECT_FALSE(v.matrix_invertible) << to_string(slots);
    EXPECT_TRUE(compare_invertibility(2.0 * Mat::Identity(3, 3), fr, slots).matrix_invertible) << to_string(slots);
  }
}

TEST(InvertibilityMatrix, VerdictsAgreeOnRandomOperators) {
  Rng rng(9);
  int singular = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Index d = 2 + trial % 4;
    const Frame fr = random_frame(d, d + 1 + trial % 5, rng);
    RVec s = rng.uniform_vector(d, 0.3, 2.0);
    if (trial % 3 == 0) {
      s(trial % d) = 0.0;
      ++singular;
    }
    const Mat o = with_singular_values(s, rng);
    for (SlotConvention slots : kAllSlotConventions) {
      const auto v = compare_invertibility(o, fr, slots);
      EXPECT_EQ(v.operator_invertible, v.matrix_invertible) << "trial " << trial << " " << to_string(slots);
    }
  }
  EXPECT_GT(singular, 50);
}

TEST(InvertibilityMatrix, KernelOfOperatorLiftsToKernelOfMatrix) {
  Rng rng(10);
  const Frame fr = random_frame(4, 7, rng);
  RVec s(4);
  s << 1, 2, 0, 1.5;
  const Mat o = with_singular_values(s, rng);
  const Mat ker = null_space(o);
  ASSERT_EQ(ker.cols(), 1);
  // O f = 0 gives B (C_{Psi~} f) = 0 in the frame-frame convention.
  const Vec c = fr.dual().analysis(ker.col(0));
  EXPECT_LT((invertibility_matrix(o, fr) * c).norm(), 1e-12);
}

TEST(InverseGalerkin, SwappedSlotOrderIsTheIdentity) {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const Frame psi = random_frame(3, 6, rng);
    const Frame phi = random_frame(3, 6, rng);
    const Mat o = with_singular_values(rng.uniform_vector(3, 0.5, 2.0), rng);
    const auto chk = mat_inverse_cross_check(o, psi, phi);
    EXPECT_LT(chk.residual_swapped, 1e-10);
    EXPECT_GT(chk.residual_straight, 1e-6);
    EXPECT_EQ(chk.passing, "swapped");
  }
}

TEST(InverseGalerkin, SameFrameSatisfiesBoth) {
  Rng rng(12);
  const Frame psi = random_frame(3, 5, rng);
  const auto chk = mat_inverse_cross_check(with_singular_values(rng.uniform_vector(3, 0.5, 2.0), rng), psi, psi);
  EXPECT_EQ(chk.passing, "both");
}

TEST(InverseGalerkin, SingularOperatorRejected) {
  const Frame psi = Frame::orthonormal_basis(2);
  EXPECT_THROW(mat_inverse_cross_check(Mat::Zero(2, 2), psi, psi), PreconditionError);
}

TEST(SpectralInvariance, IdentityAndFrameOperator) {
  Rng rng(13);
  const TFLattice lat(16, 2, 4);
  const Frame fr = gabor_system(gaussian_window(16), lat).frame;
  const std::vector<LabeledWeight> ws{{"1", Weight::constant(fr.count(), 1.0, lat.index_set())},
                                      {"v1", Weight::polynomial(lat.index_set(), 1.0)}};
  const std::vector<Exponent> ps{Exponent(1.0), Exponent(2.0), Exponent::infinity()};
  for (const Mat& o : {Mat(Mat::Identity(16, 16)), fr.frame_operator()}) {
    const auto rep = spectral_invariance_suite(o, fr, ws, ps, 2.0, rng, 64);
    EXPECT_TRUE(rep.invertible_everywhere());
    EXPECT_TRUE(rep.verdicts_agree);
    for (const auto& e : rep.entries) {
      EXPECT_LE(e.constants.lower, e.constants.lower_sampled * (1 + 1e-10));
      EXPECT_GE(e.constants.upper, e.constants.upper_sampled * (1 - 1e-10));
    }
  }
  const auto id = spectral_invariance_suite(Mat::Identity(16, 16), fr, ws, {Exponent(2.0)}, 2.0, rng);
  for (const auto& e : id.entries) {
    EXPECT_NEAR(e.constants.lower, 1.0, 1e-10);
    EXPECT_NEAR(e.constants.upper, 1.0, 1e-10);
  }
}

TEST(SpectralInvariance, RankDeficientOperatorFailsEverywhere) {
  Rng rng(14);
  const Frame fr = random_frame(4, 8, rng);
  RVec s(4);
  s << 1, 1, 1, 0;
  const std::vector<LabeledWeight> ws{{"1", Weight::constant(8)}};
  const auto rep = spectral_invariance_suite(with_singular_values(s, rng), fr, ws,
                                             {Exponent(1.0), Exponent(2.0)}, 2.0, rng, 32);
  EXPECT_FALSE(rep.invertible_everywhere());
  EXPECT_TRUE(rep.verdicts_agree);
  for (const auto& e : rep.entries) EXPECT_FALSE(e.invertible);
}
