#include <random>

#include <gtest/gtest.h>

#include "magtor/classical.hpp"
#include "support/oracles.hpp"
#include "support/systems.hpp"

namespace magtor {
namespace {

RatMatrix block_transvection(std::size_t m, const IntMatrix& s) {
  RatMatrix a = RatMatrix::identity(2 * m);
  a.set_block(0, m, to_rational(s));
  return a;
}

TEST(LinearSymplectomorphism, Basics) {
  const SymplecticGram j0(standard_symplectic(2));
  EXPECT_TRUE(is_linear_symplectomorphism(RatMatrix::identity(4), j0));
  EXPECT_TRUE(is_linear_symplectomorphism(block_transvection(2, IntMatrix{{2, -1}, {-1, 5}}), j0));
  EXPECT_FALSE(is_linear_symplectomorphism(block_transvection(2, IntMatrix{{2, -1}, {1, 5}}), j0));
  EXPECT_FALSE(is_linear_symplectomorphism(testing::diagonal({2, 1, 1, 1}), j0));
}

TEST(TwistedForm, InverseIsExact) {
  const TwistedForm form(testing::example_i_omega_prime().magnetic());
  EXPECT_EQ(form.dim(), 8u);
  EXPECT_EQ(form.matrix() * form.inverse(), RatMatrix::identity(8));
  EXPECT_EQ(form.matrix().transpose(), -form.matrix());
}

TEST(BuildPhi, IdentityGivesIdentity) {
  const SymplecticGram omega = testing::example_i_omega().magnetic();
  const PhiMap phi = build_phi(RatMatrix::identity(4), omega);
  EXPECT_TRUE(phi.block_qp.is_zero());
  EXPECT_EQ(phi.assembled(), RatMatrix::identity(8));
}

TEST(BuildPhi, ShearOnThePlane) {
  // C = [[0, 1], [-1, 0]], A = [[1, 1], [0, 1]]: A^{-T} - I = [[0, 0], [-1, 0]] and
  // C^{-1} = [[0, -1], [1, 0]], so block_qp = [[1, 0], [0, 0]].
  const SymplecticGram omega(standard_symplectic(1));
  const RatMatrix a{{Rational(1), Rational(1)}, {Rational(0), Rational(1)}};
  const PhiMap phi = build_phi(a, omega);
  const RatMatrix expected{{Rational(1), Rational(0)}, {Rational(0), Rational(0)}};
  EXPECT_EQ(phi.block_qp, expected);
  EXPECT_TRUE(verify_phi(phi, TwistedForm(omega), MetricGram(RatMatrix::identity(2))).ok());
}

TEST(BuildPhi, RejectsNonSymplectic) {
  EXPECT_THROW(build_phi(testing::diagonal({2, 1}), SymplecticGram(standard_symplectic(1))), Error);
}

TEST(VerifyPhi, PerturbedBlockFailsFormCheck) {
  const SymplecticGram omega(standard_symplectic(1));
  const RatMatrix a{{Rational(1), Rational(1)}, {Rational(0), Rational(1)}};
  PhiMap phi = build_phi(a, omega);
  phi.block_qp(0, 1) += 1;
  const PhiVerification report = verify_phi(phi, TwistedForm(omega), MetricGram(RatMatrix::identity(2)));
  EXPECT_FALSE(report.preserves_form);
  EXPECT_FALSE(report.ok());
  EXPECT_FALSE(report.failures.empty());
}

TEST(VerifyPhi, IdentityPassesForAnyForm) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const SymplecticGram omega(oracle::random_skew(rng, 4, 10));
    const PhiMap identity{RatMatrix::identity(4), RatMatrix(4, 4)};
    EXPECT_TRUE(verify_phi(identity, TwistedForm(omega), MetricGram(RatMatrix::identity(4))).ok());
  }
}

TEST(Sampling, ZeroFactorsIsIdentity) {
  EXPECT_EQ(sample_symplectic_integer(ChernFactors({1, 2}), 5, 0), IntMatrix::identity(4));
}

TEST(Sampling, OutputsAreSymplecticAndSeedDependent) {
  const std::vector<ChernFactors> chains{ChernFactors({3}), ChernFactors({1, 4}), ChernFactors({2, 2, 6})};
  for (const auto& r : chains) {
    const SymplecticGram omega(standard_form_gram(r));
    const IntMatrix a = sample_symplectic_integer(r, 1, 8);
    const IntMatrix b = sample_symplectic_integer(r, 2, 8);
    EXPECT_TRUE(is_linear_symplectomorphism(to_rational(a), omega));
    EXPECT_TRUE(is_linear_symplectomorphism(to_rational(b), omega));
    EXPECT_NE(a, b);
    EXPECT_EQ(a, sample_symplectic_integer(r, 1, 8));
  }
}

TEST(Sampling, ArbitraryFormsIncludingOppositeOrientation) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const SymplecticGram omega(oracle::random_skew(rng, 2 * (1 + trial % 3), 6));
    const IntMatrix a = sample_symplectic_for(omega, 40 + trial, 5);
    EXPECT_TRUE(is_linear_symplectomorphism(to_rational(a), omega));
  }
}

TEST(PhiProperty, ExactForSampledMatrices) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 60; ++trial) {
    const SymplecticGram omega(oracle::random_skew(rng, 2 * (1 + trial % 3), 6));
    const IntMatrix a = sample_symplectic_for(omega, 500 + trial, 1 + trial % 12);
    const PhiMap phi = build_phi(to_rational(a), omega);
    const RatMatrix big = phi.assembled();
    const TwistedForm form(omega);
    EXPECT_EQ(big.transpose() * form.matrix() * big, form.matrix());
    EXPECT_TRUE(verify_phi(phi, form, MetricGram(RatMatrix::identity(omega.dim()))).ok());
  }
}

TEST(DeformMetric, Basics) {
  const MetricGram h(RatMatrix::identity(4));
  EXPECT_EQ(deform_metric(h, RatMatrix::identity(4)), h);
  EXPECT_EQ(deform_metric(h, testing::diagonal({2, 1, 1, 1})).matrix(), testing::diagonal({4, 1, 1, 1}));
  EXPECT_THROW(deform_metric(h, testing::diagonal({0, 1, 1, 1})), Error);
  EXPECT_THROW(deform_metric(h, RatMatrix::identity(2)), Error);
}

TEST(MatrixExponential, MatchesIndependentIntegrator) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXd x = Eigen::MatrixXd::NullaryExpr(4, 4, [&] { return entry(rng); });
    const Eigen::MatrixXd fast = matrix_exponential(x);
    const Eigen::MatrixXd slow = oracle::rk4_exponential(x, 1.0, 2000);
    EXPECT_LT((fast - slow).norm() / slow.norm(), 1e-11);
  }
  EXPECT_TRUE(matrix_exponential(Eigen::MatrixXd::Zero(3, 3)).isIdentity(0.0));
}

TEST(DeformationFamily, StaysInTheSymplecticGroupAndVolumeClass) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> entry(-0.5, 0.5);
  const std::vector<double> times{0.0, 0.3, 1.0, 2.0};
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 * (1 + static_cast<std::size_t>(trial % 3));
    const MetricGram h(oracle::random_spd(rng, n));
    const SymplecticGram omega(oracle::random_skew(rng, n, 5));
    Eigen::MatrixXd s = Eigen::MatrixXd::NullaryExpr(n, n, [&] { return entry(rng); });
    s = 0.5 * (s + s.transpose()).eval();
    // Scale so that |X| = 0.5 and exp(2X) stays moderate.
    s *= 0.5 / (to_eigen(omega.matrix()).inverse() * s).norm();
    const DeformationResult result = deformation_family(h, omega, s, times);

    const Eigen::MatrixXd w = to_eigen(omega.matrix());
    const Eigen::MatrixXd x = result.family.generator;
    EXPECT_LT((x.transpose() * w + w * x).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(std::abs(x.trace()), 1e-12);

    const Eigen::MatrixXd h0 = to_eigen(h.matrix());
    EXPECT_LT((result.members.front().metric - h0).cwiseAbs().maxCoeff(), 1e-15);
    const double volume = symplectic_volume(omega).convert_to<double>();
    const SpectralSignature base = spectral_signature(h0, w, volume);
    for (const auto& member : result.members) {
      EXPECT_LT(member.symplectic_defect, 1e-10);
      EXPECT_TRUE(approx_equal(member.metric.determinant(), h0.determinant(), 1e-9));
      EXPECT_TRUE(signatures_match(spectral_signature(member.metric, w, volume), base, 1e-8));
    }
  }
}

}  // namespace
}  // namespace magtor
