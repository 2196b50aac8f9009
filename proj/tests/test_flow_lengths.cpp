#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "magtor/flow.hpp"
#include "magtor/lengths.hpp"
#include "support/oracles.hpp"
#include "support/systems.hpp"

namespace magtor {
namespace {

TorusMagneticSystem plane() {
  return testing::make_system(RatMatrix::identity(2), IntMatrix{{0, 1}, {-1, 0}});
}

Eigen::VectorXd stacked(const CotangentState& s) {
  Eigen::VectorXd out(s.q.size() + s.p.size());
  out << s.q, s.p;
  return out;
}

/// The vector field (h^{-1} p, -omega h^{-1} p) as one linear map on (q, p).
Eigen::MatrixXd hamiltonian_field(const TorusMagneticSystem& sys) {
  const Eigen::MatrixXd h_inv = to_eigen(sys.metric().matrix()).inverse();
  const Eigen::MatrixXd w = to_eigen(sys.magnetic().matrix());
  const auto n = h_inv.rows();
  Eigen::MatrixXd field = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  field.block(0, n, n, n) = h_inv;
  field.block(n, n, n, n) = -w * h_inv;
  return field;
}

TEST(Flow, TimeZeroIsIdentity) {
  const auto sys = testing::example_i_omega();
  const CotangentState x{Eigen::Vector4d(0.1, 0.2, 0.3, 0.4), Eigen::Vector4d(1, -1, 0.5, 2)};
  const CotangentState y = MagneticFlow(sys).on_cover(x, 0.0);
  EXPECT_EQ(stacked(x), stacked(y));
}

TEST(Flow, RestStaysAtRest) {
  const auto sys = testing::example_ii_h();
  const CotangentState x{Eigen::Vector4d(0.1, 0.7, 0.3, 0.9), Eigen::Vector4d::Zero()};
  for (double t : {0.5, 3.0, 10.0}) {
    const CotangentState y = magnetic_flow(sys, x, t);
    EXPECT_LT((y.q - x.q).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_EQ(y.p, x.p);
  }
}

TEST(Flow, PlaneMomentumTracesUnitCircle) {
  const MagneticFlow flow(plane());
  const CotangentState x{Eigen::Vector2d::Zero(), Eigen::Vector2d(1, 0)};
  for (double t = 0.0; t <= 2 * std::numbers::pi; t += 0.25) {
    EXPECT_NEAR(flow.on_cover(x, t).p.norm(), 1.0, 1e-12);
  }
  const CotangentState period = flow.on_cover(x, 2 * std::numbers::pi);
  EXPECT_LT((period.p - x.p).norm(), 1e-12);
  EXPECT_LT(period.q.norm(), 1e-12);
}

TEST(Flow, AgreesWithRungeKutta) {
  for (const auto& sys : {testing::example_i_omega(), testing::example_ii_h_prime(), plane()}) {
    const MagneticFlow flow(sys);
    const auto n = static_cast<Eigen::Index>(sys.dim());
    const CotangentState x{Eigen::VectorXd::LinSpaced(n, 0.1, 0.4), Eigen::VectorXd::LinSpaced(n, 1.0, -0.5)};
    for (double t : {0.5, 2.0, 7.0}) {
      const Eigen::VectorXd reference = oracle::rk4_linear(hamiltonian_field(sys), stacked(x), t, 20000);
      EXPECT_LT((stacked(flow.on_cover(x, t)) - reference).cwiseAbs().maxCoeff(), 1e-9);
    }
  }
}

TEST(Flow, TorusReductionIsInUnitCube) {
  const auto sys = testing::example_i_omega_prime();
  const CotangentState x{Eigen::Vector4d(0.5, 0.5, 0.5, 0.5), Eigen::Vector4d(3, -2, 1, 4)};
  for (double t : {1.0, 5.0, 9.0}) {
    const CotangentState y = magnetic_flow(sys, x, t);
    EXPECT_GE(y.q.minCoeff(), 0.0);
    EXPECT_LT(y.q.maxCoeff(), 1.0);
  }
  EXPECT_EQ(reduce_mod_lattice(Eigen::Vector2d(-0.25, 3.5)), Eigen::Vector2d(0.75, 0.5));
}

TEST(Flow, ConservesEnergyAndComposes) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 2 * (1 + static_cast<std::size_t>(trial % 3));
    const auto sys = testing::make_system(oracle::random_spd(rng, n), oracle::random_skew(rng, n, 4));
    const MagneticFlow flow(sys);
    const auto dim = static_cast<Eigen::Index>(n);
    const CotangentState x{Eigen::VectorXd::NullaryExpr(dim, [&] { return coord(rng); }),
                           Eigen::VectorXd::NullaryExpr(dim, [&] { return coord(rng); })};
    const double e0 = flow.energy(x.p);
    for (double t : {0.1, 1.0, 4.0, 10.0}) {
      EXPECT_LE(std::abs(flow.energy(flow.on_cover(x, t).p) - e0), 1e-12 * (1.0 + e0));
    }
    const double s = 1.3;
    const double t = 2.6;
    const CotangentState once = flow.on_cover(x, s + t);
    const CotangentState twice = flow.on_cover(flow.on_cover(x, t), s);
    EXPECT_LT((stacked(once) - stacked(twice)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Conjugacy, IdentityAndShear) {
  const auto sys = testing::make_system(testing::diagonal({2, Rational(1, 3)}), IntMatrix{{0, 1}, {-1, 0}});
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::vector<CotangentState> states;
  for (int i = 0; i < 10; ++i) {
    states.push_back({Eigen::Vector2d(coord(rng), coord(rng)), Eigen::Vector2d(coord(rng), coord(rng))});
  }
  const std::vector<double> times{0.1, 1.0, 5.0};
  const ConjugacyReport identity = flow_conjugacy_check(sys, RatMatrix::identity(2), states, times);
  EXPECT_EQ(identity.worst_deviation, 0.0);
  const RatMatrix shear{{Rational(1), Rational(1)}, {Rational(0), Rational(1)}};
  const ConjugacyReport sheared = flow_conjugacy_check(sys, shear, states, times);
  EXPECT_TRUE(sheared.ok);
  EXPECT_LE(sheared.worst_deviation, 1e-8);
}

TEST(Lengths, CubicLattice) {
  const LengthSpectrum s = length_spectrum(MetricGram(RatMatrix::identity(4)), 1.0, 100);
  ASSERT_EQ(s.squared_lengths.size(), 8u);
  for (double v : s.squared_lengths) EXPECT_EQ(v, 1.0);
  EXPECT_FALSE(s.truncated);
}

TEST(Lengths, ExampleTwoMetric) {
  const LengthSpectrum s = length_spectrum(testing::example_ii_h().metric(), 1.0, 100);
  EXPECT_EQ(s.squared_lengths, std::vector<double>(4, 1.0));
}

TEST(Lengths, IsometricPairAgreesAtEveryBound) {
  for (double bound : {1.0, 4.0, 10.0, 25.0}) {
    const LengthSpectrum a = length_spectrum(testing::example_ii_h().metric(), bound, 100000);
    const LengthSpectrum b = length_spectrum(testing::example_ii_h_prime().metric(), bound, 100000);
    EXPECT_TRUE(same_length_spectrum(a, b));
  }
}

TEST(Lengths, MatchesBruteForceOnSkewedLattices) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t n = 2 * (1 + static_cast<std::size_t>(trial % 2));
    const Eigen::MatrixXd g = to_eigen(oracle::random_spd(rng, n));
    const double bound = 3.0 * Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g).eigenvalues().maxCoeff();
    const LengthSpectrum fast = length_spectrum(g, bound, 100000);
    const std::vector<double> slow = oracle::brute_force_lengths(g, bound);
    ASSERT_EQ(fast.squared_lengths.size(), slow.size()) << "trial " << trial;
    for (std::size_t i = 0; i < slow.size(); ++i) EXPECT_NEAR(fast.squared_lengths[i], slow[i], 1e-9);
  }
}

TEST(Lengths, TruncationAndBudget) {
  const LengthSpectrum s = length_spectrum(MetricGram(RatMatrix::identity(2)), 2.0, 5);
  EXPECT_TRUE(s.truncated);
  EXPECT_EQ(s.squared_lengths.size(), 5u);
  EXPECT_THROW(length_spectrum(MetricGram(RatMatrix::identity(4)), 400.0, 10), Error);
}

TEST(Lengths, LllReturnsUnimodularBasis) {
  Eigen::MatrixXd g(2, 2);
  g << 1, 0.99, 0.99, 1;
  const Eigen::MatrixXd u = lll_reduce_gram(g);
  EXPECT_NEAR(std::abs(u.determinant()), 1.0, 1e-12);
  const Eigen::MatrixXd reduced = u.transpose() * g * u;
  EXPECT_LE(reduced(0, 0), g(0, 0) + 1e-12);
}

}  // namespace
}  // namespace magtor
