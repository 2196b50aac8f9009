#include <random>

#include <gtest/gtest.h>

#include "magtor/normal_form.hpp"
#include "support/oracles.hpp"
#include "support/systems.hpp"

namespace magtor {
namespace {

using testing::interleaved_form;

std::vector<Integer> doubled(const ChernFactors& r) {
  std::vector<Integer> out;
  for (const auto& v : r.values()) {
    out.push_back(v);
    out.push_back(v);
  }
  return out;
}

/// Sign of Pf(Gram(omega_r)) for block order: (-1)^{m(m-1)/2}.
int target_pfaffian_sign(std::size_t m) { return (m * (m - 1) / 2) % 2 == 0 ? 1 : -1; }

bool congruent(const SymplecticGram& omega, const NormalForm& nf) {
  const IntMatrix& a = nf.transform.matrix();
  return a.transpose() * omega.matrix() * a == standard_form_gram(nf.factors);
}

TEST(ChernFactors, ChainIsEnforced) {
  EXPECT_NO_THROW(ChernFactors({1, 2, 6}));
  EXPECT_THROW(ChernFactors({2, 3}), Error);
  EXPECT_THROW(ChernFactors({0, 2}), Error);
  EXPECT_THROW(ChernFactors({-1}), Error);
  EXPECT_EQ(ChernFactors({2, 4, 8}).product(), 64);
}

TEST(Unimodular, DeterminantMustBeUnit) {
  EXPECT_NO_THROW(UnimodularTransform(IntMatrix::identity(4)));
  EXPECT_EQ(UnimodularTransform(IntMatrix{{0, 1}, {1, 0}}).determinant(), -1);
  EXPECT_THROW(UnimodularTransform(IntMatrix{{2, 0}, {0, 1}}), Error);
}

TEST(StandardForm, BlockLayout) {
  const IntMatrix g = standard_form_gram(ChernFactors({1, 4}));
  const IntMatrix expected{{0, 0, 1, 0}, {0, 0, 0, 4}, {-1, 0, 0, 0}, {0, -4, 0, 0}};
  EXPECT_EQ(g, expected);
}

TEST(ChernInvariantFactors, StandardStructureNeedsNoChange) {
  for (int m = 1; m <= 3; ++m) {
    const NormalForm nf = chern_invariant_factors(SymplecticGram(standard_symplectic(m)));
    EXPECT_EQ(nf.factors, ChernFactors(std::vector<Integer>(static_cast<std::size_t>(m), 1)));
    EXPECT_EQ(nf.transform.matrix(), IntMatrix::identity(static_cast<std::size_t>(2 * m)));
  }
}

TEST(ChernInvariantFactors, ExampleOneForms) {
  const SymplecticGram omega = testing::example_i_omega().magnetic();
  const SymplecticGram omega_prime = testing::example_i_omega_prime().magnetic();
  const NormalForm nf = chern_invariant_factors(omega);
  const NormalForm nf_prime = chern_invariant_factors(omega_prime);
  EXPECT_EQ(nf.factors, ChernFactors({2, 2}));
  EXPECT_EQ(nf_prime.factors, ChernFactors({1, 4}));
  EXPECT_EQ(doubled(nf.factors), oracle::smith_diagonal(omega.matrix()));
  EXPECT_EQ(doubled(nf_prime.factors), oracle::smith_diagonal(omega_prime.matrix()));
  EXPECT_TRUE(congruent(omega, nf));
  EXPECT_TRUE(congruent(omega_prime, nf_prime));
}

TEST(ChernInvariantFactors, InterleavedOrderForcesOrientationReversal) {
  // Pf(sum r_j dx_j^dy_j) = r1 r2 > 0 but Pf([[0, R], [-R, 0]]) = -r1 r2 for m = 2,
  // and Pf(A^T omega A) = det(A) Pf(omega).
  const NormalForm nf = chern_invariant_factors(testing::example_i_omega().magnetic());
  EXPECT_EQ(nf.transform.determinant(), -1);
  EXPECT_FALSE(nf.orientation_preserving());
}

TEST(ChernInvariantFactors, DegenerateInputRejected) {
  EXPECT_THROW(chern_invariant_factors(SymplecticGram(IntMatrix(4, 4))), Error);
}

TEST(VerifyNormalForm, WrongFactorsRejected) {
  EXPECT_FALSE(verify_normal_form(SymplecticGram(standard_symplectic(1)), ChernFactors({2}),
                                  UnimodularTransform(IntMatrix::identity(2))));
}

TEST(VerifyNormalForm, HandBuiltWitnessInBlockOrder) {
  // 2 dx1^dy1 + 2 dx2^dy2 written in (x1, x2, y1, y2) order is already Gram(omega_(2,2)).
  const IntMatrix omega{{0, 0, 2, 0}, {0, 0, 0, 2}, {-2, 0, 0, 0}, {0, -2, 0, 0}};
  EXPECT_TRUE(verify_normal_form(SymplecticGram(omega), ChernFactors({2, 2}),
                                 UnimodularTransform(IntMatrix::identity(4))));
  // In interleaved order the reordering to (x1, x2, y1, y2) is a witness of
  // determinant -1, and none of determinant +1 exists for m = 2.
  const IntMatrix perm{{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}};
  const SymplecticGram interleaved(interleaved_form({1, 4}));
  EXPECT_EQ(perm.transpose() * interleaved.matrix() * perm, standard_form_gram(ChernFactors({1, 4})));
  EXPECT_FALSE(verify_normal_form(interleaved, ChernFactors({1, 4}), UnimodularTransform(perm)));
}

TEST(VerifyNormalForm, OppositeOrientationHasNoDeterminantOneWitness) {
  const SymplecticGram omega(IntMatrix{{0, -1}, {1, 0}});
  const NormalForm nf = chern_invariant_factors(omega);
  EXPECT_EQ(nf.factors, ChernFactors({1}));
  EXPECT_TRUE(congruent(omega, nf));
  EXPECT_EQ(nf.transform.determinant(), -1);
  EXPECT_FALSE(verify_normal_form(omega, nf.factors, nf.transform));
}

TEST(NormalFormProperty, RandomSkewMatrices) {
  std::mt19937_64 rng(7);
  int reversed = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 * (1 + static_cast<std::size_t>(trial % 3));
    const SymplecticGram omega(oracle::random_skew(rng, n, 10));
    const NormalForm nf = chern_invariant_factors(omega);
    ASSERT_TRUE(congruent(omega, nf)) << "trial " << trial;
    EXPECT_EQ(doubled(nf.factors), oracle::smith_diagonal(omega.matrix())) << "trial " << trial;
    EXPECT_EQ(nf.factors.product(), symplectic_volume(omega));

    // det(A) is forced by the Pfaffian signs.
    const int pf_sign = oracle::pfaffian(omega.matrix()) > 0 ? 1 : -1;
    const int expected_det = pf_sign * target_pfaffian_sign(n / 2);
    EXPECT_EQ(nf.transform.determinant(), expected_det) << "trial " << trial;
    EXPECT_EQ(verify_normal_form(omega, nf.factors, nf.transform), expected_det == 1);
    reversed += expected_det == -1 ? 1 : 0;
  }
  EXPECT_GT(reversed, 0);
}

TEST(NormalFormProperty, CongruenceInvariance) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 * (1 + static_cast<std::size_t>(trial % 3));
    const IntMatrix omega = oracle::random_skew(rng, n, 10);
    const IntMatrix b = oracle::random_unimodular(rng, n, 20);
    ASSERT_EQ(determinant(b), 1);
    EXPECT_EQ(chern_invariant_factors(SymplecticGram(b.transpose() * omega * b)).factors,
              chern_invariant_factors(SymplecticGram(omega)).factors);
  }
}

TEST(NormalFormProperty, KnownFactorsAreRecovered) {
  std::mt19937_64 rng(13);
  const std::vector<std::vector<Integer>> chains{{3}, {1, 6}, {2, 2}, {2, 4, 12}, {1, 1, 5}};
  for (const auto& chain : chains) {
    const ChernFactors r(chain);
    for (int trial = 0; trial < 10; ++trial) {
      const IntMatrix b = oracle::random_unimodular(rng, 2 * r.size(), 15);
      const NormalForm nf = chern_invariant_factors(SymplecticGram(b.transpose() * standard_form_gram(r) * b));
      EXPECT_EQ(nf.factors, r);
      // Congruent by a det +1 matrix to the target, so orientation is preserved.
      EXPECT_TRUE(nf.orientation_preserving());
    }
  }
}

TEST(Obstruction, ExampleOne) {
  const ObstructionReport report =
      phase_space_obstruction(testing::example_i_omega().magnetic(), testing::example_i_omega_prime().magnetic());
  EXPECT_EQ(report.verdict, Obstruction::NotSymplectomorphic);
  EXPECT_EQ(report.first, ChernFactors({2, 2}));
  EXPECT_EQ(report.second, ChernFactors({1, 4}));
}

TEST(Obstruction, EqualFactorsAreInconclusive) {
  const SymplecticGram omega = testing::example_i_omega().magnetic();
  EXPECT_EQ(phase_space_obstruction(omega, omega).verdict, Obstruction::Inconclusive);
  std::mt19937_64 rng(17);
  const IntMatrix b = oracle::random_unimodular(rng, 4, 20);
  const IntMatrix j0 = standard_symplectic(2);
  EXPECT_EQ(phase_space_obstruction(SymplecticGram(j0), SymplecticGram(b.transpose() * j0 * b)).verdict,
            Obstruction::Inconclusive);
}

TEST(Obstruction, DimensionMismatch) {
  EXPECT_THROW(phase_space_obstruction(SymplecticGram(standard_symplectic(1)), SymplecticGram(standard_symplectic(2))),
               Error);
}

}  // namespace
}  // namespace magtor
