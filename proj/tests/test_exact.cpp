#include <gtest/gtest.h>

#include "magtor/exact.hpp"

namespace magtor {
namespace {

TEST(Rational, ParsesLowestTerms) {
  EXPECT_EQ(to_string(parse_rational("6/4")), "3/2");
  EXPECT_EQ(to_string(parse_rational("-2/4")), "-1/2");
  EXPECT_EQ(to_string(parse_rational("10/5")), "2");
  EXPECT_EQ(to_string(parse_rational("7")), "7");
}

TEST(Rational, RejectsMalformedInput) {
  for (const char* text : {"", "1/0", "a/2", "1/2/3", "0.5", "1//2", "2/-4"}) {
    EXPECT_THROW(parse_rational(text), Error) << text;
  }
}

TEST(Integer, ParsesBeyondSixtyFourBits) {
  const Integer big = parse_integer("123456789012345678901234567890");
  EXPECT_EQ(big.str(), "123456789012345678901234567890");
  EXPECT_THROW(parse_integer("12x"), Error);
}

TEST(ExactSqrt, PerfectSquaresOnly) {
  EXPECT_EQ(*exact_sqrt(Integer(144)), 12);
  EXPECT_EQ(*exact_sqrt(Integer(0)), 0);
  EXPECT_FALSE(exact_sqrt(Integer(145)).has_value());
  EXPECT_FALSE(exact_sqrt(Integer(-4)).has_value());
  const Integer big = parse_integer("1000000000000000000000");
  EXPECT_EQ(*exact_sqrt(big * big), big);
}

TEST(Determinant, BareissMatchesCofactorExpansion) {
  const IntMatrix a{{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}};
  EXPECT_EQ(determinant(a), 4);
  const IntMatrix needs_pivot{{0, 1}, {1, 0}};
  EXPECT_EQ(determinant(needs_pivot), -1);
  const IntMatrix singular{{1, 2}, {2, 4}};
  EXPECT_EQ(determinant(singular), 0);
}

TEST(Inverse, RationalRoundTrip) {
  const RatMatrix a{{Rational(1), Rational(2)}, {Rational(3), Rational(4)}};
  const auto inv = inverse(a);
  ASSERT_TRUE(inv.has_value());
  EXPECT_EQ(a * *inv, RatMatrix::identity(2));
  EXPECT_EQ(to_string((*inv)(0, 0)), "-2");
  EXPECT_EQ(to_string((*inv)(1, 0)), "3/2");
  EXPECT_FALSE(inverse(RatMatrix{{Rational(1), Rational(2)}, {Rational(2), Rational(4)}}).has_value());
}

TEST(Matrix, LeadingMinorsAndIntegrality) {
  const RatMatrix h{{Rational(2), Rational(1)}, {Rational(1), Rational(1, 2)}};
  const auto minors = leading_principal_minors(h);
  ASSERT_EQ(minors.size(), 2u);
  EXPECT_EQ(minors[0], 2);
  EXPECT_EQ(minors[1], 0);
  EXPECT_FALSE(to_integer(h).has_value());
  EXPECT_TRUE(to_integer(RatMatrix::identity(3)).has_value());
}

}  // namespace
}  // namespace magtor
