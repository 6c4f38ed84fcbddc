#include <random>

#include <gtest/gtest.h>

#include "psiperm/continued_fraction.hpp"
#include "psiperm/errors.hpp"
#include "support.hpp"

using namespace psiperm;
using psiperm::testing::ints;

namespace {

std::vector<BigInt> denominators(const ContinuedFraction& cf, std::size_t n) {
  std::vector<BigInt> out;
  for (const auto& c : convergents(cf, n)) out.push_back(c.q);
  return out;
}

}  // namespace

TEST(Convergents, FibonacciDenominators) {
  auto cf = ContinuedFraction::prefix(0, ints({1, 1, 1, 1, 1}));
  EXPECT_EQ(denominators(cf, 6), ints({1, 1, 2, 3, 5, 8}));
}

TEST(Convergents, SingleStep) {
  auto conv = convergents(ContinuedFraction::prefix(0, ints({2})), 2);
  ASSERT_EQ(conv.size(), 2u);
  EXPECT_EQ(conv[0].p, 0);
  EXPECT_EQ(conv[0].q, 1);
  EXPECT_EQ(conv[1].p, 1);
  EXPECT_EQ(conv[1].q, 2);
}

TEST(Convergents, HandRunRecurrence) {
  EXPECT_EQ(denominators(ContinuedFraction::prefix(0, ints({1, 2, 3, 4})), 5), ints({1, 1, 3, 10, 43}));
}

TEST(Convergents, PeriodicOneTwo) {
  auto cf = ContinuedFraction::periodic(0, {}, ints({1, 2}));
  EXPECT_EQ(denominators(cf, 5), ints({1, 1, 3, 4, 11}));
}

TEST(Convergents, ExhaustedPrefix) {
  auto cf = ContinuedFraction::prefix(0, ints({1, 2}));
  EXPECT_THROW(convergents(cf, 4), StreamExhausted);
  EXPECT_NO_THROW(convergents(cf, 3));
}

TEST(Convergents, RationalEnds) {
  auto r = ContinuedFraction::rational(0, ints({2, 3}));
  EXPECT_THROW(convergents(r, 4), StreamExhausted);
  EXPECT_EQ(finite_value(0, ints({2, 3})), Rational(3, 7));
}

TEST(ContinuedFractionInput, RejectsNonPositiveQuotients) {
  EXPECT_THROW(ContinuedFraction::prefix(0, ints({1, 0, 2})), ConfigError);
  EXPECT_THROW(ContinuedFraction::periodic(0, {}, {}), ConfigError);
  EXPECT_THROW(ContinuedFraction::periodic(0, ints({1}), ints({-1})), ConfigError);
}

TEST(ContinuedFractionInput, CanonicalRationalForm) {
  EXPECT_THROW(ContinuedFraction::rational(0, ints({2, 1})), ConfigError);
  auto cf = ContinuedFraction::from_fraction(Rational(3, 7));
  EXPECT_EQ(cf.term(1), 2);
  EXPECT_EQ(cf.term(2), 3);
  EXPECT_FALSE(cf.try_term(3).has_value());
  EXPECT_TRUE(cf.is_rational());
}

TEST(ContinuedFractionInput, RandomStreamIsDeterministic) {
  auto a = ContinuedFraction::random(0, 42, 7);
  auto b = ContinuedFraction::random(0, 42, 7);
  for (std::size_t j = 1; j < 300; ++j) {
    ASSERT_EQ(a.term(j), b.term(j));
    ASSERT_GE(a.term(j), 1);
    ASSERT_LE(a.term(j), 7);
  }
  EXPECT_EQ(a.term(1000), a.term(1000));
}

TEST(AlphaStar, Examples) {
  EXPECT_EQ(alpha_star(psiperm::testing::golden(), 5), Rational(5, 8));
  EXPECT_EQ(alpha_star(psiperm::testing::silver(), 2), Rational(2, 5));
  auto cf = ContinuedFraction::prefix(0, ints({6, 1, 1}));
  EXPECT_EQ(alpha_star(cf, 1), Rational(1, 6));
}

TEST(AlphaStar, TwoThree) {
  // q_1 = 2, q_2 = 7 for [0; 2, 3, ...]
  auto cf = ContinuedFraction::prefix(0, ints({2, 3, 5}));
  EXPECT_EQ(alpha_star(cf, 2), Rational(2, 7));
  EXPECT_EQ(reversed_value(cf, 2), Rational(2, 7));
}

TEST(Tail, Shifts) {
  auto cf = ContinuedFraction::prefix(0, ints({1, 2, 3, 4, 5}));
  auto t = tail(cf, 2);
  EXPECT_EQ(t.term(0), 2);
  EXPECT_EQ(t.term(1), 3);
  EXPECT_EQ(t.term(2), 4);

  auto p = ContinuedFraction::periodic(0, {}, ints({1, 2}));
  auto pt = tail(p, 3);
  EXPECT_EQ(pt.term(0), 1);
  EXPECT_EQ(pt.term(1), 2);
  EXPECT_EQ(pt.term(2), 1);
  // a_3 of [0; 1, 2, 1, 2, ...] is 1, so the tail is [1; (2, 1)], the same stream as [1; 2, (1, 2)].
  EXPECT_TRUE(pt.periodic_form().has_value());

  auto g = tail(psiperm::testing::golden(), 17);
  for (std::size_t j = 0; j < 10; ++j) EXPECT_EQ(g.term(j), 1);
}

TEST(Tail, RationalExhausts) {
  auto r = ContinuedFraction::rational(0, ints({2, 3}));
  EXPECT_THROW(tail(r, 3), StreamExhausted);
}

TEST(SameStream, PeriodicCanonical) {
  auto a = ContinuedFraction::periodic(0, ints({1, 2}), ints({1, 2}));
  auto b = ContinuedFraction::periodic(0, {}, ints({1, 2, 1, 2}));
  EXPECT_TRUE(a.same_stream(b));
  EXPECT_FALSE(a.same_stream(psiperm::testing::golden()));
}

// |p_nu q_{nu-1} - p_{nu-1} q_nu| = 1 for nu <= 200 over 100 random CFs.
TEST(ConvergentProperties, Determinant) {
  std::mt19937_64 rng(20241014);
  for (int sample = 0; sample < 100; ++sample) {
    auto cf = psiperm::testing::random_prefix(rng, 200, 10);
    auto conv = convergents(cf, 201);
    for (std::size_t nu = 1; nu < conv.size(); ++nu) {
      const BigInt det = conv[nu].p * conv[nu - 1].q - conv[nu - 1].p * conv[nu].q;
      ASSERT_EQ(abs(det), 1) << "sample " << sample << " nu " << nu;
    }
    for (std::size_t nu = 2; nu < conv.size(); ++nu) ASSERT_LT(conv[nu - 1].q, conv[nu].q);
  }
}

TEST(ConvergentProperties, AlphaStarIsReversedFold) {
  std::mt19937_64 rng(7);
  for (int sample = 0; sample < 100; ++sample) {
    auto q = psiperm::testing::random_quotients(rng, 40, 9);
    auto cf = ContinuedFraction::prefix(0, q);
    for (std::size_t nu = 1; nu <= 40; ++nu) {
      std::vector<BigInt> rev(q.rbegin() + static_cast<std::ptrdiff_t>(40 - nu), q.rend());
      ASSERT_EQ(alpha_star(cf, nu), finite_value(0, rev)) << "nu " << nu;
    }
  }
}
