#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "psiperm/errors.hpp"
#include "psiperm/psi_function.hpp"
#include "support.hpp"

using namespace psiperm;
using psiperm::testing::golden;
using psiperm::testing::ints;
using psiperm::testing::silver;

namespace {

double mid(const ErrorValue& x) {
  x.refine_to(60);
  return Rational((x.lo() + x.hi()) / 2).get_d();
}

std::vector<BigInt> jump_qs(PsiFunction& f, long t_max) {
  std::vector<BigInt> out;
  for (const auto& j : jump_points(f, t_max)) out.push_back(j.q);
  return out;
}

}  // namespace

TEST(PsiEval, GoldenAtFour) {
  PsiFunction f(golden());
  EXPECT_EQ(f.index_at(4), 3u);
  EXPECT_NEAR(mid(psi_eval(f, 4)), 0.1458980, 1e-7);
}

TEST(PsiEval, RightClosedAtJump) {
  PsiFunction f(golden());
  for (std::size_t nu = 1; nu < 25; ++nu) {
    const BigInt q = f.denominator(nu);
    if (nu >= 2) {
      EXPECT_EQ(&psi_eval(f, q), &f.xi_at(nu));
      EXPECT_EQ(&psi_eval(f, q - 1), &f.xi_at(nu - 1));
    }
  }
}

TEST(PsiEval, SilverAtFive) {
  PsiFunction f(silver());
  EXPECT_NEAR(mid(psi_eval(f, 5)), 0.0710678, 1e-7);
}

TEST(PsiEval, RejectsRationalsAndSmallT) {
  EXPECT_THROW(PsiFunction(ContinuedFraction::rational(0, ints({2, 3}))), RationalNotAdmitted);
  PsiFunction f(ContinuedFraction::periodic(0, {}, ints({5})));
  EXPECT_THROW(psi_eval(f, 4), BelowFirstDenominator);
  EXPECT_NO_THROW(psi_eval(f, 5));
}

TEST(PsiBruteForce, GoldenProxy) {
  auto r = psi_bruteforce(Rational(6765, 10946), 4);
  EXPECT_EQ(r.argmin, 3);
  EXPECT_NEAR(r.value.get_d(), 0.1458980, 1e-6);
}

TEST(PsiBruteForce, SingleTerm) {
  const Rational x(1000003, 3000017);
  auto r = psi_bruteforce(x, 1);
  EXPECT_EQ(r.argmin, 1);
  EXPECT_EQ(r.value, x);  // ||x|| = x below 1/2
}

TEST(PsiBruteForce, ExactHit) {
  auto r = psi_bruteforce(Rational(1, 2), 2, BruteForceOptions{true});
  EXPECT_EQ(r.value, 0);
  EXPECT_EQ(r.argmin, 2);
}

TEST(PsiBruteForce, CoarseProxy) {
  EXPECT_THROW(psi_bruteforce(Rational(1, 2), 2), ProxyTooCoarse);
  EXPECT_THROW(psi_bruteforce(Rational(6765, 10946), 20), ProxyTooCoarse);
}

TEST(PsiBruteForce, ScanMatchesPointwise) {
  const Rational proxy(165580141, 267914296);
  auto scan = psi_bruteforce_scan(proxy, 300);
  for (long t : {1, 2, 7, 55, 300}) {
    auto r = psi_bruteforce(proxy, t);
    EXPECT_EQ(scan[t - 1].value, r.value);
    EXPECT_EQ(scan[t - 1].argmin, r.argmin);
  }
}

TEST(JumpPoints, Golden) {
  PsiFunction f(golden());
  EXPECT_EQ(jump_qs(f, 8), ints({2, 3, 5, 8}));
}

TEST(JumpPoints, BelowFirst) {
  PsiFunction f(ContinuedFraction::periodic(0, {}, ints({5})));
  EXPECT_THROW(jump_points(f, 4), BelowFirstDenominator);
}

TEST(JumpPoints, OneTwoThreeFour) {
  PsiFunction f(ContinuedFraction::prefix(0, ints({1, 2, 3, 4, 5, 6})));
  EXPECT_EQ(jump_qs(f, 43), ints({3, 10, 43}));
}

TEST(JumpPoints, HeightsDrop) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    PsiFunction f(ContinuedFraction::random(0, seed, 8));
    for (const auto& j : jump_points(f, BigInt("1000000000000"))) {
      ASSERT_EQ(compare_error(*j.left, *j.right), Order::Greater) << "nu " << j.nu;
    }
  }
}

TEST(StepCsv, Golden) {
  PsiFunction f(golden());
  std::ostringstream out;
  write_step_csv(f, 8, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t_start,t_end,nu,q_nu,xi_lo,xi_hi");
  std::vector<std::string> starts;
  while (std::getline(in, line)) starts.push_back(line.substr(0, line.find(',')));
  EXPECT_EQ(starts, (std::vector<std::string>{"1", "2", "3", "5", "8"}));
}

TEST(PsiProperties, MonotoneInT) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    PsiFunction f(ContinuedFraction::random(0, 77 + seed, 8));
    const BigInt q1 = f.first_denominator();
    std::size_t prev_nu = f.index_at(q1);
    for (BigInt t = q1 + 1; t < q1 + 5000; ++t) {
      const std::size_t nu = f.index_at(t);
      ASSERT_GE(nu, prev_nu);
      if (nu != prev_nu) {
        ASSERT_EQ(compare_error(f.xi_at(prev_nu), f.xi_at(nu)), Order::Greater);
        ASSERT_EQ(t, f.denominator(nu));
      }
      prev_nu = nu;
    }
  }
}

// The interval of psi_eval holds the brute-force minimum, orders like it,
// and the brute-force argmin is the current convergent denominator.
TEST(PsiProperties, OracleEquivalence) {
  std::mt19937_64 rng(4242);
  constexpr std::size_t kTMax = 10000;
  std::vector<PsiFunction> fs;
  std::vector<std::vector<BruteForcePsi>> oracle;
  for (int i = 0; i < 20; ++i) {
    auto cf = psiperm::testing::random_prefix(rng, 80, 8);
    auto conv = convergents(cf, 81);
    std::size_t n = 1;
    while (conv[n].q <= 2 * BigInt(kTMax) * kTMax * kTMax) ++n;
    const Rational proxy(conv[n].p, conv[n].q);
    fs.emplace_back(cf);
    oracle.push_back(psi_bruteforce_scan(proxy, kTMax));
  }
  for (std::size_t i = 0; i < fs.size(); ++i) {
    PsiFunction& f = fs[i];
    for (std::size_t t = static_cast<std::size_t>(f.first_denominator().get_ui()); t <= kTMax; ++t) {
      const ErrorValue& x = psi_eval(f, t);
      ASSERT_TRUE(x.contains(oracle[i][t - 1].value)) << "cf " << i << " t " << t;
      ASSERT_EQ(oracle[i][t - 1].argmin, f.denominator(f.index_at(t))) << "cf " << i << " t " << t;
    }
  }
  for (std::size_t i = 0; i + 1 < fs.size(); ++i) {
    const std::size_t t0 = std::max(fs[i].first_denominator(), fs[i + 1].first_denominator()).get_ui();
    for (std::size_t t = t0; t <= kTMax; t += 37) {
      const Order o = compare_error(psi_eval(fs[i], t), psi_eval(fs[i + 1], t));
      ASSERT_EQ(o == Order::Greater, oracle[i][t - 1].value > oracle[i + 1][t - 1].value) << "t " << t;
    }
  }
}
