#include <random>

#include <gtest/gtest.h>

#include "psiperm/errors.hpp"
#include "psiperm/lemma_oracles.hpp"
#include "support.hpp"

using namespace psiperm;
using psiperm::testing::golden;
using psiperm::testing::ints;
using psiperm::testing::silver;

TEST(Continuant, Examples) {
  EXPECT_EQ(continuant(ints({2, 3})), 7);
  EXPECT_EQ(continuant(ints({1, 1, 1, 1})), 5);
  EXPECT_EQ(continuant(ints({2, 3, 4})), 30);
  EXPECT_EQ(continuant({}), 1);
  EXPECT_EQ(continuant(ints({9})), 9);
}

TEST(Continuant, RangeConventions) {
  auto cf = ContinuedFraction::prefix(0, ints({2, 3, 4}));
  EXPECT_EQ(continuant_of(cf, 1, 3), 30);
  EXPECT_EQ(continuant_of(cf, 4, 3), 1);
  EXPECT_EQ(continuant_of(cf, 5, 3), 0);
}

TEST(Continuant, ReversalInvariant) {
  std::mt19937_64 rng(12);
  for (int sample = 0; sample < 2000; ++sample) {
    auto b = psiperm::testing::random_quotients(rng, rng() % 13, 6);
    std::vector<BigInt> r(b.rbegin(), b.rend());
    ASSERT_EQ(continuant(b), continuant(r));
  }
}

TEST(Continuant, MatchesDenominators) {
  auto cf = ContinuedFraction::random(0, 5, 9);
  auto conv = convergents(cf, 30);
  for (std::size_t nu = 1; nu < 30; ++nu) EXPECT_EQ(continuant_of(cf, 1, nu), conv[nu].q);
}

TEST(KontIdentity, Examples) {
  EXPECT_TRUE(kont_identity_check(ContinuedFraction::prefix(0, ints({1, 2, 3, 4, 5})), 1, 2));
  EXPECT_TRUE(kont_identity_check(ContinuedFraction::random(0, 3, 7), 0, 4));
  EXPECT_THROW(kont_identity_check(golden(), 0, 1), ConfigError);
  EXPECT_THROW(kont_identity_check(ContinuedFraction::prefix(0, ints({1, 2})), 1, 3), StreamExhausted);
}

TEST(KontIdentity, RandomSweep) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto cf = ContinuedFraction::random(0, seed, 12);
    for (std::size_t mu = 0; mu < 15; ++mu) {
      for (std::size_t d = 2; d <= 8; ++d) ASSERT_TRUE(kont_identity_check(cf, mu, d));
    }
  }
}

TEST(Perron, Examples) {
  EXPECT_TRUE(perron_check(ContinuedFraction::periodic(0, {}, ints({1, 2})), 1, 2, 40));
  EXPECT_TRUE(perron_check(golden(), 0, 3, 40));
  // both parities of d
  for (std::size_t d = 2; d <= 7; ++d) EXPECT_TRUE(perron_check(silver(), 2, d, 40)) << "d " << d;
}

TEST(Perron, RationalIsExact) {
  auto r = ContinuedFraction::rational(0, ints({2, 3, 1, 4, 2, 5, 3}));
  EXPECT_TRUE(perron_check(r, 0, 3, 60));
}

TEST(Perron, RandomSamples) {
  std::mt19937_64 rng(60);
  for (int sample = 0; sample < 100; ++sample) {
    auto cf = ContinuedFraction::random(0, rng(), 1 + rng() % 10);
    const std::size_t mu = rng() % 20;
    const std::size_t d = 2 + rng() % 4;
    ASSERT_TRUE(perron_check(cf, mu, d, 60)) << "sample " << sample;
  }
}

TEST(Perron, TooShallow) {
  EXPECT_THROW(perron_check(ContinuedFraction::random(0, 8, 3), 0, 3, 1), CannotSeparate);
}

TEST(ReversedTail, SameNumber) {
  auto r = check_hilfssatz1(golden(), golden(), 6, 6);
  EXPECT_TRUE(r.applicable);
  EXPECT_TRUE(r.holds);
}

TEST(ReversedTail, DifferFromThirdQuotient) {
  auto a = ContinuedFraction::prefix(0, ints({2, 3, 1, 1}));
  auto b = ContinuedFraction::prefix(0, ints({2, 3, 4, 4}));
  auto r = check_hilfssatz1(a, b, 2, 2);
  EXPECT_TRUE(r.applicable);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.alpha_star_a, Rational(2, 7));  // q_1 / q_2 with q_1 = 2, q_2 = 7
  EXPECT_EQ(r.alpha_star_b, Rational(2, 7));
}

TEST(ReversedTail, NotApplicable) {
  // q = 1, 3, 4 for [0; 3, 1, ...] and q = 1, 1, 4 for [0; 1, 3, ...]
  auto a = ContinuedFraction::prefix(0, ints({3, 1, 5}));
  auto b = ContinuedFraction::prefix(0, ints({1, 3, 5}));
  auto r = check_hilfssatz1(a, b, 2, 2);
  EXPECT_FALSE(r.applicable);
  EXPECT_TRUE(r.holds);
}

TEST(MainLemma, SelfPair) {
  auto scan = scan_hauptlemma(silver(), silver(), 12, 6);
  EXPECT_EQ(scan.violations(), 0u);
  bool diagonal = false;
  for (const auto& f : scan.findings) {
    if (f.nu == f.mu && f.d == 2) {
      diagonal = true;
      EXPECT_TRUE(f.conclusion);
      EXPECT_EQ(f.relation[0], Relation::Equal);
      EXPECT_EQ(f.relation[1], Relation::Equal);
      EXPECT_EQ(f.relation[2], Relation::Equal);
    }
  }
  EXPECT_TRUE(diagonal);
}

TEST(MainLemma, GoldenSilver) {
  auto scan = scan_hauptlemma(golden(), silver(), 15, 6);
  EXPECT_EQ(scan.violations(), 0u);
  EXPECT_GT(scan.cells, 0u);
}

TEST(MainLemma, Arguments) {
  EXPECT_THROW(scan_hauptlemma(golden(), silver(), 3, 6), ConfigError);
  EXPECT_THROW(scan_hauptlemma(golden(), silver(), 10, 0), ConfigError);
}

// Every cell where (1)-(4) hold shows d = 2, the equalities and alpha* = beta*.
TEST(MainLemma, RandomPairsConclusion) {
  std::mt19937_64 rng(15);
  std::size_t held = 0;
  for (int sample = 0; sample < 150; ++sample) {
    auto a = psiperm::testing::random_prefix(rng, 16, 3);
    auto b = rng() % 3 == 0 ? a : psiperm::testing::random_prefix(rng, 16, 3);
    auto scan = scan_hauptlemma(a, b, 15, 6);
    ASSERT_EQ(scan.violations(), 0u) << "sample " << sample;
    for (const auto& f : scan.findings) {
      ++held;
      ASSERT_EQ(f.d, 2u);
      ASSERT_EQ(f.alpha_star, f.beta_star);
      ASSERT_EQ(f.q_nu2, f.r_mud);
    }
  }
  EXPECT_GT(held, 0u);
}

TEST(MainLemmaCorpus, SmallExhaustive) {
  auto corpus = periodic_word_corpus(5, 2);
  ASSERT_EQ(corpus.size(), 32u);
  EXPECT_EQ(corpus.front().label(), "(1 1 1 1 1)");
  std::size_t seen = 0;
  auto scan = scan_hauptlemma_corpus(corpus, 8, 6, kDefaultMaxDepth, [&](const LemmaFinding&) { ++seen; });
  EXPECT_EQ(scan.numbers, 32u);
  EXPECT_EQ(scan.pairs, 32u * 32u);
  EXPECT_EQ(scan.violations(), 0u);
  EXPECT_GT(scan.held, 0u);
  EXPECT_EQ(seen, scan.held);
}

// The join must find the same held cells as the plain per-pair scan.
TEST(MainLemmaCorpus, AgreesWithPairScan) {
  auto corpus = periodic_word_corpus(4, 3);
  std::size_t pair_held = 0;
  for (const auto& a : corpus) {
    for (const auto& b : corpus) pair_held += scan_hauptlemma(a, b, 8, 6).findings.size();
  }
  auto scan = scan_hauptlemma_corpus(corpus, 8, 6);
  EXPECT_EQ(scan.held, pair_held);
}

TEST(FindingJson, Fields) {
  auto scan = scan_hauptlemma(golden(), golden(), 8, 3);
  ASSERT_FALSE(scan.findings.empty());
  auto j = finding_to_json(scan.findings.front());
  EXPECT_EQ(j["status"], "ok");
  EXPECT_EQ(j["relations"].size(), 3u);
  EXPECT_TRUE(j["witness"].contains("x"));
}

TEST(FourNumbers, DistinctPeriods) {
  auto tuple = LabeledTuple({TupleMember{"a", ContinuedFraction::periodic(0, {}, ints({1, 2}))},
                             TupleMember{"b", ContinuedFraction::periodic(0, {}, ints({3}))},
                             TupleMember{"c", ContinuedFraction::periodic(0, {}, ints({2, 5, 1}))},
                             TupleMember{"d", ContinuedFraction::periodic(0, {}, ints({4, 1}))}});
  auto report = check_satz3(tuple, depth_window(tuple, 30));
  EXPECT_TRUE(report.precondition_ok);
  EXPECT_GE(report.k, 3u);
  EXPECT_FALSE(report.suspect);
}

TEST(FourNumbers, ComplementBreaksPrecondition) {
  auto a = ContinuedFraction::periodic(0, ints({3}), ints({1, 2}), "a");
  auto tuple = LabeledTuple({TupleMember{"a", a}, TupleMember{"1-a", psiperm::testing::complement(a)},
                             TupleMember{"g", golden()}, TupleMember{"s", silver()}});
  auto report = check_satz3(tuple, 100000);
  EXPECT_FALSE(report.precondition_ok);
  EXPECT_TRUE(report.suspect);
  EXPECT_FALSE(report.precondition_detail.empty());
}

TEST(FourNumbers, CoincidenceWithPreconditionIntact) {
  // psi agrees on [q_{2m+1}, q_{2m+2}) for all m although neither sum nor difference is an integer
  auto tuple = LabeledTuple({TupleMember{"a", ContinuedFraction::periodic(0, {}, ints({5, 3}))},
                             TupleMember{"b", ContinuedFraction::periodic(0, {}, ints({3, 5}))},
                             TupleMember{"g", golden()}, TupleMember{"s", silver()}});
  auto report = check_satz3(tuple, 100000);
  EXPECT_TRUE(report.precondition_ok);
  EXPECT_EQ(report.coincidence_detail, "psi(a) = psi(b) at t=5");
  EXPECT_TRUE(report.suspect);
  EXPECT_EQ(satz3_to_json(report)["status"], "SUSPECT");
}

TEST(FourNumbers, IntegerSumOrDifference) {
  auto a = ContinuedFraction::periodic(0, ints({3}), ints({1, 2}));
  EXPECT_TRUE(integer_sum_or_difference(a, ContinuedFraction::periodic(4, ints({3, 1}), ints({2, 1}))));
  EXPECT_TRUE(integer_sum_or_difference(a, psiperm::testing::complement(a)));
  EXPECT_TRUE(integer_sum_or_difference(golden(), ContinuedFraction::periodic(1, ints({2}), ints({1}))));
  EXPECT_FALSE(integer_sum_or_difference(golden(), silver()));
  EXPECT_FALSE(integer_sum_or_difference(ContinuedFraction::periodic(0, {}, ints({5, 3})),
                                         ContinuedFraction::periodic(0, {}, ints({3, 5}))));
  EXPECT_FALSE(integer_sum_or_difference(ContinuedFraction::random(0, 1, 3), ContinuedFraction::random(0, 1, 3)));
}

TEST(FourNumbers, NeedsFour) {
  EXPECT_THROW(check_satz3(LabeledTuple::of({golden(), silver()}), 100), ConfigError);
}
