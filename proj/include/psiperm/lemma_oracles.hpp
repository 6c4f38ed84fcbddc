#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "psiperm/bigint.hpp"
#include "psiperm/continued_fraction.hpp"
#include "psiperm/error_value.hpp"
#include "psiperm/perm_dynamics.hpp"

namespace psiperm {

// <b_1, ..., b_m> by the three-term recurrence; <> = 1.
BigInt continuant(const std::vector<BigInt>& b);

// <c_from, ..., c_to> over the partial quotients of cf. An empty range
// (to = from - 1) gives 1 and the range with to = from - 2 gives 0, which is
// what the recurrence needs one step before the empty one.
BigInt continuant_of(const ContinuedFraction& cf, std::size_t from, std::size_t to);

// r_{mu+d} = r_{mu+1} <b_{mu+2..mu+d}> + r_mu <b_{mu+3..mu+d}>, d >= 2.
bool kont_identity_check(const ContinuedFraction& cf, std::size_t mu, std::size_t d);

// beta_{mu+2} b_- = b + (-1)^d / (b_- beta_{mu+d+1} + b_-^-), checked with
// interval enclosures of the two tails built from depth tail quotients each.
// True when the enclosures overlap and both are narrower than 2^-depth (or
// coincide exactly), false when they are disjoint; CannotSeparate otherwise.
bool perron_check(const ContinuedFraction& cf, std::size_t mu, std::size_t d, std::size_t depth);

struct Hilfssatz1Result {
  bool applicable = false;  // q_{nu-1} = r_{mu-1} and q_nu = r_mu
  bool holds = true;        // alpha*_nu = beta*_mu (vacuously true when not applicable)
  Rational alpha_star_a;
  Rational alpha_star_b;
};

// nu, mu >= 1.
Hilfssatz1Result check_hilfssatz1(const ContinuedFraction& a, const ContinuedFraction& b, std::size_t nu,
                                  std::size_t mu);

// How a non-strict inequality between two quantities was settled.
enum class Relation { Less, Equal, Greater };

struct LemmaFinding {
  std::string label_a;
  std::string label_b;
  std::size_t nu = 0;
  std::size_t mu = 0;
  std::size_t d = 0;
  // Conditions (1)-(4): xi_nu <= eta_mu, xi_{nu+1} <= eta_{mu+d-1},
  // q_{nu+1} <= r_{mu+1}, q_{nu+2} = r_{mu+d}.
  std::array<bool, 4> held{};
  std::array<Relation, 3> relation{};  // outcome of (1)-(3)
  bool star_equal = false;             // alpha*_{nu+2} = beta*_{mu+2}
  bool conclusion = false;             // d = 2, (1)-(3) equalities and star_equal
  bool violation() const noexcept { return held[0] && held[1] && held[2] && held[3] && !conclusion; }

  // Witness data.
  BigInt q_nu, q_nu1, q_nu2;
  BigInt r_mu, r_mu1, r_mud1, r_mud;
  BigInt x;  // r_{mu+1} - q_{nu+1}
  std::string xi_nu, eta_mu, xi_nu1, eta_mud1;
  Rational alpha_star, beta_star;
};

struct HauptlemmaScan {
  std::vector<LemmaFinding> findings;  // cells where (1)-(4) all held
  std::size_t cells = 0;               // (nu, mu, d) cells enumerated
  std::size_t compared = 0;            // cells that reached the xi/eta comparisons
  std::size_t violations() const;
};

// All cells nu + 2 <= depth, mu + d <= depth, 1 <= d <= d_max with nu, mu >= 0.
// (4) and (3) are exact integer tests; (1) and (2) go through compare_error,
// with equality proven exactly where the data allow it. CannotSeparate is
// rethrown with the offending indices.
HauptlemmaScan scan_hauptlemma(const ContinuedFraction& a, const ContinuedFraction& b, std::size_t depth,
                               std::size_t d_max, std::size_t max_depth = kDefaultMaxDepth);

struct CorpusScan {
  std::size_t numbers = 0;
  std::size_t pairs = 0;       // ordered pairs, a = b included
  std::size_t candidates = 0;  // cells passing (3), (4) and the a-priori window for (1)
  std::size_t held = 0;        // cells where (1)-(4) all held
  std::vector<LemmaFinding> violation_list;
  std::size_t violations() const noexcept { return violation_list.size(); }
};

// The same scan over every ordered pair of a corpus. Cells are joined on
// r_{mu+d} = q_{nu+2} and the bounds q_{nu+1} <= r_{mu+1} < q_nu + q_{nu+1};
// the upper bound follows from 1/(q_nu + q_{nu+1}) < xi_nu <= eta_mu < 1/r_{mu+1},
// so no cell where (1)-(4) can hold is skipped. Every finding with (1)-(4)
// held is passed to on_finding, if given.
CorpusScan scan_hauptlemma_corpus(const std::vector<ContinuedFraction>& corpus, std::size_t depth,
                                  std::size_t d_max, std::size_t max_depth = kDefaultMaxDepth,
                                  const std::function<void(const LemmaFinding&)>& on_finding = {});

// Every word P of the given length over {1..max_quotient}, realized as the
// purely periodic number [0; P, P, ...] labeled "(p_1 p_2 ...)".
std::vector<ContinuedFraction> periodic_word_corpus(std::size_t length, unsigned max_quotient);

nlohmann::ordered_json finding_to_json(const LemmaFinding& f);

struct Satz3Report {
  // alpha_i +- alpha_j not in Z, decided exactly for periodic members and
  // assumed for the others.
  bool precondition_ok = true;
  std::string precondition_detail;
  // A proven psi_i(t) = psi_j(t) inside the window. sigma(t) is undefined
  // there, so no orderings are counted; this can happen with the
  // precondition intact, e.g. for [0; (5, 3)] and [0; (3, 5)].
  std::string coincidence_detail;
  std::size_t k = 0;
  bool suspect = false;  // any of the above, or fewer than 3 orderings past burn-in
  BigInt t_min;
  BigInt t_max;
  std::size_t events = 0;
  std::size_t events_counted = 0;
  std::vector<OrderingCount> orderings;
};

// True when alpha - beta or alpha + beta is provably an integer. Only
// periodic streams are decided; anything else gives false.
bool integer_sum_or_difference(const ContinuedFraction& alpha, const ContinuedFraction& beta);

// Four numbers: precondition and pairwise psi-coincidence screens, then
// sigma_trace and k_index_estimate over [max q_1, t_max].
Satz3Report check_satz3(const LabeledTuple& tuple, const BigInt& t_max, double burn_in_fraction = 0.5,
                        TraceOptions options = {});

nlohmann::ordered_json satz3_to_json(const Satz3Report& report);

}  // namespace psiperm
