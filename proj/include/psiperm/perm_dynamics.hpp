#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "psiperm/bigint.hpp"
#include "psiperm/continued_fraction.hpp"
#include "psiperm/error_value.hpp"

namespace psiperm {

struct TupleMember {
  std::string label;
  ContinuedFraction cf;
};

// An n-tuple of reals, n >= 2, with unique labels.
class LabeledTuple {
 public:
  explicit LabeledTuple(std::vector<TupleMember> members);
  // Labels taken from the continued fractions themselves.
  static LabeledTuple of(const std::vector<ContinuedFraction>& numbers);

  std::size_t size() const noexcept { return members_.size(); }
  const TupleMember& operator[](std::size_t i) const { return members_.at(i); }
  const std::vector<TupleMember>& members() const noexcept { return members_; }

 private:
  std::vector<TupleMember> members_;
};

using Ordering = std::vector<std::string>;

// sigma is constant on [t_from, t_to); t_to is empty on the last event, whose
// interval runs to the end of the window and beyond as far as it is known.
struct TraceEvent {
  BigInt t_from;
  std::optional<BigInt> t_to;
  Ordering sigma;  // labels by strictly descending psi
};

struct PermutationTrace {
  BigInt t_min;
  BigInt t_max;
  std::vector<TraceEvent> events;
};

struct TraceOptions {
  std::size_t max_depth = kDefaultMaxDepth;
};

// sigma(t) over the closed window [t_min, t_max]. Orderings are recomputed
// only at t_min and at jump points of the members; equal neighbours merge.
// Throws TieDetected when two psi values cannot be separated, and
// BelowFirstDenominator when t_min < q_1 of some member.
PermutationTrace sigma_trace(const LabeledTuple& tuple, const BigInt& t_min, const BigInt& t_max,
                             TraceOptions options = {});

// Largest q_1 over the members; the smallest admissible t_min.
BigInt first_common_t(const LabeledTuple& tuple);

// Smallest q_depth over the members: the end of a window covering depth
// convergents of every member.
BigInt depth_window(const LabeledTuple& tuple, std::size_t depth);

struct OrderingCount {
  Ordering sigma;
  std::size_t count = 0;  // number of events carrying sigma
};

struct KIndexEstimate {
  std::vector<OrderingCount> orderings;  // in order of first appearance
  std::size_t first_event = 0;           // index of the first event counted
  std::size_t events_counted = 0;
  BigInt window_start;                   // t_from of the first event counted
  std::size_t k() const noexcept { return orderings.size(); }
};

// Distinct orderings among the last (1 - burn_in_fraction) share of the
// events, i.e. events with index >= floor(burn_in_fraction * N). A finite
// window can only suggest which orderings recur for arbitrarily large t.
KIndexEstimate k_index_estimate(const PermutationTrace& trace, double burn_in_fraction = 0.5);

struct SignInterval {
  BigInt t_from;
  std::optional<BigInt> t_to;
  int sign = 0;  // +1 where psi_a > psi_b, -1 where psi_a < psi_b
};

struct SignChanges {
  std::vector<SignInterval> intervals;  // maximal, alternating in sign
  std::size_t alternations() const noexcept { return intervals.empty() ? 0 : intervals.size() - 1; }
};

SignChanges sign_changes(const ContinuedFraction& a, const ContinuedFraction& b, const BigInt& t_min,
                         const BigInt& t_max, TraceOptions options = {});

struct CoincidenceFinding {
  enum class Kind { ProvenEqual, CannotSeparate };
  Kind kind = Kind::ProvenEqual;
  BigInt t;
  std::string detail;
};

// Earliest t in [max q_1, t_max] at which psi_a(t) = psi_b(t) is proven, or at
// which the two values cannot be separated within the depth budget.
std::optional<CoincidenceFinding> incommensurability_scan(const ContinuedFraction& a, const ContinuedFraction& b,
                                                          const BigInt& t_max, TraceOptions options = {});

// {"events": [{"t_from": "dec", "t_to": "dec" | null, "sigma": [...]}]}
nlohmann::ordered_json trace_to_json(const PermutationTrace& trace);

// Step-plot rows label,t_start,t_end,nu,xi_lo,xi_hi: each psi step clipped to
// the window, t_end exclusive.
void write_tuple_steps_csv(const LabeledTuple& tuple, const BigInt& t_min, const BigInt& t_max, std::ostream& out);

}  // namespace psiperm
