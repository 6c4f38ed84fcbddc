#include "psiperm/perm_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "psiperm/errors.hpp"
#include "psiperm/io_util.hpp"
#include "psiperm/psi_function.hpp"

namespace psiperm {

LabeledTuple::LabeledTuple(std::vector<TupleMember> members) : members_(std::move(members)) {
  if (members_.size() < 2) throw ConfigError("a tuple needs at least two numbers");
  std::set<std::string> seen;
  for (const auto& m : members_) {
    if (!seen.insert(m.label).second) throw ConfigError("duplicate tuple label '" + m.label + "'");
  }
}

LabeledTuple LabeledTuple::of(const std::vector<ContinuedFraction>& numbers) {
  std::vector<TupleMember> members;
  members.reserve(numbers.size());
  for (const auto& cf : numbers) members.push_back(TupleMember{cf.label(), cf});
  return LabeledTuple(std::move(members));
}

namespace {

std::vector<PsiFunction> make_psi(const LabeledTuple& tuple) {
  std::vector<PsiFunction> out;
  out.reserve(tuple.size());
  for (const auto& m : tuple.members()) out.emplace_back(m.cf);
  return out;
}

// t_min plus every jump of some member inside (t_min, t_max], ascending.
std::vector<BigInt> event_points(std::vector<PsiFunction>& psi, const BigInt& t_min, const BigInt& t_max) {
  std::vector<BigInt> points{t_min};
  for (auto& f : psi) {
    const std::size_t top = f.index_at(t_max);
    for (std::size_t nu = f.index_at(t_min) + 1; nu <= top; ++nu) points.push_back(f.denominator(nu));
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

void check_window(std::vector<PsiFunction>& psi, const BigInt& t_min, const BigInt& t_max) {
  if (t_max <= t_min) {
    throw ConfigError("window [" + to_decimal(t_min) + ", " + to_decimal(t_max) + "] is empty: t_max must exceed t_min");
  }
  for (auto& f : psi) f.index_at(t_min);
}

}  // namespace

BigInt first_common_t(const LabeledTuple& tuple) {
  BigInt best = 0;
  for (const auto& m : tuple.members()) {
    const auto conv = convergents(m.cf, 2);
    if (conv[1].q > best) best = conv[1].q;
  }
  return best;
}

BigInt depth_window(const LabeledTuple& tuple, std::size_t depth) {
  if (depth < 2) throw ConfigError("depth window needs at least 2 convergents");
  BigInt best;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    const auto conv = convergents(tuple[i].cf, depth + 1);
    if (i == 0 || conv[depth].q < best) best = conv[depth].q;
  }
  return best;
}

PermutationTrace sigma_trace(const LabeledTuple& tuple, const BigInt& t_min, const BigInt& t_max,
                             TraceOptions options) {
  auto psi = make_psi(tuple);
  check_window(psi, t_min, t_max);
  const auto points = event_points(psi, t_min, t_max);

  PermutationTrace trace{t_min, t_max, {}};
  const std::size_t n = tuple.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::vector<const ErrorValue*> values(n);

  for (const BigInt& t : points) {
    for (std::size_t i = 0; i < n; ++i) values[i] = &psi[i].eval(t);
    auto greater = [&](std::size_t i, std::size_t j) {
      try {
        return compare_error(*values[i], *values[j], options.max_depth) == Order::Greater;
      } catch (const CannotSeparate&) {
        throw TieDetected(to_decimal(t), tuple[i].label, tuple[j].label);
      }
    };
    // The previous ordering is nearly right; insertion sort proves every
    // adjacent pair of the result on the way.
    for (std::size_t i = 1; i < n; ++i) {
      for (std::size_t j = i; j > 0 && greater(order[j], order[j - 1]); --j) std::swap(order[j], order[j - 1]);
    }
    Ordering sigma;
    sigma.reserve(n);
    for (std::size_t i : order) sigma.push_back(tuple[i].label);
    if (!trace.events.empty()) {
      if (trace.events.back().sigma == sigma) continue;
      trace.events.back().t_to = t;
    }
    trace.events.push_back(TraceEvent{t, std::nullopt, std::move(sigma)});
  }
  return trace;
}

KIndexEstimate k_index_estimate(const PermutationTrace& trace, double burn_in_fraction) {
  if (!(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0)) {
    throw ConfigError("burn-in fraction must lie in [0, 1)");
  }
  const std::size_t total = trace.events.size();
  if (total == 0) throw EmptyWindow("k-index: the trace has no events");
  const auto first = static_cast<std::size_t>(std::floor(burn_in_fraction * static_cast<double>(total)));
  if (first >= total) throw EmptyWindow("k-index: burn-in leaves no events");

  KIndexEstimate out;
  out.first_event = first;
  out.events_counted = total - first;
  out.window_start = trace.events[first].t_from;
  for (std::size_t i = first; i < total; ++i) {
    const auto& sigma = trace.events[i].sigma;
    auto it = std::find_if(out.orderings.begin(), out.orderings.end(),
                           [&](const OrderingCount& c) { return c.sigma == sigma; });
    if (it == out.orderings.end()) {
      out.orderings.push_back(OrderingCount{sigma, 1});
    } else {
      ++it->count;
    }
  }
  return out;
}

namespace {

LabeledTuple pair_tuple(const ContinuedFraction& a, const ContinuedFraction& b) {
  std::string la = a.label().empty() ? "a" : a.label();
  std::string lb = b.label().empty() ? "b" : b.label();
  if (la == lb) {
    la = "a";
    lb = "b";
  }
  return LabeledTuple({TupleMember{la, a}, TupleMember{lb, b}});
}

}  // namespace

SignChanges sign_changes(const ContinuedFraction& a, const ContinuedFraction& b, const BigInt& t_min,
                         const BigInt& t_max, TraceOptions options) {
  const LabeledTuple tuple = pair_tuple(a, b);
  const PermutationTrace trace = sigma_trace(tuple, t_min, t_max, options);
  SignChanges out;
  for (const auto& e : trace.events) {
    const int sign = e.sigma.front() == tuple[0].label ? 1 : -1;
    out.intervals.push_back(SignInterval{e.t_from, e.t_to, sign});
  }
  return out;
}

std::optional<CoincidenceFinding> incommensurability_scan(const ContinuedFraction& a, const ContinuedFraction& b,
                                                          const BigInt& t_max, TraceOptions options) {
  const LabeledTuple tuple = pair_tuple(a, b);
  auto psi = make_psi(tuple);
  const BigInt t_min = first_common_t(tuple);
  if (t_max < t_min) {
    throw BelowFirstDenominator("incommensurability scan: t_max " + to_decimal(t_max) + " is below q_1 = " +
                                to_decimal(t_min));
  }
  std::vector<BigInt> points = t_max == t_min ? std::vector<BigInt>{t_min} : event_points(psi, t_min, t_max);
  for (const BigInt& t : points) {
    const ErrorValue& x = psi[0].eval(t);
    const ErrorValue& y = psi[1].eval(t);
    const Equality eq = prove_equal(x, y, options.max_depth);
    if (eq == Equality::Equal) {
      return CoincidenceFinding{CoincidenceFinding::Kind::ProvenEqual, t, "psi values equal: " + x.describe()};
    }
    if (eq == Equality::Unequal) continue;
    try {
      compare_error(x, y, options.max_depth);
    } catch (const CannotSeparate& e) {
      return CoincidenceFinding{CoincidenceFinding::Kind::CannotSeparate, t, e.what()};
    }
  }
  return std::nullopt;
}

nlohmann::ordered_json trace_to_json(const PermutationTrace& trace) {
  nlohmann::ordered_json events = nlohmann::ordered_json::array();
  for (const auto& e : trace.events) {
    nlohmann::ordered_json row;
    row["t_from"] = to_decimal(e.t_from);
    row["t_to"] = e.t_to ? nlohmann::ordered_json(to_decimal(*e.t_to)) : nlohmann::ordered_json(nullptr);
    row["sigma"] = e.sigma;
    events.push_back(std::move(row));
  }
  nlohmann::ordered_json out;
  out["events"] = std::move(events);
  return out;
}

void write_tuple_steps_csv(const LabeledTuple& tuple, const BigInt& t_min, const BigInt& t_max, std::ostream& out) {
  auto psi = make_psi(tuple);
  check_window(psi, t_min, t_max);
  const BigInt past_end = t_max + 1;
  out << "label,t_start,t_end,nu,xi_lo,xi_hi\n";
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    PsiFunction& f = psi[i];
    const std::size_t top = f.index_at(t_max);
    for (std::size_t nu = f.index_at(t_min); nu <= top; ++nu) {
      const BigInt start = std::max(f.denominator(nu), t_min);
      const BigInt end = std::min(f.denominator(nu + 1), past_end);
      const ErrorValue& x = f.xi_at(nu);
      out << csv_field(tuple[i].label) << ',' << to_decimal(start) << ',' << to_decimal(end) << ',' << nu << ','
          << to_fraction_string(x.lo()) << ',' << to_fraction_string(x.hi()) << '\n';
    }
  }
}

}  // namespace psiperm
