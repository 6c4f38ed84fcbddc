#include "psiperm/lemma_oracles.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "psiperm/errors.hpp"
#include "psiperm/psi_function.hpp"

namespace psiperm {

BigInt continuant(const std::vector<BigInt>& b) {
  BigInt prev2 = 0;
  BigInt prev = 1;
  for (const auto& x : b) {
    BigInt cur = x * prev + prev2;
    prev2 = std::move(prev);
    prev = std::move(cur);
  }
  return prev;
}

BigInt continuant_of(const ContinuedFraction& cf, std::size_t from, std::size_t to) {
  if (from == to + 2) return 0;
  if (from == to + 1) return 1;
  if (from > to) throw std::invalid_argument("continuant_of: range ends more than two before it starts");
  std::vector<BigInt> terms;
  terms.reserve(to - from + 1);
  for (std::size_t j = from; j <= to; ++j) terms.push_back(cf.term(j));
  return continuant(terms);
}

bool kont_identity_check(const ContinuedFraction& cf, std::size_t mu, std::size_t d) {
  if (d < 2) throw ConfigError("kont identity: d must be >= 2");
  const auto r = convergents(cf, mu + d + 1);
  const BigInt b = continuant_of(cf, mu + 2, mu + d);
  const BigInt b_minus = continuant_of(cf, mu + 3, mu + d);
  return r[mu + d].q == r[mu + 1].q * b + r[mu].q * b_minus;
}

namespace {

struct Enclosure {
  Rational lo;
  Rational hi;
  bool exact = false;
};

// alpha_index = [c_0; c_1, ...] with c_j = cf.term(index + j), from up to
// depth quotients; the unread remainder y lies in [1, inf).
Enclosure tail_enclosure(const ContinuedFraction& cf, std::size_t index, std::size_t depth) {
  BigInt p1 = 1, p2 = 0, q1 = 0, q2 = 1;
  std::size_t used = 0;
  for (; used < depth; ++used) {
    auto c = cf.try_term(index + used);
    if (!c) break;
    BigInt p = *c * p1 + p2;
    BigInt q = *c * q1 + q2;
    p2 = std::move(p1);
    q2 = std::move(q1);
    p1 = std::move(p);
    q1 = std::move(q);
  }
  if (used == 0) throw StreamExhausted("no partial quotient at index " + std::to_string(index));
  Enclosure e;
  Rational a(p1, q1);
  a.canonicalize();
  if (cf.is_rational() && !cf.try_term(index + used)) {
    e.lo = a;
    e.hi = a;
    e.exact = true;
    return e;
  }
  Rational b(p1 + p2, q1 + q2);
  b.canonicalize();
  e.lo = std::min(a, b);
  e.hi = std::max(a, b);
  return e;
}

Enclosure ordered(Rational x, Rational y, bool exact) {
  Enclosure e;
  e.exact = exact;
  if (y < x) std::swap(x, y);
  e.lo = std::move(x);
  e.hi = std::move(y);
  return e;
}

std::string interval_string(const Enclosure& e) {
  return "[" + to_fraction_string(e.lo) + ", " + to_fraction_string(e.hi) + "]";
}

}  // namespace

bool perron_check(const ContinuedFraction& cf, std::size_t mu, std::size_t d, std::size_t depth) {
  if (d < 2) throw ConfigError("perron check: d must be >= 2");
  if (depth < 1) throw ConfigError("perron check: depth must be >= 1");
  const BigInt b = continuant_of(cf, mu + 2, mu + d);
  const BigInt b_minus = continuant_of(cf, mu + 3, mu + d);
  const BigInt b_mm = continuant_of(cf, mu + 3, mu + d - 1);
  const int sign = d % 2 == 0 ? 1 : -1;

  const Enclosure beta2 = tail_enclosure(cf, mu + 2, depth);
  const Enclosure lhs = ordered(beta2.lo * b_minus, beta2.hi * b_minus, beta2.exact);

  const Enclosure beta_far = tail_enclosure(cf, mu + d + 1, depth);
  auto rhs_at = [&](const Rational& y) -> Rational { return Rational(b) + Rational(sign) / (Rational(b_minus) * y + b_mm); };
  const Enclosure rhs = ordered(rhs_at(beta_far.lo), rhs_at(beta_far.hi), beta_far.exact);

  if (lhs.hi < rhs.lo || rhs.hi < lhs.lo) return false;
  if (lhs.exact && rhs.exact) return lhs.lo == rhs.lo;
  Rational tolerance(1);
  tolerance /= Rational(BigInt(1) << static_cast<mp_bitcnt_t>(depth));
  if (lhs.hi - lhs.lo < tolerance && rhs.hi - rhs.lo < tolerance) return true;
  throw CannotSeparate("perron check: enclosures too wide at depth " + std::to_string(depth), interval_string(lhs),
                       interval_string(rhs));
}

Hilfssatz1Result check_hilfssatz1(const ContinuedFraction& a, const ContinuedFraction& b, std::size_t nu,
                                  std::size_t mu) {
  if (nu < 1 || mu < 1) throw ConfigError("check_hilfssatz1: indices must be >= 1");
  const auto qa = convergents(a, nu + 1);
  const auto qb = convergents(b, mu + 1);
  Hilfssatz1Result out;
  out.applicable = qa[nu - 1].q == qb[mu - 1].q && qa[nu].q == qb[mu].q;
  // Folded from the partial quotients, not read off the denominators.
  out.alpha_star_a = reversed_value(a, nu);
  out.alpha_star_b = reversed_value(b, mu);
  out.holds = !out.applicable || out.alpha_star_a == out.alpha_star_b;
  return out;
}

std::size_t HauptlemmaScan::violations() const {
  return static_cast<std::size_t>(
      std::count_if(findings.begin(), findings.end(), [](const LemmaFinding& f) { return f.violation(); }));
}

namespace {

std::string cell_name(const std::string& la, const std::string& lb, std::size_t nu, std::size_t mu, std::size_t d) {
  return "(" + la + ", " + lb + ") nu=" + std::to_string(nu) + " mu=" + std::to_string(mu) + " d=" + std::to_string(d);
}

Relation relate(const ErrorValue& x, const ErrorValue& y, std::size_t max_depth, const std::string& where) {
  if (structurally_equal(x, y)) return Relation::Equal;
  try {
    return compare_error(x, y, max_depth) == Order::Less ? Relation::Less : Relation::Greater;
  } catch (const CannotSeparate& e) {
    if (prove_equal(x, y, max_depth) == Equality::Equal) return Relation::Equal;
    throw CannotSeparate(std::string(e.what()) + " at " + where, e.left_interval(), e.right_interval());
  }
}

// Cells that fail (4), (3) or the a-priori window for (1) return nullopt
// without touching xi values.
std::optional<LemmaFinding> check_cell(PsiFunction& fa, PsiFunction& fb, std::size_t nu, std::size_t mu,
                                       std::size_t d, std::size_t max_depth, bool* compared) {
  if (fa.denominator(nu + 2) != fb.denominator(mu + d)) return std::nullopt;
  if (fa.denominator(nu + 1) > fb.denominator(mu + 1)) return std::nullopt;
  if (fb.denominator(mu + 1) >= fa.denominator(nu) + fa.denominator(nu + 1)) return std::nullopt;
  if (compared) *compared = true;

  const std::string where = cell_name(fa.label(), fb.label(), nu, mu, d);
  const ErrorValue& xi_nu = fa.xi_at(nu);
  const ErrorValue& eta_mu = fb.xi_at(mu);
  const Relation r1 = relate(xi_nu, eta_mu, max_depth, where);
  if (r1 == Relation::Greater) return std::nullopt;
  const ErrorValue& xi_nu1 = fa.xi_at(nu + 1);
  const ErrorValue& eta_mud1 = fb.xi_at(mu + d - 1);
  const Relation r2 = relate(xi_nu1, eta_mud1, max_depth, where);
  if (r2 == Relation::Greater) return std::nullopt;

  LemmaFinding f;
  f.label_a = fa.label();
  f.label_b = fb.label();
  f.nu = nu;
  f.mu = mu;
  f.d = d;
  f.held = {true, true, true, true};
  f.q_nu = fa.denominator(nu);
  f.q_nu1 = fa.denominator(nu + 1);
  f.q_nu2 = fa.denominator(nu + 2);
  f.r_mu = fb.denominator(mu);
  f.r_mu1 = fb.denominator(mu + 1);
  f.r_mud1 = fb.denominator(mu + d - 1);
  f.r_mud = fb.denominator(mu + d);
  f.x = f.r_mu1 - f.q_nu1;
  const Relation r3 = f.q_nu1 < f.r_mu1 ? Relation::Less : Relation::Equal;
  f.relation = {r1, r2, r3};
  f.xi_nu = xi_nu.describe();
  f.eta_mu = eta_mu.describe();
  f.xi_nu1 = xi_nu1.describe();
  f.eta_mud1 = eta_mud1.describe();
  f.alpha_star = reversed_value(fa.cf(), nu + 2);
  f.beta_star = reversed_value(fb.cf(), mu + 2);
  f.star_equal = f.alpha_star == f.beta_star;
  f.conclusion = d == 2 && r1 == Relation::Equal && r2 == Relation::Equal && r3 == Relation::Equal && f.star_equal;
  return f;
}

void check_scan_args(std::size_t depth, std::size_t d_max) {
  if (depth < 4) throw ConfigError("lemma scan: depth must be >= 4");
  if (d_max < 1) throw ConfigError("lemma scan: d_max must be >= 1");
}

}  // namespace

HauptlemmaScan scan_hauptlemma(const ContinuedFraction& a, const ContinuedFraction& b, std::size_t depth,
                               std::size_t d_max, std::size_t max_depth) {
  check_scan_args(depth, d_max);
  PsiFunction fa(a);
  PsiFunction fb(b);
  HauptlemmaScan out;
  for (std::size_t nu = 0; nu + 2 <= depth; ++nu) {
    for (std::size_t d = 1; d <= d_max && d <= depth; ++d) {
      for (std::size_t mu = 0; mu + d <= depth; ++mu) {
        ++out.cells;
        bool compared = false;
        auto finding = check_cell(fa, fb, nu, mu, d, max_depth, &compared);
        if (compared) ++out.compared;
        if (finding) out.findings.push_back(std::move(*finding));
      }
    }
  }
  return out;
}

CorpusScan scan_hauptlemma_corpus(const std::vector<ContinuedFraction>& corpus, std::size_t depth,
                                  std::size_t d_max, std::size_t max_depth,
                                  const std::function<void(const LemmaFinding&)>& on_finding) {
  check_scan_args(depth, d_max);
  std::vector<PsiFunction> psi;
  psi.reserve(corpus.size());
  for (const auto& cf : corpus) psi.emplace_back(cf);

  struct Entry {
    std::size_t index;
    std::size_t mu;
    std::size_t d;
  };
  // Keyed by r_{mu+d}.
  std::map<BigInt, std::vector<Entry>> by_far;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    for (std::size_t d = 1; d <= d_max && d <= depth; ++d) {
      for (std::size_t mu = 0; mu + d <= depth; ++mu) by_far[psi[j].denominator(mu + d)].push_back(Entry{j, mu, d});
    }
  }

  CorpusScan out;
  out.numbers = corpus.size();
  out.pairs = corpus.size() * corpus.size();
  for (std::size_t i = 0; i < psi.size(); ++i) {
    for (std::size_t nu = 0; nu + 2 <= depth; ++nu) {
      auto it = by_far.find(psi[i].denominator(nu + 2));
      if (it == by_far.end()) continue;
      for (const Entry& e : it->second) {
        bool compared = false;
        auto finding = check_cell(psi[i], psi[e.index], nu, e.mu, e.d, max_depth, &compared);
        if (compared) ++out.candidates;
        if (!finding) continue;
        ++out.held;
        if (on_finding) on_finding(*finding);
        if (finding->violation()) out.violation_list.push_back(std::move(*finding));
      }
    }
  }
  return out;
}

std::vector<ContinuedFraction> periodic_word_corpus(std::size_t length, unsigned max_quotient) {
  if (length < 1 || max_quotient < 1) throw ConfigError("corpus needs length >= 1 and max quotient >= 1");
  std::vector<ContinuedFraction> out;
  std::vector<unsigned> word(length, 1);
  for (;;) {
    std::vector<BigInt> period(word.begin(), word.end());
    std::string label = "(";
    for (std::size_t i = 0; i < length; ++i) label += (i ? " " : "") + std::to_string(word[i]);
    label += ")";
    out.push_back(ContinuedFraction::periodic(0, {}, std::move(period), label));
    std::size_t pos = length;
    while (pos > 0 && word[pos - 1] == max_quotient) word[--pos] = 1;
    if (pos == 0) break;
    ++word[pos - 1];
  }
  return out;
}

namespace {

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::Less:
      return "<";
    case Relation::Equal:
      return "=";
    case Relation::Greater:
      return ">";
  }
  return "?";
}

}  // namespace

nlohmann::ordered_json finding_to_json(const LemmaFinding& f) {
  nlohmann::ordered_json j;
  j["a"] = f.label_a;
  j["b"] = f.label_b;
  j["nu"] = f.nu;
  j["mu"] = f.mu;
  j["d"] = f.d;
  j["held"] = f.held;
  j["relations"] = {relation_name(f.relation[0]), relation_name(f.relation[1]), relation_name(f.relation[2])};
  j["star_equal"] = f.star_equal;
  j["conclusion"] = f.conclusion;
  j["status"] = f.violation() ? "VIOLATION" : "ok";
  nlohmann::ordered_json w;
  w["q_nu"] = to_decimal(f.q_nu);
  w["q_nu+1"] = to_decimal(f.q_nu1);
  w["q_nu+2"] = to_decimal(f.q_nu2);
  w["r_mu"] = to_decimal(f.r_mu);
  w["r_mu+1"] = to_decimal(f.r_mu1);
  w["r_mu+d-1"] = to_decimal(f.r_mud1);
  w["r_mu+d"] = to_decimal(f.r_mud);
  w["x"] = to_decimal(f.x);
  w["xi_nu"] = f.xi_nu;
  w["eta_mu"] = f.eta_mu;
  w["xi_nu+1"] = f.xi_nu1;
  w["eta_mu+d-1"] = f.eta_mud1;
  w["alpha_star"] = to_fraction_string(f.alpha_star);
  w["beta_star"] = to_fraction_string(f.beta_star);
  j["witness"] = std::move(w);
  return j;
}

namespace {

// The fractional part [0; a_1, a_2, ...] of a periodic number, and 1 minus it
// as [0; 1, a_1 - 1, a_2, ...], or [0; a_2 + 1, a_3, ...] when a_1 = 1.
struct Fractions {
  ContinuedFraction frac;
  ContinuedFraction complement;
};

Fractions fractional_parts(const ContinuedFraction& cf) {
  const PeriodicForm q = *tail(cf, 1).periodic_form();  // term i is a_{i+1}
  auto a = [&](std::size_t i) -> BigInt {
    return i <= q.preperiod.size() ? q.preperiod[i - 1] : q.period[(i - q.preperiod.size() - 1) % q.period.size()];
  };
  std::vector<BigInt> head;
  std::size_t next = 0;
  if (a(1) >= 2) {
    head = {BigInt(1), a(1) - 1};
    next = 2;
  } else {
    head = {a(2) + 1};
    next = 3;
  }
  // copy until the remaining quotients start on a period boundary
  while (next <= q.preperiod.size() || (next - q.preperiod.size() - 1) % q.period.size() != 0) {
    head.push_back(a(next++));
  }
  return {ContinuedFraction::periodic(0, q.preperiod, q.period),
          ContinuedFraction::periodic(0, std::move(head), q.period)};
}

}  // namespace

bool integer_sum_or_difference(const ContinuedFraction& alpha, const ContinuedFraction& beta) {
  if (alpha.kind() != StreamKind::Periodic || beta.kind() != StreamKind::Periodic) return false;
  const Fractions a = fractional_parts(alpha);
  const Fractions b = fractional_parts(beta);
  return a.frac.same_stream(b.frac) || a.complement.same_stream(b.frac);
}

Satz3Report check_satz3(const LabeledTuple& tuple, const BigInt& t_max, double burn_in_fraction,
                        TraceOptions options) {
  if (tuple.size() != 4) throw ConfigError("check_satz3 needs exactly four numbers");
  Satz3Report report;
  report.t_min = first_common_t(tuple);
  report.t_max = t_max;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      if (report.precondition_ok && integer_sum_or_difference(tuple[i].cf, tuple[j].cf)) {
        report.precondition_ok = false;
        report.precondition_detail = tuple[i].label + " +- " + tuple[j].label + " is an integer";
      }
      if (!report.coincidence_detail.empty()) continue;
      auto hit = incommensurability_scan(tuple[i].cf, tuple[j].cf, t_max, options);
      if (hit && hit->kind == CoincidenceFinding::Kind::ProvenEqual) {
        report.coincidence_detail =
            "psi(" + tuple[i].label + ") = psi(" + tuple[j].label + ") at t=" + to_decimal(hit->t);
      }
    }
  }
  if (!report.precondition_ok || !report.coincidence_detail.empty()) {
    report.suspect = true;
    return report;
  }
  const PermutationTrace trace = sigma_trace(tuple, report.t_min, t_max, options);
  const KIndexEstimate est = k_index_estimate(trace, burn_in_fraction);
  report.k = est.k();
  report.suspect = est.k() < 3;
  report.events = trace.events.size();
  report.events_counted = est.events_counted;
  report.orderings = est.orderings;
  return report;
}

nlohmann::ordered_json satz3_to_json(const Satz3Report& report) {
  nlohmann::ordered_json j;
  j["precondition_ok"] = report.precondition_ok;
  if (!report.precondition_ok) j["precondition_detail"] = report.precondition_detail;
  if (!report.coincidence_detail.empty()) j["coincidence"] = report.coincidence_detail;
  j["k"] = report.k;
  j["status"] = report.suspect ? "SUSPECT" : "ok";
  j["t_min"] = to_decimal(report.t_min);
  j["t_max"] = to_decimal(report.t_max);
  j["events"] = report.events;
  j["events_counted"] = report.events_counted;
  nlohmann::ordered_json ords = nlohmann::ordered_json::array();
  for (const auto& o : report.orderings) ords.push_back({{"sigma", o.sigma}, {"count", o.count}});
  j["orderings"] = std::move(ords);
  return j;
}

}  // namespace psiperm
