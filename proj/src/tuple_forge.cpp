#include "psiperm/tuple_forge.hpp"

#include <algorithm>
#include <set>

#include "psiperm/errors.hpp"
#include "psiperm/psi_function.hpp"

namespace psiperm {

FamilyLabel FamilyLabel::pair(int i, int j) {
  if (i > j) std::swap(i, j);
  if (i == j || i < 1) throw std::invalid_argument("pair label needs 1 <= i < j");
  return FamilyLabel{i, j};
}

std::string FamilyLabel::to_string() const {
  if (is_singleton()) return "{" + std::to_string(i) + "}";
  return "{" + std::to_string(i) + "," + std::to_string(j) + "}";
}

FamilyLabel FamilyLabel::parse(const std::string& text) {
  if (text.size() < 3 || text.front() != '{' || text.back() != '}') {
    throw ConfigError("bad family label '" + text + "'");
  }
  const std::string body = text.substr(1, text.size() - 2);
  try {
    const auto comma = body.find(',');
    if (comma == std::string::npos) return singleton(std::stoi(body));
    return pair(std::stoi(body.substr(0, comma)), std::stoi(body.substr(comma + 1)));
  } catch (const std::logic_error&) {
    throw ConfigError("bad family label '" + text + "'");
  }
}

FamilyOrder family_indexing(int k) {
  if (k < 2) throw ConfigError("family order k must be >= 2");
  FamilyOrder order;
  order.k = k;
  for (int i = 1; i <= k; ++i) {
    order.offsets.push_back(static_cast<int>(order.labels.size()) + 1);
    order.labels.push_back(FamilyLabel::singleton(i));
    for (int j = k; j > i; --j) order.labels.push_back(FamilyLabel{i, j});
  }
  return order;
}

FamilyLabel sigma_apply(int k, const FamilyLabel& label) {
  if (label.is_singleton()) return FamilyLabel::singleton(label.i == 1 ? k : label.i - 1);
  if (label.i == 1) return FamilyLabel::pair(label.j - 1, k);
  return FamilyLabel{label.i - 1, label.j - 1};
}

FamilyLabel sigma_inverse(int k, const FamilyLabel& label) {
  if (label.is_singleton()) return FamilyLabel::singleton(label.i == k ? 1 : label.i + 1);
  if (label.j == k) return FamilyLabel::pair(1, label.i + 1);
  return FamilyLabel{label.i + 1, label.j + 1};
}

FamilyLabel sigma_power(int k, const FamilyLabel& label, int l) {
  const int steps = ((l % k) + k) % k;
  FamilyLabel out = label;
  for (int s = 0; s < steps; ++s) out = sigma_apply(k, out);
  return out;
}

std::vector<FamilyLabel> sigma_power_order(int k, int l) {
  std::vector<FamilyLabel> out;
  for (const auto& label : family_indexing(k).labels) out.push_back(sigma_power(k, label, -l));
  return out;
}

std::vector<std::vector<FamilyLabel>> sigma_power_blocks(int k, int l) {
  if (k < 2 || l < 0 || l >= k) throw ConfigError("sigma_power_blocks needs k >= 2 and 0 <= l < k");
  std::vector<std::vector<FamilyLabel>> blocks;
  for (int i = 1; i <= k; ++i) {
    std::vector<FamilyLabel> block;
    if (i <= k - l) {
      const int m = l + i;
      block.push_back(FamilyLabel::singleton(m));
      for (int h = l; h >= 1; --h) block.push_back(FamilyLabel{h, m});
      for (int j = k; j > m; --j) block.push_back(FamilyLabel{m, j});
    } else {
      const int m = l + i - k;
      block.push_back(FamilyLabel::singleton(m));
      for (int j = l; j > m; --j) block.push_back(FamilyLabel{m, j});
    }
    blocks.push_back(std::move(block));
  }
  return blocks;
}

std::vector<std::vector<FamilyLabel>> split_blocks(const std::vector<FamilyLabel>& ordering) {
  std::vector<std::vector<FamilyLabel>> blocks;
  for (const auto& label : ordering) {
    if (label.is_singleton() || blocks.empty()) blocks.emplace_back();
    blocks.back().push_back(label);
  }
  return blocks;
}

std::vector<std::string> label_strings(const std::vector<FamilyLabel>& labels) {
  std::vector<std::string> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(l.to_string());
  return out;
}

BigInt crt_solve(const std::vector<std::pair<BigInt, BigInt>>& residues, const BigInt& lower_bound) {
  if (lower_bound < 0) throw ConfigError("crt: lower bound must be >= 0");
  BigInt x = 0;
  BigInt modulus = 1;
  for (const auto& [r, m] : residues) {
    if (m < 1) throw ConfigError("crt: moduli must be positive");
    if (m == 1) continue;
    BigInt g = gcd(modulus, m);
    if (g != 1) {
      throw ModuliNotCoprime("crt: modulus " + to_decimal(m) + " shares the factor " + to_decimal(g) +
                                 " with earlier moduli",
                             to_decimal(g));
    }
    BigInt inv;
    mpz_invert(inv.get_mpz_t(), modulus.get_mpz_t(), m.get_mpz_t());
    BigInt u = (r - x) * inv;
    mpz_fdiv_r(u.get_mpz_t(), u.get_mpz_t(), m.get_mpz_t());
    x += modulus * u;
    modulus *= m;
  }
  if (x < lower_bound) {
    BigInt steps = lower_bound - x + modulus - 1;
    mpz_fdiv_q(steps.get_mpz_t(), steps.get_mpz_t(), modulus.get_mpz_t());
    x += steps * modulus;
  }
  return x;
}

ConstructionState ConstructionState::seed(int k, unsigned long growth_base) {
  if (k < 2) throw ConfigError("construction needs k >= 2");
  if (growth_base < 2) throw ConfigError("growth base must be >= 2");
  ConstructionState s;
  s.k = k;
  s.growth_base = growth_base;
  for (long i = -k; i < 0; ++i) s.t[i] = 0;
  for (long i = 0; i < k; ++i) s.t[i] = 1;
  s.a_singleton.assign(static_cast<std::size_t>(k), std::vector<BigInt>{BigInt(0)});
  for (int i = 1; i <= k; ++i) {
    for (int j = i + 1; j <= k; ++j) s.a_pair[{i, j}] = {BigInt(0), BigInt(1)};
  }
  return s;
}

const BigInt& ConstructionState::t_at(long s) const {
  auto it = t.find(s);
  if (it == t.end()) throw InsufficientRounds("t_" + std::to_string(s) + " has not been constructed");
  return it->second;
}

namespace {

BigInt exact_quotient(const BigInt& num, const BigInt& den, const std::string& what) {
  BigInt q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (r != 0) throw NonIntegerQuotient(what + ": division leaves remainder " + to_decimal(r));
  if (q < 1) throw NonIntegerQuotient(what + ": partial quotient " + to_decimal(q) + " is not positive");
  return q;
}

}  // namespace

ConstructionState construct_round(const ConstructionState& state) {
  ConstructionState next = state;
  const long k = next.k;
  const long nu = next.round + 1;
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), next.growth_base, static_cast<unsigned long>(nu));

  for (long l = 0; l < k; ++l) {
    const long s = k * (nu - 1) + l;
    const std::string where = "round " + std::to_string(nu) + ", l=" + std::to_string(l);
    std::vector<std::pair<BigInt, BigInt>> residues;
    residues.emplace_back(next.t_at(s - k), next.t_at(s));
    for (long j = 1; j < k; ++j) residues.emplace_back(next.t_at(s), next.t_at(s + j));
    BigInt modulus = 1;
    for (const auto& r : residues) modulus *= r.second;
    const BigInt x = crt_solve(residues, scale * modulus);

    for (long j = 1; j <= k; ++j) {
      BigInt g = gcd(x, next.t_at(s + k - j));
      if (g != 1) {
        throw ModuliNotCoprime(where + ": t_" + std::to_string(s + k) + " and t_" + std::to_string(s + k - j) +
                                   " share the factor " + to_decimal(g),
                               to_decimal(g));
      }
    }
    const BigInt& prev = next.t_at(s + k - 1);
    if (x <= BigInt(static_cast<unsigned long>(nu)) * prev) {
      throw GrowthScheduleUnsatisfiable(where + ": t_{s+1}/t_s does not exceed " + std::to_string(nu));
    }
    if (s + k - 2 >= 0 && x * next.t_at(s + k - 2) < prev * prev) {
      throw GrowthScheduleUnsatisfiable(where + ": ratio t_{s+1}/t_s decreased");
    }
    // (t_{k nu+l} / t_{k nu+l-1}) (t_{k(nu-1)+l-1} / t_{k(nu-1)+l}) > nu
    if (l >= 1 && x * next.t_at(s - 1) <= BigInt(static_cast<unsigned long>(nu)) * prev * next.t_at(s)) {
      throw GrowthScheduleUnsatisfiable(where + ": double ratio does not exceed " + std::to_string(nu));
    }
    next.t[s + k] = x;

    next.a_singleton[static_cast<std::size_t>(l)].push_back(
        exact_quotient(x - next.t_at(s - k), next.t_at(s), where + ", singleton"));
    for (long j = l + 1; j <= k - 1; ++j) {
      auto& a = next.a_pair.at({static_cast<int>(l + 1), static_cast<int>(j + 1)});
      a.push_back(exact_quotient(x - next.t_at(s), next.t_at(k * (nu - 1) + j), where + ", even pair quotient"));
    }
    for (long i = 1; i <= l; ++i) {
      auto& a = next.a_pair.at({static_cast<int>(i), static_cast<int>(l + 1)});
      a.push_back(exact_quotient(x - next.t_at(s), next.t_at(k * nu + i - 1), where + ", odd pair quotient"));
    }
  }
  next.round = static_cast<int>(nu);
  return next;
}

void advance(ConstructionState& state, int rounds) {
  for (int r = 0; r < rounds; ++r) state = construct_round(state);
}

nlohmann::ordered_json state_to_json(const ConstructionState& state) {
  nlohmann::ordered_json j;
  j["k"] = state.k;
  j["round"] = state.round;
  nlohmann::ordered_json t = nlohmann::ordered_json::object();
  for (const auto& [s, v] : state.t) t[std::to_string(s)] = to_decimal(v);
  j["t"] = std::move(t);
  auto dec_list = [](const std::vector<BigInt>& xs) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& x : xs) arr.push_back(to_decimal(x));
    return arr;
  };
  nlohmann::ordered_json singles = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < state.a_singleton.size(); ++i) singles[std::to_string(i + 1)] = dec_list(state.a_singleton[i]);
  j["a_singleton"] = std::move(singles);
  nlohmann::ordered_json pairs = nlohmann::ordered_json::object();
  for (const auto& [key, xs] : state.a_pair) pairs[std::to_string(key.first) + "," + std::to_string(key.second)] = dec_list(xs);
  j["a_pair"] = std::move(pairs);
  j["growth"] = {{"base", state.growth_base}};
  return j;
}

namespace {

BigInt json_decimal(const nlohmann::json& v, const std::string& where) {
  if (!v.is_string()) throw ConfigError("state file: " + where + " must be a decimal string");
  try {
    return parse_decimal(v.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError("state file: " + where + ": " + e.what());
  }
}

std::vector<BigInt> json_decimal_list(const nlohmann::json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError("state file: " + where + " must be an array");
  std::vector<BigInt> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(json_decimal(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace

ConstructionState state_from_json(const nlohmann::json& j) {
  static const std::set<std::string> allowed{"k", "round", "t", "a_singleton", "a_pair", "growth"};
  if (!j.is_object()) throw ConfigError("state file: top level must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError("state file: unknown field '" + key + "'");
  }
  for (const auto& key : allowed) {
    if (!j.contains(key)) throw ConfigError("state file: missing field '" + key + "'");
  }
  if (!j["k"].is_number_integer() || !j["round"].is_number_integer()) {
    throw ConfigError("state file: k and round must be integers");
  }
  const auto& growth = j["growth"];
  if (!growth.is_object() || growth.size() != 1 || !growth.contains("base") ||
      !growth["base"].is_number_unsigned()) {
    throw ConfigError("state file: growth must be {\"base\": <unsigned>}");
  }
  ConstructionState s = ConstructionState::seed(j["k"].get<int>(), growth["base"].get<unsigned long>());
  s.round = j["round"].get<int>();
  if (s.round < 0) throw ConfigError("state file: round must be >= 0");
  const long k = s.k;

  const auto& t = j["t"];
  if (!t.is_object()) throw ConfigError("state file: t must be an object");
  s.t.clear();
  for (const auto& [key, value] : t.items()) {
    long idx = 0;
    try {
      std::size_t used = 0;
      idx = std::stol(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::logic_error&) {
      throw ConfigError("state file: bad t index '" + key + "'");
    }
    s.t[idx] = json_decimal(value, "t[" + key + "]");
  }
  const long expected = k * (s.round + 1) + k;
  if (static_cast<long>(s.t.size()) != expected || s.t.begin()->first != -k ||
      s.t.rbegin()->first != k * (s.round + 1) - 1) {
    throw ConfigError("state file: t must hold exactly t_{-k} .. t_{k(round+1)-1}");
  }

  const auto& singles = j["a_singleton"];
  if (!singles.is_object() || static_cast<long>(singles.size()) != k) {
    throw ConfigError("state file: a_singleton must have one entry per singleton");
  }
  for (long i = 1; i <= k; ++i) {
    const std::string key = std::to_string(i);
    if (!singles.contains(key)) throw ConfigError("state file: a_singleton lacks '" + key + "'");
    auto xs = json_decimal_list(singles[key], "a_singleton[" + key + "]");
    if (static_cast<long>(xs.size()) != s.round + 1) throw ConfigError("state file: a_singleton[" + key + "] has wrong length");
    s.a_singleton[static_cast<std::size_t>(i - 1)] = std::move(xs);
  }
  const auto& pairs = j["a_pair"];
  if (!pairs.is_object() || pairs.size() != s.a_pair.size()) {
    throw ConfigError("state file: a_pair must have one entry per pair");
  }
  for (auto& [key, xs] : s.a_pair) {
    const std::string name = std::to_string(key.first) + "," + std::to_string(key.second);
    if (!pairs.contains(name)) throw ConfigError("state file: a_pair lacks '" + name + "'");
    xs = json_decimal_list(pairs[name], "a_pair[" + name + "]");
    if (static_cast<long>(xs.size()) != 2L * s.round + 2) throw ConfigError("state file: a_pair[" + name + "] has wrong length");
  }
  return s;
}

LabeledTuple emit_tuple(const ConstructionState& state) {
  if (state.round < 2) {
    throw InsufficientRounds("emit_tuple needs at least 2 completed rounds, have " + std::to_string(state.round));
  }
  std::vector<TupleMember> members;
  for (const auto& label : family_indexing(state.k).labels) {
    const auto& a = label.is_singleton() ? state.a_singleton.at(static_cast<std::size_t>(label.i - 1))
                                         : state.a_pair.at({label.i, label.j});
    std::vector<BigInt> quotients(a.begin() + 1, a.end());
    const std::string name = label.to_string();
    members.push_back(TupleMember{name, ContinuedFraction::prefix(a.front(), std::move(quotients), name)});
  }
  return LabeledTuple(std::move(members));
}

std::string check_denominators(const ConstructionState& state) {
  const long k = state.k;
  const long rounds = state.round;
  auto mismatch = [](const std::string& label, long m, const BigInt& got, long s) {
    return label + ": q_" + std::to_string(m) + " = " + to_decimal(got) + " differs from t_" + std::to_string(s);
  };
  for (long i = 1; i <= k; ++i) {
    const auto& a = state.a_singleton[static_cast<std::size_t>(i - 1)];
    const auto q = convergents(ContinuedFraction::prefix(a.front(), {a.begin() + 1, a.end()}), a.size());
    for (long nu = 0; nu <= rounds; ++nu) {
      const long s = k * nu + i - 1;
      if (q[static_cast<std::size_t>(nu)].q != state.t_at(s)) return mismatch("{" + std::to_string(i) + "}", nu, q[nu].q, s);
    }
  }
  for (const auto& [key, a] : state.a_pair) {
    const auto q = convergents(ContinuedFraction::prefix(a.front(), {a.begin() + 1, a.end()}), a.size());
    const std::string label = "{" + std::to_string(key.first) + "," + std::to_string(key.second) + "}";
    for (long nu = 0; nu <= rounds; ++nu) {
      const long even = k * nu + key.first - 1;
      const long odd = k * nu + key.second - 1;
      if (q[2 * nu].q != state.t_at(even)) return mismatch(label, 2 * nu, q[2 * nu].q, even);
      if (q[2 * nu + 1].q != state.t_at(odd)) return mismatch(label, 2 * nu + 1, q[2 * nu + 1].q, odd);
    }
  }
  return {};
}

VerifyReport verify_construction(const ConstructionState& state, int burn_in_rounds, TraceOptions options) {
  if (burn_in_rounds < 0) throw ConfigError("burn-in rounds must be >= 0");
  const long k = state.k;
  const long rounds = state.round;
  if (rounds < burn_in_rounds + 2) {
    throw EmptyWindow("verify: " + std::to_string(rounds) + " rounds leave no window after a burn-in of " +
                      std::to_string(burn_in_rounds) + " rounds (need burn-in + 2)");
  }
  VerifyReport report;
  report.k = state.k;
  report.rounds = state.round;
  report.burn_in_rounds = burn_in_rounds;

  report.tk_detail = check_denominators(state);
  report.tk_ok = report.tk_detail.empty();

  const LabeledTuple tuple = emit_tuple(state);
  report.t_min = state.t_at(k * burn_in_rounds);
  report.t_max = state.t_at(k * (rounds - 1)) - 1;
  const PermutationTrace trace = sigma_trace(tuple, report.t_min, report.t_max, options);
  report.events = trace.events.size();

  std::vector<Ordering> expected;
  for (int l = 0; l < state.k; ++l) expected.push_back(label_strings(sigma_power_order(state.k, l)));
  std::vector<std::size_t> counts(expected.size(), 0);
  for (const auto& e : trace.events) {
    auto it = std::find(expected.begin(), expected.end(), e.sigma);
    if (it == expected.end()) {
      // The ordering predicted on [t_{s-1}, t_s) is Sigma^{s mod k}(A_k).
      long s = 0;
      while (state.t_at(s) <= e.t_from) ++s;
      const auto& predicted = expected[static_cast<std::size_t>(s % k)];
      std::string got, want;
      for (const auto& x : e.sigma) got += x + " ";
      for (const auto& x : predicted) want += x + " ";
      throw OrderingMismatch("ordering at t=" + to_decimal(e.t_from) + " is " + got + "but expected " + want);
    }
    ++counts[static_cast<std::size_t>(it - expected.begin())];
  }
  report.all_residues = true;
  for (int l = 0; l < state.k; ++l) {
    if (counts[static_cast<std::size_t>(l)] > 0) {
      report.orderings.push_back(ForgeOrderingCount{l, counts[static_cast<std::size_t>(l)]});
    } else {
      report.all_residues = false;
    }
  }

  // Chains at t = t_{k nu} - 1.
  std::vector<PsiFunction> psi;
  psi.reserve(tuple.size());
  for (const auto& m : tuple.members()) psi.emplace_back(m.cf);
  const FamilyOrder order = family_indexing(state.k);
  auto position = [&](const FamilyLabel& label) {
    return static_cast<std::size_t>(std::find(order.labels.begin(), order.labels.end(), label) - order.labels.begin());
  };
  for (long nu = burn_in_rounds + 1; nu <= rounds - 1; ++nu) {
    const BigInt t = state.t_at(k * nu) - 1;
    auto greater = [&](const FamilyLabel& x, const FamilyLabel& y) {
      const ErrorValue& vx = psi[position(x)].eval(t);
      const ErrorValue& vy = psi[position(y)].eval(t);
      try {
        return compare_error(vx, vy, options.max_depth) == Order::Greater;
      } catch (const CannotSeparate&) {
        throw TieDetected(to_decimal(t), x.to_string(), y.to_string());
      }
    };
    for (std::size_t m = 0; m + 1 < order.labels.size(); ++m) {
      if (!greater(order.labels[m], order.labels[m + 1])) {
        throw OrderingMismatch("chain broken at t=" + to_decimal(t) + ": psi" + order.labels[m].to_string() +
                               " < psi" + order.labels[m + 1].to_string());
      }
    }
    ++report.checkpoints;
    for (int i = 1; i <= state.k; ++i) {
      std::vector<std::pair<FamilyLabel, FamilyLabel>> checks;
      if (i < state.k) {
        checks.emplace_back(FamilyLabel::singleton(i), FamilyLabel{i, state.k});
        checks.emplace_back(FamilyLabel{i, i + 1}, FamilyLabel::singleton(i + 1));
      }
      for (int j = i + 2; j <= state.k; ++j) checks.emplace_back(FamilyLabel{i, j}, FamilyLabel{i, j - 1});
      for (const auto& [x, y] : checks) {
        if (!greater(x, y)) {
          throw OrderingMismatch("at t=" + to_decimal(t) + ": psi" + x.to_string() + " > psi" + y.to_string() +
                                 " fails");
        }
        ++report.zw_checks;
      }
    }
  }
  return report;
}

nlohmann::ordered_json verify_report_to_json(const VerifyReport& report) {
  nlohmann::ordered_json j;
  j["k"] = report.k;
  j["rounds"] = report.rounds;
  j["burn_in_rounds"] = report.burn_in_rounds;
  j["t_min"] = to_decimal(report.t_min);
  j["t_max"] = to_decimal(report.t_max);
  j["events"] = report.events;
  nlohmann::ordered_json ords = nlohmann::ordered_json::array();
  for (const auto& o : report.orderings) {
    ords.push_back({{"l", o.l}, {"events", o.events}, {"sigma", label_strings(sigma_power_order(report.k, o.l))}});
  }
  j["orderings"] = std::move(ords);
  j["distinct_orderings"] = report.orderings.size();
  j["all_residues"] = report.all_residues;
  j["checkpoints"] = report.checkpoints;
  j["zw_checks"] = report.zw_checks;
  j["tk_ok"] = report.tk_ok;
  if (!report.tk_ok) j["tk_detail"] = report.tk_detail;
  j["status"] = report.passed() ? "PASS" : "FAIL";
  return j;
}

}  // namespace psiperm
