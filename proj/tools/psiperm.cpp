// psiperm: psi functions, permutation traces, lemma scans and the tuple construction.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "psiperm/errors.hpp"
#include "psiperm/io_util.hpp"
#include "psiperm/lemma_oracles.hpp"
#include "psiperm/number_spec.hpp"
#include "psiperm/perm_dynamics.hpp"
#include "psiperm/psi_function.hpp"
#include "psiperm/tuple_forge.hpp"

namespace fs = std::filesystem;
using namespace psiperm;

namespace {

struct Globals {
  std::optional<std::size_t> depth;
  std::size_t d_max = 6;
  std::optional<std::string> burn_in;
  std::string out;
  std::optional<std::string> format;
};

std::size_t comparison_depth() {
  const char* env = std::getenv("PSIPERM_MAX_DEPTH");
  if (!env || !*env) return kDefaultMaxDepth;
  const BigInt v = [&] {
    try {
      return parse_decimal(env);
    } catch (const std::invalid_argument&) {
      throw ConfigError(std::string("PSIPERM_MAX_DEPTH must be a positive integer, got '") + env + "'");
    }
  }();
  if (v < 1 || v > 1000000) throw ConfigError("PSIPERM_MAX_DEPTH must lie in [1, 1000000]");
  return v.get_ui();
}

TraceOptions trace_options() { return TraceOptions{comparison_depth()}; }

std::string format_of(const Globals& g, const std::string& fallback) {
  const std::string f = g.format.value_or(fallback);
  if (f != "json" && f != "csv") throw ConfigError("--format must be json or csv");
  return f;
}

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    std::cout.flush();
  } else {
    atomic_write(g.out, text);
  }
}

BigInt big_arg(const std::string& text, const char* name) {
  try {
    return parse_decimal(text);
  } catch (const std::invalid_argument&) {
    throw ConfigError(std::string(name) + " must be a decimal integer, got '" + text + "'");
  }
}

double burn_in_fraction(const Globals& g) {
  if (!g.burn_in) return 0.5;
  try {
    std::size_t used = 0;
    const double v = std::stod(*g.burn_in, &used);
    if (used != g.burn_in->size()) throw std::invalid_argument(*g.burn_in);
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("--burn-in must be a number, got '" + *g.burn_in + "'");
  }
}

int burn_in_rounds(const Globals& g) {
  if (!g.burn_in) return 2;
  try {
    std::size_t used = 0;
    const int v = std::stoi(*g.burn_in, &used);
    if (used != g.burn_in->size() || v < 0) throw std::invalid_argument(*g.burn_in);
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("--burn-in for verify must be a whole number of rounds, got '" + *g.burn_in + "'");
  }
}

std::vector<ContinuedFraction> numbers_from(const std::string& path) { return load_numbers(path); }

ContinuedFraction single_number(const std::string& path) {
  auto numbers = numbers_from(path);
  if (numbers.size() != 1) throw ConfigError(path + ": expected exactly one number");
  return numbers.front();
}

std::pair<ContinuedFraction, ContinuedFraction> number_pair(const std::string& path) {
  auto numbers = numbers_from(path);
  if (numbers.size() != 2) throw ConfigError(path + ": expected exactly two numbers");
  return {numbers[0], numbers[1]};
}

// Window from --t-min/--t-max, or up to depth convergents of every member.
std::pair<BigInt, BigInt> window(const LabeledTuple& tuple, const std::string& t_min, const std::string& t_max,
                                 const Globals& g) {
  const BigInt lo = t_min.empty() ? first_common_t(tuple) : big_arg(t_min, "--t-min");
  BigInt hi;
  if (!t_max.empty()) {
    hi = big_arg(t_max, "--t-max");
  } else if (g.depth) {
    hi = depth_window(tuple, *g.depth);
  } else {
    throw ConfigError("give --t-max or --depth for the window end");
  }
  if (lo >= hi) throw ConfigError("window needs t_min < t_max, got [" + to_decimal(lo) + ", " + to_decimal(hi) + "]");
  return {lo, hi};
}

int cmd_expand(const Globals& g, const std::string& spec, std::size_t count) {
  if (count < 1) throw ConfigError("-n must be >= 1");
  const std::string fmt = format_of(g, "csv");
  std::ostringstream out;
  nlohmann::ordered_json all = nlohmann::ordered_json::array();
  if (fmt == "csv") out << "label,nu,a,p,q\n";
  for (const auto& cf : numbers_from(spec)) {
    const auto conv = convergents(cf, count);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& c : conv) {
      if (fmt == "csv") {
        out << csv_field(cf.label()) << ',' << c.index << ',' << to_decimal(cf.term(c.index)) << ','
            << to_decimal(c.p) << ',' << to_decimal(c.q) << '\n';
      } else {
        rows.push_back({{"nu", c.index}, {"a", to_decimal(cf.term(c.index))}, {"p", to_decimal(c.p)},
                        {"q", to_decimal(c.q)}});
      }
    }
    if (fmt == "json") all.push_back({{"label", cf.label()}, {"convergents", std::move(rows)}});
  }
  if (fmt == "json") out << all.dump(2) << '\n';
  emit(g, out.str());
  return 0;
}

int cmd_psi(const Globals& g, const std::string& spec, const std::string& t, const std::string& t_max) {
  if (t.empty() == t_max.empty()) throw ConfigError("psi needs exactly one of --t or --t-max");
  PsiFunction f(single_number(spec));
  std::ostringstream out;
  if (!t.empty()) {
    const BigInt at = big_arg(t, "--t");
    const std::size_t nu = f.index_at(at);
    const ErrorValue& x = f.xi_at(nu);
    nlohmann::ordered_json j{{"label", f.label()}, {"t", to_decimal(at)},        {"nu", nu},
                             {"q_nu", to_decimal(f.denominator(nu))},           {"xi_lo", to_fraction_string(x.lo())},
                             {"xi_hi", to_fraction_string(x.hi())},             {"exact", x.exact()}};
    out << j.dump(2) << '\n';
    emit(g, out.str());
    return 0;
  }
  const BigInt hi = big_arg(t_max, "--t-max");
  if (format_of(g, "csv") == "csv") {
    write_step_csv(f, hi, out);
  } else {
    nlohmann::ordered_json jumps = nlohmann::ordered_json::array();
    for (const auto& jp : jump_points(f, hi)) {
      jumps.push_back({{"nu", jp.nu},
                       {"q", to_decimal(jp.q)},
                       {"left", {to_fraction_string(jp.left->lo()), to_fraction_string(jp.left->hi())}},
                       {"right", {to_fraction_string(jp.right->lo()), to_fraction_string(jp.right->hi())}}});
    }
    out << nlohmann::ordered_json{{"label", f.label()}, {"jumps", std::move(jumps)}}.dump(2) << '\n';
  }
  emit(g, out.str());
  return 0;
}

int cmd_trace(const Globals& g, const std::string& spec, const std::string& t_min, const std::string& t_max,
              const std::string& steps) {
  const LabeledTuple tuple = LabeledTuple::of(numbers_from(spec));
  const auto [lo, hi] = window(tuple, t_min, t_max, g);
  std::ostringstream out;
  if (format_of(g, "json") == "json") {
    out << trace_to_json(sigma_trace(tuple, lo, hi, trace_options())).dump(2) << '\n';
  } else {
    sigma_trace(tuple, lo, hi, trace_options());
    write_tuple_steps_csv(tuple, lo, hi, out);
  }
  if (!steps.empty()) {
    std::ostringstream csv;
    write_tuple_steps_csv(tuple, lo, hi, csv);
    atomic_write(steps, csv.str());
  }
  emit(g, out.str());
  return 0;
}

int cmd_kindex(const Globals& g, const std::string& spec, const std::string& t_min, const std::string& t_max) {
  const LabeledTuple tuple = LabeledTuple::of(numbers_from(spec));
  const auto [lo, hi] = window(tuple, t_min, t_max, g);
  const PermutationTrace trace = sigma_trace(tuple, lo, hi, trace_options());
  const KIndexEstimate est = k_index_estimate(trace, burn_in_fraction(g));
  nlohmann::ordered_json ords = nlohmann::ordered_json::array();
  for (const auto& o : est.orderings) ords.push_back({{"sigma", o.sigma}, {"count", o.count}});
  nlohmann::ordered_json j{{"k", est.k()},
                           {"t_min", to_decimal(lo)},
                           {"t_max", to_decimal(hi)},
                           {"events", trace.events.size()},
                           {"first_event", est.first_event},
                           {"window_start", to_decimal(est.window_start)},
                           {"orderings", std::move(ords)}};
  emit(g, j.dump(2) + "\n");
  return 0;
}

int cmd_construct(std::optional<int> k, int rounds, const std::string& state_path,
                  unsigned long base) {
  if (rounds < 0) throw ConfigError("--rounds must be >= 0");
  ConstructionState state;
  if (fs::exists(state_path)) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_file(state_path));
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(state_path + ": " + e.what());
    }
    state = state_from_json(j);
    if (k && *k != state.k) {
      throw ConfigError("state file holds k=" + std::to_string(state.k) + ", not k=" + std::to_string(*k));
    }
  } else {
    if (!k) throw ConfigError("--k is required to start a new construction");
    state = ConstructionState::seed(*k, base);
  }
  for (int r = 0; r < rounds; ++r) {
    state = construct_round(state);
    std::cout << "round " << state.round << ":";
    for (long s = static_cast<long>(state.k) * state.round; s < static_cast<long>(state.k) * (state.round + 1); ++s) {
      std::cout << " t_" << s << " " << decimal_digits(state.t_at(s)) << "d";
    }
    std::cout << '\n';
  }
  atomic_write(state_path, state_to_json(state).dump(2) + "\n");
  return 0;
}

ConstructionState load_state(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return state_from_json(j);
}

int cmd_verify(const Globals& g, const std::string& state_path) {
  const ConstructionState state = load_state(state_path);
  const VerifyReport report = verify_construction(state, burn_in_rounds(g), trace_options());
  emit(g, verify_report_to_json(report).dump(2) + "\n");
  return report.passed() ? 0 : 4;
}

int cmd_scan_lemma(const Globals& g, const std::string& spec, bool exhaustive, std::size_t length,
                   unsigned max_quotient) {
  const std::size_t max_depth = comparison_depth();
  std::ostringstream lines;
  std::size_t violations = 0;
  nlohmann::ordered_json summary;
  if (exhaustive) {
    if (!spec.empty()) throw ConfigError("--exhaustive replaces --spec");
    const std::size_t depth = g.depth.value_or(length);
    const auto corpus = periodic_word_corpus(length, max_quotient);
    const bool keep_all = !g.out.empty();
    const CorpusScan scan = scan_hauptlemma_corpus(corpus, depth, g.d_max, max_depth, [&](const LemmaFinding& f) {
      if (keep_all || f.violation()) lines << finding_to_json(f).dump() << '\n';
    });
    violations = scan.violations();
    summary = {{"numbers", scan.numbers}, {"pairs", scan.pairs},         {"candidates", scan.candidates},
               {"held", scan.held},       {"violations", violations},   {"depth", depth},
               {"d_max", g.d_max}};
  } else {
    if (spec.empty()) throw ConfigError("scan-lemma needs --spec or --exhaustive");
    const auto [a, b] = number_pair(spec);
    const std::size_t depth = g.depth.value_or(15);
    const HauptlemmaScan scan = scan_hauptlemma(a, b, depth, g.d_max, max_depth);
    for (const auto& f : scan.findings) lines << finding_to_json(f).dump() << '\n';
    violations = scan.violations();
    summary = {{"cells", scan.cells},   {"compared", scan.compared}, {"held", scan.findings.size()},
               {"violations", violations}, {"depth", depth},        {"d_max", g.d_max}};
  }
  emit(g, lines.str());
  std::cerr << summary.dump() << '\n';
  return violations == 0 ? 0 : 4;
}

int cmd_scan_signs(const Globals& g, const std::string& spec, const std::string& t_min, const std::string& t_max) {
  const auto [a, b] = number_pair(spec);
  const LabeledTuple tuple({TupleMember{"a", a}, TupleMember{"b", b}});
  const auto [lo, hi] = window(tuple, t_min, t_max, g);
  const SignChanges sc = sign_changes(a, b, lo, hi, trace_options());
  std::ostringstream out;
  if (format_of(g, "json") == "csv") {
    out << "t_from,t_to,sign\n";
    for (const auto& iv : sc.intervals) {
      out << to_decimal(iv.t_from) << ',' << (iv.t_to ? to_decimal(*iv.t_to) : "") << ',' << iv.sign << '\n';
    }
  } else {
    nlohmann::ordered_json ivs = nlohmann::ordered_json::array();
    for (const auto& iv : sc.intervals) {
      ivs.push_back({{"t_from", to_decimal(iv.t_from)},
                     {"t_to", iv.t_to ? nlohmann::ordered_json(to_decimal(*iv.t_to)) : nlohmann::ordered_json()},
                     {"sign", iv.sign}});
    }
    out << nlohmann::ordered_json{{"a", a.label()},
                                  {"b", b.label()},
                                  {"t_min", to_decimal(lo)},
                                  {"t_max", to_decimal(hi)},
                                  {"alternations", sc.alternations()},
                                  {"intervals", std::move(ivs)}}
               .dump(2)
        << '\n';
  }
  emit(g, out.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"psi functions, permutation dynamics and the k-orderings construction"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--depth", g.depth, "convergent depth (window end, lemma scan depth)");
  app.add_option("--d-max", g.d_max, "largest gap d for the lemma scan")->check(CLI::PositiveNumber);
  app.add_option("--burn-in", g.burn_in, "burn-in: event fraction for kindex, rounds for verify");
  app.add_option("--out", g.out, "output file (written atomically); stdout when absent");
  app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  std::string spec, t, t_min, t_max, steps, state_path;
  std::size_t count = 0;
  std::optional<int> k;
  int rounds = 0;
  unsigned long base = 2;
  bool exhaustive = false;
  std::size_t length = 8;
  unsigned max_quotient = 3;

  auto* expand = app.add_subcommand("expand", "convergent table");
  expand->add_option("--spec", spec, "number spec file")->required();
  expand->add_option("-n,--count", count, "number of convergents")->required();

  auto* psi = app.add_subcommand("psi", "evaluate psi or export its steps");
  psi->add_option("--spec", spec, "number spec file")->required();
  psi->add_option("--t", t, "evaluate psi(t)");
  psi->add_option("--t-max", t_max, "export steps / jump points up to t_max");

  auto* trace = app.add_subcommand("trace", "permutation trace of a tuple");
  trace->add_option("--spec", spec, "tuple spec file")->required();
  trace->add_option("--t-min", t_min);
  trace->add_option("--t-max", t_max);
  trace->add_option("--steps", steps, "also write the step-plot CSV here");

  auto* kindex = app.add_subcommand("kindex", "estimate the number of recurring orderings");
  kindex->add_option("--spec", spec, "tuple spec file")->required();
  kindex->add_option("--t-min", t_min);
  kindex->add_option("--t-max", t_max);

  auto* construct = app.add_subcommand("construct", "run rounds of the k-orderings construction");
  construct->add_option("--k", k, "family order (new state only)");
  construct->add_option("--rounds", rounds, "rounds to add")->required();
  construct->add_option("--state", state_path, "state file, resumed when present")->required();
  construct->add_option("--base", base, "growth base (new state only)");

  auto* verify = app.add_subcommand("verify", "check the predicted orderings of a constructed tuple");
  verify->add_option("--state", state_path, "state file")->required();

  auto* scan_lemma = app.add_subcommand("scan-lemma", "scan the main lemma on a pair or a corpus");
  scan_lemma->add_option("--spec", spec, "pair spec file");
  scan_lemma->add_flag("--exhaustive", exhaustive, "all periodic words of --length over {1..--max-quotient}");
  scan_lemma->add_option("--length", length, "word length for --exhaustive");
  scan_lemma->add_option("--max-quotient", max_quotient, "largest quotient for --exhaustive");

  auto* scan_signs = app.add_subcommand("scan-signs", "sign changes of psi_a - psi_b");
  scan_signs->add_option("--spec", spec, "pair spec file")->required();
  scan_signs->add_option("--t-min", t_min);
  scan_signs->add_option("--t-max", t_max);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*expand) return cmd_expand(g, spec, count);
    if (*psi) return cmd_psi(g, spec, t, t_max);
    if (*trace) return cmd_trace(g, spec, t_min, t_max, steps);
    if (*kindex) return cmd_kindex(g, spec, t_min, t_max);
    if (*construct) return cmd_construct(k, rounds, state_path, base);
    if (*verify) return cmd_verify(g, state_path);
    if (*scan_lemma) return cmd_scan_lemma(g, spec, exhaustive, length, max_quotient);
    if (*scan_signs) return cmd_scan_signs(g, spec, t_min, t_max);
  } catch (const TieDetected& e) {
    std::cerr << "tie: " << e.what() << '\n';
    return e.exit_code();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
