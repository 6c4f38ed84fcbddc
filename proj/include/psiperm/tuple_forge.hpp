#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "psiperm/bigint.hpp"
#include "psiperm/error_value.hpp"
#include "psiperm/perm_dynamics.hpp"

namespace psiperm {

// {i} when j == 0, otherwise {i, j} with 1 <= i < j <= k.
struct FamilyLabel {
  int i = 1;
  int j = 0;

  static FamilyLabel singleton(int i) { return FamilyLabel{i, 0}; }
  static FamilyLabel pair(int i, int j);
  bool is_singleton() const noexcept { return j == 0; }
  std::string to_string() const;
  // Parses "{3}" or "{1,3}".
  static FamilyLabel parse(const std::string& text);
  auto operator<=>(const FamilyLabel&) const = default;
};

struct FamilyOrder {
  int k = 0;
  std::vector<FamilyLabel> labels;  // n = k(k+1)/2 entries
  std::vector<int> offsets;         // w_1..w_k, 1-based positions of {i}
};

// {1},{1,k},...,{1,2}; {2},{2,k},...,{2,3}; ...; {k}.
FamilyOrder family_indexing(int k);

FamilyLabel sigma_apply(int k, const FamilyLabel& label);
FamilyLabel sigma_inverse(int k, const FamilyLabel& label);
FamilyLabel sigma_power(int k, const FamilyLabel& label, int l);

// Sigma^l acting on the ordering A_k: the ordering whose element-wise
// Sigma^l image is A_k, i.e. Sigma^{-l} applied to each entry.
std::vector<FamilyLabel> sigma_power_order(int k, int l);

// Blocks of Sigma^l(A_k) from the closed form: for i <= k - l
//   {l+i}, {l,l+i}, ..., {1,l+i}, {l+i,k}, ..., {l+i,l+i+1}
// and for i > k - l, with m = l+i-k,
//   {m}, {m,l}, ..., {m,m+1}.
std::vector<std::vector<FamilyLabel>> sigma_power_blocks(int k, int l);

// sigma_power_order cut at the singletons.
std::vector<std::vector<FamilyLabel>> split_blocks(const std::vector<FamilyLabel>& ordering);

std::vector<std::string> label_strings(const std::vector<FamilyLabel>& labels);

// Smallest x >= lower_bound with x = r (mod m) for every pair. Moduli must be
// positive and pairwise coprime (ModuliNotCoprime otherwise).
BigInt crt_solve(const std::vector<std::pair<BigInt, BigInt>>& residues, const BigInt& lower_bound);

struct ConstructionState {
  int k = 0;
  int round = 0;  // completed rounds
  unsigned long growth_base = 2;
  std::map<long, BigInt> t;  // s -> t_s for -k <= s < k(round + 1)
  // a_singleton[s-1][m] = a^{(s)}_m for m = 0..round.
  std::vector<std::vector<BigInt>> a_singleton;
  // a_pair[{i,j}][m] = a^{(i,j)}_m for m = 0..2 round + 1.
  std::map<std::pair<int, int>, std::vector<BigInt>> a_pair;

  static ConstructionState seed(int k, unsigned long growth_base = 2);
  const BigInt& t_at(long s) const;
  bool operator==(const ConstructionState&) const = default;
};

nlohmann::ordered_json state_to_json(const ConstructionState& state);
ConstructionState state_from_json(const nlohmann::json& j);

// One induction round nu = state.round + 1. For l = 0..k-1, with s = k(nu-1)+l,
//   x = t_{s-k} (mod t_s),  x = t_s (mod t_{s+j}) for 1 <= j <= k-1,
// x the smallest solution >= base^nu * M (M the product of the moduli), and
// t_{s+k} = x. Quotients: a^{(l+1)}_nu = (x - t_{s-k}) / t_s,
// a^{(l+1,j+1)}_{2nu} = (x - t_s) / t_{k(nu-1)+j} for l+1 <= j <= k-1 and
// a^{(i,l+1)}_{2nu+1} = (x - t_s) / t_{k nu+i-1} for 1 <= i <= l.
// Coprimality of any k+1 consecutive t, exact division and the growth
// conditions are checked on the way.
ConstructionState construct_round(const ConstructionState& state);
void advance(ConstructionState& state, int rounds);

// n prefix continued fractions [0; a_1, a_2, ...] labeled "{1}", "{1,k}", ...
// in family order. Needs at least two completed rounds.
LabeledTuple emit_tuple(const ConstructionState& state);

struct ForgeOrderingCount {
  int l = 0;  // the ordering is Sigma^l(A_k)
  std::size_t events = 0;
};

struct VerifyReport {
  int k = 0;
  int rounds = 0;
  int burn_in_rounds = 0;
  BigInt t_min;
  BigInt t_max;
  std::size_t events = 0;
  std::vector<ForgeOrderingCount> orderings;  // by l, only those seen
  bool all_residues = false;                  // every l in 0..k-1 occurs
  std::size_t checkpoints = 0;                // t = t_{k nu} - 1 chains checked
  std::size_t zw_checks = 0;                  // single inequalities spot-checked
  bool tk_ok = false;
  std::string tk_detail;
  bool passed() const noexcept { return all_residues && tk_ok; }
};

// Trace over [t_{k b}, t_{k(R-1)} - 1] with R completed rounds; every ordering
// there must be some Sigma^l(A_k) (OrderingMismatch otherwise) and all k must
// occur. At every checkpoint t_{k nu} - 1 inside the window the full chain
// psi_1 > psi_{1,k} > ... > psi_k is proven. Denominators are recomputed
// from the emitted numbers and matched against the t-sequence.
VerifyReport verify_construction(const ConstructionState& state, int burn_in_rounds, TraceOptions options = {});

// Convergent denominators of every emitted number against t_{k nu+s-1},
// t_{k nu+i-1} and t_{k nu+j-1}. Returns an empty string when all match.
std::string check_denominators(const ConstructionState& state);

nlohmann::ordered_json verify_report_to_json(const VerifyReport& report);

}  // namespace psiperm
