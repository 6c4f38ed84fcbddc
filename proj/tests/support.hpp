#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "psiperm/bigint.hpp"
#include "psiperm/continued_fraction.hpp"

namespace psiperm::testing {

inline std::vector<BigInt> ints(std::initializer_list<long> xs) {
  std::vector<BigInt> out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

inline ContinuedFraction golden() { return ContinuedFraction::periodic(0, {}, ints({1}), "golden"); }
inline ContinuedFraction silver() { return ContinuedFraction::periodic(0, {}, ints({2}), "silver"); }

// Quotients in [1, bound], reproducible from the seed.
inline std::vector<BigInt> random_quotients(std::mt19937_64& rng, std::size_t n, unsigned bound) {
  std::uniform_int_distribution<unsigned> pick(1, bound);
  std::vector<BigInt> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(pick(rng));
  return out;
}

inline ContinuedFraction random_prefix(std::mt19937_64& rng, std::size_t n, unsigned bound, std::string label = {}) {
  return ContinuedFraction::prefix(0, random_quotients(rng, n, bound), std::move(label));
}

inline ContinuedFraction random_periodic(std::mt19937_64& rng, unsigned max_len, unsigned bound,
                                         std::string label = {}) {
  std::uniform_int_distribution<unsigned> len(1, max_len);
  auto pre = random_quotients(rng, len(rng) - 1, bound);
  auto per = random_quotients(rng, len(rng), bound);
  return ContinuedFraction::periodic(0, std::move(pre), std::move(per), std::move(label));
}

// 1 - alpha for a periodic alpha = [0; a_1, a_2, ...] in (0, 1), written as
// [0; 1, a_1 - 1, a_2, ...] or, when a_1 = 1, as [0; a_2 + 1, a_3, ...].
inline ContinuedFraction complement(const ContinuedFraction& cf) {
  const PeriodicForm form = *cf.periodic_form();
  const auto& pre = form.preperiod;  // pre[0] is a_0 = 0
  const auto& per = form.period;
  auto at = [&](std::size_t i) { return i < pre.size() ? pre[i] : per[(i - pre.size()) % per.size()]; };
  std::vector<BigInt> head;
  std::size_t next = 0;
  if (at(1) >= 2) {
    head = {BigInt(1), at(1) - 1};
    next = 2;
  } else {
    head = {at(2) + 1};
    next = 3;
  }
  while (next < pre.size() || (next - pre.size()) % per.size() != 0) head.push_back(at(next++));
  return ContinuedFraction::periodic(0, std::move(head), per, cf.label() + "'");
}

}  // namespace psiperm::testing
