#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "psiperm/bigint.hpp"

namespace psiperm {

// How the partial quotients of a continued fraction are produced.
//
//   Rational  finite list; the number is exactly [a0; a1, ..., an] and the
//             last quotient is >= 2 (canonical form).
//   Prefix    finite list of the leading quotients of an irrational number;
//             reading past the list raises StreamExhausted.
//   Periodic  preperiod followed by an endlessly repeated period.
//   Random    a_j = 1 + mix(seed, j) mod bound, indexable in O(1).
enum class StreamKind { Rational, Prefix, Periodic, Random };

// Eventually periodic term sequence t_0, t_1, ... (t_0 is the integer part).
struct PeriodicForm {
  std::vector<BigInt> preperiod;
  std::vector<BigInt> period;

  // Shortest period, shortest preperiod.
  PeriodicForm canonical() const;
  bool operator==(const PeriodicForm&) const = default;
};

struct Convergent {
  std::size_t index = 0;
  BigInt p;
  BigInt q;
};

class ContinuedFraction {
 public:
  static ContinuedFraction rational(BigInt a0, std::vector<BigInt> quotients, std::string label = {});
  static ContinuedFraction from_fraction(const Rational& value, std::string label = {});
  static ContinuedFraction prefix(BigInt a0, std::vector<BigInt> quotients, std::string label = {});
  static ContinuedFraction periodic(BigInt a0, std::vector<BigInt> preperiod, std::vector<BigInt> period,
                                    std::string label = {});
  static ContinuedFraction random(BigInt a0, std::uint64_t seed, std::uint64_t bound, std::string label = {});

  const std::string& label() const noexcept { return label_; }
  ContinuedFraction relabeled(std::string label) const;

  StreamKind kind() const noexcept;
  bool is_rational() const noexcept { return kind() == StreamKind::Rational; }

  // Term j of [a0; a1, a2, ...]. std::nullopt past the end of the known data
  // (end of a rational, or end of a prefix).
  std::optional<BigInt> try_term(std::size_t j) const;
  // Throws StreamExhausted where try_term gives nullopt.
  BigInt term(std::size_t j) const;

  // Number of partial quotients after the integer part, if the data is finite.
  std::optional<std::size_t> known_quotients() const;

  // alpha_nu = [a_nu; a_{nu+1}, ...]. tail(0) is the number itself.
  ContinuedFraction tail(std::size_t nu) const;

  // Term sequence as preperiod + period, for Periodic streams only.
  std::optional<PeriodicForm> periodic_form() const;

  // True only when both term sequences are provably identical.
  bool same_stream(const ContinuedFraction& other) const;

 private:
  struct FiniteSource {
    std::vector<BigInt> quotients;  // a_1, a_2, ...
    bool exact = false;             // Rational when true, Prefix otherwise
  };
  struct PeriodicSource {
    std::vector<BigInt> preperiod;
    std::vector<BigInt> period;
  };
  struct RandomSource {
    std::uint64_t seed = 0;
    std::uint64_t bound = 1;
  };
  using Source = std::variant<FiniteSource, PeriodicSource, RandomSource>;

  ContinuedFraction(BigInt a0, std::shared_ptr<const Source> source, std::size_t offset, std::string label);

  // Quotient a_i of the underlying source, i >= 1.
  std::optional<BigInt> source_quotient(std::size_t i) const;

  BigInt a0_;
  std::shared_ptr<const Source> source_;
  std::size_t offset_ = 0;
  std::string label_;
};

// p_nu / q_nu for nu = 0 .. count-1.
std::vector<Convergent> convergents(const ContinuedFraction& cf, std::size_t count);

// q_{nu-1} / q_nu, which equals [0; a_nu, ..., a_1].
Rational alpha_star(const ContinuedFraction& cf, std::size_t nu);

// [0; a_nu, a_{nu-1}, ..., a_1] evaluated by folding from the right.
Rational reversed_value(const ContinuedFraction& cf, std::size_t nu);

ContinuedFraction tail(const ContinuedFraction& cf, std::size_t nu);

// Exact value of a finite continued fraction [a0; a1, ..., an].
Rational finite_value(const BigInt& a0, const std::vector<BigInt>& quotients);

}  // namespace psiperm
