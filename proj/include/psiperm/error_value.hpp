#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "psiperm/bigint.hpp"
#include "psiperm/continued_fraction.hpp"

namespace psiperm {

inline constexpr std::size_t kDefaultMaxDepth = 64;

enum class Order { Less, Greater };
enum class Equality { Equal, Unequal, Unknown };

// a x^2 + b x + c, primitive, a > 0.
struct QuadraticPoly {
  BigInt a;
  BigInt b;
  BigInt c;
  bool operator==(const QuadraticPoly&) const = default;
};

// The approximation error xi_nu = |q_nu alpha - p_nu| = 1 / (q_nu alpha_{nu+1} + q_{nu-1}).
//
// The value is enclosed in [lo, hi] built from the two truncations
// [b_0; ..., b_{d-1}] and [b_0; ..., b_{d-1} + 1] of the tail alpha_{nu+1}.
// Unless exact() the value lies strictly inside. Refinement only tightens the
// enclosure, so the cached state is mutable behind a const interface; share an
// ErrorValue across threads only with external serialization.
class ErrorValue {
 public:
  // tail is alpha_{nu+1}; std::nullopt encodes xi_nu = 0 (a rational that ends at nu).
  ErrorValue(BigInt q, BigInt q_prev, std::optional<ContinuedFraction> tail);

  const BigInt& q() const noexcept { return q_; }
  const BigInt& q_prev() const noexcept { return q_prev_; }
  const std::optional<ContinuedFraction>& tail() const noexcept { return tail_; }

  const Rational& lo() const noexcept { return lo_; }
  const Rational& hi() const noexcept { return hi_; }
  bool exact() const noexcept { return exact_; }
  std::size_t depth() const noexcept { return depth_; }

  // One more tail quotient. False when exact or the stream has no more data.
  bool refine() const;
  void refine_to(std::size_t depth) const;

  // Closed containment lo <= x <= hi.
  bool contains(const Rational& x) const;

  // Minimal polynomial of the value when the tail is eventually periodic.
  std::optional<QuadraticPoly> minimal_polynomial() const;

  std::string describe() const;

 private:
  void update_bounds() const;

  BigInt q_;
  BigInt q_prev_;
  std::optional<ContinuedFraction> tail_;

  mutable std::size_t depth_ = 0;
  // Convergents P_{d-1}/Q_{d-1} and P_{d-2}/Q_{d-2} of the tail.
  mutable BigInt p1_ = 1, p2_ = 0, q1_ = 0, q2_ = 1;
  mutable Rational lo_;
  mutable Rational hi_;
  mutable bool exact_ = false;
  mutable bool exhausted_ = false;
};

// xi_nu of cf at index nu, with its a-priori enclosure (1/(q_nu+q_{nu+1}), 1/q_{nu+1}).
ErrorValue xi(const ContinuedFraction& cf, std::size_t nu);

// Refines x and y alternately until their enclosures are disjoint. Throws
// CannotSeparate when both reach max_depth (or run out of data) first, which
// is what equal values always do.
Order compare_error(const ErrorValue& x, const ErrorValue& y, std::size_t max_depth = kDefaultMaxDepth);

// Exact equality where decidable: identical data, exact rationals, or
// eventually periodic tails (via the minimal polynomial).
Equality prove_equal(const ErrorValue& x, const ErrorValue& y, std::size_t max_depth = kDefaultMaxDepth);

// True when both values are built from the same q, q_prev and tail stream.
bool structurally_equal(const ErrorValue& x, const ErrorValue& y);

}  // namespace psiperm
