#include "psiperm/error_value.hpp"

#include <limits>
#include <stdexcept>

#include "psiperm/errors.hpp"

namespace psiperm {

namespace {

// Last two convergents of a finite term list, seeded with P_{-1}=1, P_{-2}=0,
// Q_{-1}=0, Q_{-2}=1.
struct Mobius {
  BigInt p1 = 1, p2 = 0, q1 = 0, q2 = 1;
};

Mobius fold(const std::vector<BigInt>& terms) {
  Mobius m;
  for (const auto& b : terms) {
    BigInt p = b * m.p1 + m.p2;
    BigInt q = b * m.q1 + m.q2;
    m.p2 = std::move(m.p1);
    m.q2 = std::move(m.q1);
    m.p1 = std::move(p);
    m.q1 = std::move(q);
  }
  return m;
}

bool proven_less(const ErrorValue& x, const ErrorValue& y) {
  const int c = cmp(x.hi(), y.lo());
  return c < 0 || (c == 0 && !(x.exact() && y.exact()));
}

// -1 / +1 when the enclosure lies strictly below / above split, 0 otherwise.
int side_of(const ErrorValue& v, const Rational& split) {
  if (v.hi() < split) return -1;
  if (v.lo() > split) return 1;
  return 0;
}

}  // namespace

ErrorValue::ErrorValue(BigInt q, BigInt q_prev, std::optional<ContinuedFraction> tail)
    : q_(std::move(q)), q_prev_(std::move(q_prev)), tail_(std::move(tail)) {
  if (!tail_) {
    exact_ = true;
    lo_ = 0;
    hi_ = 0;
    return;
  }
  if (!refine()) {
    throw StreamExhausted("error value: tail '" + tail_->label() + "' has no leading quotient");
  }
}

void ErrorValue::update_bounds() const {
  // xi as a function of the unknown remainder y = alpha_{nu+1+d} in (1, inf):
  // y -> inf gives Q1 / (q P1 + q' Q1), y -> 1 gives the mediant-like endpoint.
  Rational at_infinity(q1_, q_ * p1_ + q_prev_ * q1_);
  at_infinity.canonicalize();
  if (exact_) {
    lo_ = at_infinity;
    hi_ = at_infinity;
    return;
  }
  const BigInt qs = q1_ + q2_;
  Rational at_one(qs, q_ * (p1_ + p2_) + q_prev_ * qs);
  at_one.canonicalize();
  if (at_infinity < at_one) {
    lo_ = std::move(at_infinity);
    hi_ = std::move(at_one);
  } else {
    lo_ = std::move(at_one);
    hi_ = std::move(at_infinity);
  }
}

bool ErrorValue::refine() const {
  if (exact_ || exhausted_) return false;
  auto b = tail_->try_term(depth_);
  if (!b) {
    exhausted_ = true;
    return false;
  }
  BigInt p = *b * p1_ + p2_;
  BigInt q = *b * q1_ + q2_;
  p2_ = std::move(p1_);
  q2_ = std::move(q1_);
  p1_ = std::move(p);
  q1_ = std::move(q);
  ++depth_;
  if (tail_->is_rational() && !tail_->try_term(depth_)) exact_ = true;
  update_bounds();
  return true;
}

void ErrorValue::refine_to(std::size_t depth) const {
  while (depth_ < depth && refine()) {
  }
}

bool ErrorValue::contains(const Rational& x) const { return lo_ <= x && x <= hi_; }

std::optional<QuadraticPoly> ErrorValue::minimal_polynomial() const {
  if (!tail_) return std::nullopt;
  auto form = tail_->periodic_form();
  if (!form) return std::nullopt;
  // alpha_{nu+1} = (E g + E') / (F g + F') with g the purely periodic part,
  // and g = (P g + P') / (Q g + Q').
  const Mobius pre = fold(form->preperiod);
  const Mobius per = fold(form->period);
  const BigInt a = pre.q1;
  const BigInt b = pre.q2;
  const BigInt c = q_ * pre.p1 + q_prev_ * pre.q1;
  const BigInt d = q_ * pre.p2 + q_prev_ * pre.q2;
  const BigInt lin = per.q2 - per.p1;  // Q' - P
  QuadraticPoly poly;
  poly.a = per.q1 * d * d - lin * c * d - per.p2 * c * c;
  poly.b = -2 * per.q1 * b * d + lin * (b * c + a * d) + 2 * per.p2 * a * c;
  poly.c = per.q1 * b * b - lin * a * b - per.p2 * a * a;
  if (poly.a == 0) return std::nullopt;
  BigInt g = gcd(gcd(poly.a, poly.b), poly.c);
  if (poly.a < 0) g = -g;
  poly.a /= g;
  poly.b /= g;
  poly.c /= g;
  return poly;
}

std::string ErrorValue::describe() const {
  if (exact_) return "{" + to_fraction_string(lo_) + "} exact";
  return "[" + to_fraction_string(lo_) + ", " + to_fraction_string(hi_) + "] depth " + std::to_string(depth_);
}

ErrorValue xi(const ContinuedFraction& cf, std::size_t nu) {
  const auto conv = convergents(cf, nu + 1);
  BigInt q_prev = nu == 0 ? BigInt(0) : conv[nu - 1].q;
  if (!cf.try_term(nu + 1)) {
    if (cf.is_rational()) return ErrorValue(conv[nu].q, std::move(q_prev), std::nullopt);
    throw StreamExhausted("xi: continued fraction '" + cf.label() + "' has no partial quotient at index " +
                          std::to_string(nu + 1));
  }
  return ErrorValue(conv[nu].q, std::move(q_prev), cf.tail(nu + 1));
}

Order compare_error(const ErrorValue& x, const ErrorValue& y, std::size_t max_depth) {
  if (max_depth < 1) throw std::invalid_argument("compare_error: max_depth must be >= 1");
  for (;;) {
    if (proven_less(x, y)) return Order::Less;
    if (proven_less(y, x)) return Order::Greater;
    if (x.exact() && y.exact()) break;
    const bool moved_x = x.depth() < max_depth && x.refine();
    const bool moved_y = y.depth() < max_depth && y.refine();
    if (!moved_x && !moved_y) break;
  }
  throw CannotSeparate("cannot separate " + x.describe() + " from " + y.describe(), x.describe(), y.describe());
}

bool structurally_equal(const ErrorValue& x, const ErrorValue& y) {
  if (x.q() != y.q() || x.q_prev() != y.q_prev()) return false;
  if (!x.tail() || !y.tail()) return !x.tail() && !y.tail();
  return x.tail()->same_stream(*y.tail());
}

Equality prove_equal(const ErrorValue& x, const ErrorValue& y, std::size_t max_depth) {
  if (&x == &y || structurally_equal(x, y)) return Equality::Equal;

  const bool x_rational = !x.tail() || x.tail()->is_rational();
  const bool y_rational = !y.tail() || y.tail()->is_rational();
  if (x_rational) x.refine_to(std::numeric_limits<std::size_t>::max());
  if (y_rational) y.refine_to(std::numeric_limits<std::size_t>::max());
  if (x_rational && y_rational) return x.lo() == y.lo() ? Equality::Equal : Equality::Unequal;
  // A rational error value never equals the error value of an irrational number.
  if (x_rational || y_rational) return Equality::Unequal;
  if (proven_less(x, y) || proven_less(y, x)) return Equality::Unequal;

  const auto px = x.minimal_polynomial();
  const auto py = y.minimal_polynomial();
  if (!px || !py) return Equality::Unknown;
  if (!(*px == *py)) return Equality::Unequal;

  // Same quadratic: equal unless they are the two conjugate roots, which lie on
  // opposite sides of -b / 2a.
  const Rational split(-px->b, 2 * px->a);
  Rational split_c = split;
  split_c.canonicalize();
  while (side_of(x, split_c) == 0 && x.depth() < max_depth && x.refine()) {
  }
  while (side_of(y, split_c) == 0 && y.depth() < max_depth && y.refine()) {
  }
  const int sx = side_of(x, split_c);
  const int sy = side_of(y, split_c);
  if (sx == 0 || sy == 0) return Equality::Unknown;
  return sx == sy ? Equality::Equal : Equality::Unequal;
}

}  // namespace psiperm
