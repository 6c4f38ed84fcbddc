#include "psiperm/psi_function.hpp"

#include <algorithm>

#include "psiperm/errors.hpp"

namespace psiperm {

PsiFunction::PsiFunction(ContinuedFraction cf) : cf_(std::move(cf)) {
  if (cf_.is_rational()) {
    throw RationalNotAdmitted("psi is defined for irrational numbers only; '" + cf_.label() + "' is rational");
  }
}

void PsiFunction::extend_to(std::size_t nu) {
  while (conv_.size() <= nu) {
    const std::size_t i = conv_.size();
    const BigInt a = cf_.term(i);
    const BigInt p_prev = i >= 1 ? conv_[i - 1].p : BigInt(1);
    const BigInt q_prev = i >= 1 ? conv_[i - 1].q : BigInt(0);
    const BigInt p_prev2 = i >= 2 ? conv_[i - 2].p : (i == 1 ? BigInt(1) : BigInt(0));
    const BigInt q_prev2 = i >= 2 ? conv_[i - 2].q : (i == 1 ? BigInt(0) : BigInt(1));
    conv_.push_back(Convergent{i, a * p_prev + p_prev2, a * q_prev + q_prev2});
  }
}

const Convergent& PsiFunction::convergent(std::size_t nu) {
  extend_to(nu);
  return conv_[nu];
}

std::size_t PsiFunction::index_at(const BigInt& t) {
  if (t < first_denominator()) {
    throw BelowFirstDenominator("psi(" + to_decimal(t) + ") of '" + label() + "' is below q_1 = " +
                                to_decimal(first_denominator()));
  }
  while (conv_.back().q <= t) extend_to(conv_.size());
  // q_1 < q_2 < ... so the last denominator <= t is found by bisection.
  const auto it = std::upper_bound(conv_.begin() + 1, conv_.end(), t,
                                   [](const BigInt& v, const Convergent& c) { return v < c.q; });
  return static_cast<std::size_t>(it - conv_.begin()) - 1;
}

const ErrorValue& PsiFunction::xi_at(std::size_t nu) {
  auto it = errors_.find(nu);
  if (it != errors_.end()) return it->second;
  extend_to(nu);
  BigInt q_prev = nu == 0 ? BigInt(0) : conv_[nu - 1].q;
  ErrorValue value(conv_[nu].q, std::move(q_prev), cf_.tail(nu + 1));
  return errors_.emplace(nu, std::move(value)).first->second;
}

const ErrorValue& PsiFunction::eval(const BigInt& t) { return xi_at(index_at(t)); }

const ErrorValue& psi_eval(PsiFunction& f, const BigInt& t) { return f.eval(t); }

namespace {

void check_proxy(const Rational& alpha_proxy, const BigInt& t, BruteForceOptions options) {
  if (t < 1) throw ConfigError("psi_bruteforce: t must be >= 1");
  if (options.proxy_is_exact) return;
  const BigInt bound = 2 * t * t * t;
  if (alpha_proxy.get_den() <= bound) {
    throw ProxyTooCoarse("psi_bruteforce: proxy denominator " + to_decimal(alpha_proxy.get_den()) +
                         " must exceed 2 t^3 = " + to_decimal(bound));
  }
}

// ||q x|| for x = num/den in lowest terms, as the numerator over den.
BigInt distance_numerator(const BigInt& q, const BigInt& num, const BigInt& den) {
  BigInt r;
  const BigInt qn = q * num;
  mpz_fdiv_r(r.get_mpz_t(), qn.get_mpz_t(), den.get_mpz_t());
  const BigInt other = den - r;
  return r < other ? r : other;
}

}  // namespace

BruteForcePsi psi_bruteforce(const Rational& alpha_proxy, const BigInt& t, BruteForceOptions options) {
  check_proxy(alpha_proxy, t, options);
  const BigInt& num = alpha_proxy.get_num();
  const BigInt& den = alpha_proxy.get_den();
  BigInt best = den;
  BigInt argmin = 0;
  for (BigInt q = 1; q <= t; ++q) {
    BigInt d = distance_numerator(q, num, den);
    if (d < best) {
      best = std::move(d);
      argmin = q;
    }
  }
  Rational value(best, den);
  value.canonicalize();
  return BruteForcePsi{std::move(value), std::move(argmin)};
}

std::vector<BruteForcePsi> psi_bruteforce_scan(const Rational& alpha_proxy, std::size_t t_max,
                                               BruteForceOptions options) {
  check_proxy(alpha_proxy, BigInt(static_cast<unsigned long>(t_max)), options);
  const BigInt& num = alpha_proxy.get_num();
  const BigInt& den = alpha_proxy.get_den();
  std::vector<BruteForcePsi> out;
  out.reserve(t_max);
  BigInt best = den;
  BigInt argmin = 0;
  Rational value;
  for (std::size_t t = 1; t <= t_max; ++t) {
    const BigInt q(static_cast<unsigned long>(t));
    BigInt d = distance_numerator(q, num, den);
    if (d < best) {
      best = std::move(d);
      argmin = q;
      value = Rational(best, den);
      value.canonicalize();
    }
    out.push_back(BruteForcePsi{value, argmin});
  }
  return out;
}

std::vector<JumpPoint> jump_points(PsiFunction& f, const BigInt& t_max) {
  const std::size_t top = f.index_at(t_max);
  std::vector<JumpPoint> out;
  for (std::size_t nu = 2; nu <= top; ++nu) {
    JumpPoint jp;
    jp.nu = nu;
    jp.q = f.denominator(nu);
    jp.left = &f.xi_at(nu - 1);
    jp.right = &f.xi_at(nu);
    out.push_back(std::move(jp));
  }
  return out;
}

void write_step_csv(PsiFunction& f, const BigInt& t_max, std::ostream& out) {
  const std::size_t top = f.index_at(t_max);
  out << "t_start,t_end,nu,q_nu,xi_lo,xi_hi\n";
  for (std::size_t nu = 1; nu <= top; ++nu) {
    const ErrorValue& x = f.xi_at(nu);
    out << to_decimal(f.denominator(nu)) << ',' << to_decimal(f.denominator(nu + 1)) << ',' << nu << ','
        << to_decimal(f.denominator(nu)) << ',' << to_fraction_string(x.lo()) << ',' << to_fraction_string(x.hi())
        << '\n';
  }
}

}  // namespace psiperm
