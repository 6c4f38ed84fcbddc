#include "psiperm/continued_fraction.hpp"

#include <algorithm>
#include <stdexcept>

#include "psiperm/errors.hpp"

namespace psiperm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

void require_positive(const std::vector<BigInt>& quotients, const char* what) {
  for (const auto& a : quotients) {
    if (a < 1) throw ConfigError(std::string(what) + ": partial quotients must be >= 1");
  }
}

}  // namespace

BigInt parse_decimal(std::string_view text) {
  std::string_view digits = text;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw std::invalid_argument("not a decimal integer: '" + std::string(text) + "'");
  }
  BigInt out;
  out.set_str(std::string(text.front() == '+' ? text.substr(1) : text), 10);
  return out;
}

PeriodicForm PeriodicForm::canonical() const {
  PeriodicForm out = *this;
  const std::size_t p = out.period.size();
  for (std::size_t len = 1; len < p; ++len) {
    if (p % len != 0) continue;
    bool repeats = true;
    for (std::size_t i = len; i < p && repeats; ++i) repeats = out.period[i] == out.period[i % len];
    if (repeats) {
      out.period.resize(len);
      break;
    }
  }
  while (!out.preperiod.empty() && out.preperiod.back() == out.period.back()) {
    out.preperiod.pop_back();
    std::rotate(out.period.rbegin(), out.period.rbegin() + 1, out.period.rend());
  }
  return out;
}

ContinuedFraction::ContinuedFraction(BigInt a0, std::shared_ptr<const Source> source, std::size_t offset,
                                     std::string label)
    : a0_(std::move(a0)), source_(std::move(source)), offset_(offset), label_(std::move(label)) {}

ContinuedFraction ContinuedFraction::rational(BigInt a0, std::vector<BigInt> quotients, std::string label) {
  require_positive(quotients, "rational continued fraction");
  if (!quotients.empty() && quotients.back() < 2) {
    throw ConfigError("rational continued fraction: last partial quotient must be >= 2 (canonical form)");
  }
  auto src = std::make_shared<const Source>(FiniteSource{std::move(quotients), true});
  return ContinuedFraction(std::move(a0), std::move(src), 0, std::move(label));
}

ContinuedFraction ContinuedFraction::from_fraction(const Rational& value, std::string label) {
  BigInt num = value.get_num();
  BigInt den = value.get_den();
  BigInt a0;
  mpz_fdiv_q(a0.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  BigInt rem = num - a0 * den;
  std::vector<BigInt> quotients;
  num = den;
  den = rem;
  while (den != 0) {
    BigInt a;
    mpz_fdiv_qr(a.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    quotients.push_back(a);
    num = den;
    den = rem;
  }
  return rational(std::move(a0), std::move(quotients), std::move(label));
}

ContinuedFraction ContinuedFraction::prefix(BigInt a0, std::vector<BigInt> quotients, std::string label) {
  require_positive(quotients, "prefix continued fraction");
  auto src = std::make_shared<const Source>(FiniteSource{std::move(quotients), false});
  return ContinuedFraction(std::move(a0), std::move(src), 0, std::move(label));
}

ContinuedFraction ContinuedFraction::periodic(BigInt a0, std::vector<BigInt> preperiod, std::vector<BigInt> period,
                                              std::string label) {
  if (period.empty()) throw ConfigError("periodic continued fraction: period must be nonempty");
  require_positive(preperiod, "periodic continued fraction");
  require_positive(period, "periodic continued fraction");
  auto src = std::make_shared<const Source>(PeriodicSource{std::move(preperiod), std::move(period)});
  return ContinuedFraction(std::move(a0), std::move(src), 0, std::move(label));
}

ContinuedFraction ContinuedFraction::random(BigInt a0, std::uint64_t seed, std::uint64_t bound, std::string label) {
  if (bound < 1) throw ConfigError("random continued fraction: bound must be >= 1");
  auto src = std::make_shared<const Source>(RandomSource{seed, bound});
  return ContinuedFraction(std::move(a0), std::move(src), 0, std::move(label));
}

ContinuedFraction ContinuedFraction::relabeled(std::string label) const {
  ContinuedFraction out = *this;
  out.label_ = std::move(label);
  return out;
}

StreamKind ContinuedFraction::kind() const noexcept {
  if (const auto* f = std::get_if<FiniteSource>(source_.get())) {
    return f->exact ? StreamKind::Rational : StreamKind::Prefix;
  }
  if (std::holds_alternative<PeriodicSource>(*source_)) return StreamKind::Periodic;
  return StreamKind::Random;
}

std::optional<BigInt> ContinuedFraction::source_quotient(std::size_t i) const {
  if (const auto* f = std::get_if<FiniteSource>(source_.get())) {
    if (i > f->quotients.size()) return std::nullopt;
    return f->quotients[i - 1];
  }
  if (const auto* p = std::get_if<PeriodicSource>(source_.get())) {
    if (i <= p->preperiod.size()) return p->preperiod[i - 1];
    return p->period[(i - p->preperiod.size() - 1) % p->period.size()];
  }
  const auto& r = std::get<RandomSource>(*source_);
  const std::uint64_t mixed = splitmix64(r.seed + static_cast<std::uint64_t>(i) * 0x9E3779B97F4A7C15ull);
  return BigInt(static_cast<unsigned long>(1 + mixed % r.bound));
}

std::optional<BigInt> ContinuedFraction::try_term(std::size_t j) const {
  if (offset_ == 0 && j == 0) return a0_;
  return source_quotient(offset_ + j);
}

BigInt ContinuedFraction::term(std::size_t j) const {
  auto a = try_term(j);
  if (!a) {
    throw StreamExhausted("continued fraction '" + label_ + "' has no partial quotient at index " +
                          std::to_string(j));
  }
  return *a;
}

std::optional<std::size_t> ContinuedFraction::known_quotients() const {
  const auto* f = std::get_if<FiniteSource>(source_.get());
  if (!f) return std::nullopt;
  // For a tail, term 0 is source quotient offset_ and the rest follow it.
  return f->quotients.size() - offset_;
}

ContinuedFraction ContinuedFraction::tail(std::size_t nu) const {
  if (nu == 0) return *this;
  if (!try_term(nu)) {
    throw StreamExhausted("continued fraction '" + label_ + "' has no tail at index " + std::to_string(nu));
  }
  const std::size_t new_offset = offset_ + nu;
  return ContinuedFraction(*source_quotient(new_offset), source_, new_offset, label_);
}

std::optional<PeriodicForm> ContinuedFraction::periodic_form() const {
  const auto* p = std::get_if<PeriodicSource>(source_.get());
  if (!p) return std::nullopt;
  PeriodicForm form;
  if (offset_ == 0) {
    form.preperiod.push_back(a0_);
    form.preperiod.insert(form.preperiod.end(), p->preperiod.begin(), p->preperiod.end());
    form.period = p->period;
  } else if (offset_ <= p->preperiod.size()) {
    form.preperiod.assign(p->preperiod.begin() + static_cast<std::ptrdiff_t>(offset_ - 1), p->preperiod.end());
    form.period = p->period;
  } else {
    form.period = p->period;
    const std::size_t shift = (offset_ - p->preperiod.size() - 1) % p->period.size();
    std::rotate(form.period.begin(), form.period.begin() + static_cast<std::ptrdiff_t>(shift), form.period.end());
  }
  return form.canonical();
}

bool ContinuedFraction::same_stream(const ContinuedFraction& other) const {
  if (try_term(0) != other.try_term(0)) return false;
  if (source_ == other.source_ && offset_ == other.offset_) return true;
  const StreamKind mine = kind();
  if (mine != other.kind()) return false;
  switch (mine) {
    case StreamKind::Rational: {
      for (std::size_t j = 0;; ++j) {
        auto x = try_term(j);
        auto y = other.try_term(j);
        if (x != y) return false;
        if (!x) return true;
      }
    }
    case StreamKind::Periodic:
      return periodic_form() == other.periodic_form();
    case StreamKind::Random: {
      const auto& r1 = std::get<RandomSource>(*source_);
      const auto& r2 = std::get<RandomSource>(*other.source_);
      if (r1.seed != r2.seed || r1.bound != r2.bound) return false;
      return offset_ == other.offset_;
    }
    case StreamKind::Prefix:
      return false;
  }
  return false;
}

std::vector<Convergent> convergents(const ContinuedFraction& cf, std::size_t count) {
  if (count == 0) throw std::invalid_argument("convergents: count must be >= 1");
  std::vector<Convergent> out;
  out.reserve(count);
  BigInt p_prev2 = 0, p_prev = 1, q_prev2 = 1, q_prev = 0;
  for (std::size_t nu = 0; nu < count; ++nu) {
    const BigInt a = cf.term(nu);
    BigInt p = a * p_prev + p_prev2;
    BigInt q = a * q_prev + q_prev2;
    p_prev2 = std::move(p_prev);
    q_prev2 = std::move(q_prev);
    p_prev = p;
    q_prev = q;
    out.push_back(Convergent{nu, std::move(p), std::move(q)});
  }
  return out;
}

Rational alpha_star(const ContinuedFraction& cf, std::size_t nu) {
  if (nu < 1) throw std::invalid_argument("alpha_star: index must be >= 1");
  const auto conv = convergents(cf, nu + 1);
  Rational out(conv[nu - 1].q, conv[nu].q);
  out.canonicalize();
  return out;
}

Rational reversed_value(const ContinuedFraction& cf, std::size_t nu) {
  if (nu < 1) throw std::invalid_argument("reversed_value: index must be >= 1");
  // [0; a_nu, ..., a_1]: fold from a_1 outward, x <- 1 / (a_j + x).
  Rational x = 0;
  for (std::size_t j = 1; j <= nu; ++j) {
    x = 1 / (Rational(cf.term(j)) + x);
  }
  return x;
}

ContinuedFraction tail(const ContinuedFraction& cf, std::size_t nu) {
  if (nu < 1) throw std::invalid_argument("tail: index must be >= 1");
  return cf.tail(nu);
}

Rational finite_value(const BigInt& a0, const std::vector<BigInt>& quotients) {
  if (quotients.empty()) return Rational(a0);
  Rational x = quotients.back();
  for (auto it = quotients.rbegin() + 1; it != quotients.rend(); ++it) x = Rational(*it) + 1 / x;
  return Rational(a0) + 1 / x;
}

}  // namespace psiperm
