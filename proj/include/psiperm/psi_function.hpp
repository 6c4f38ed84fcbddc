#pragma once

#include <deque>
#include <map>
#include <ostream>
#include <vector>

#include "psiperm/bigint.hpp"
#include "psiperm/continued_fraction.hpp"
#include "psiperm/error_value.hpp"

namespace psiperm {

// psi_alpha(t) = min_{1 <= q <= t} ||q alpha||, which equals xi_nu on
// [q_nu, q_{nu+1}). Defined here for integer t >= q_1.
//
// Convergents and error values are materialized on demand and cached, so
// instances are not thread-safe; use one per scanning thread.
class PsiFunction {
 public:
  // Throws RationalNotAdmitted for rational continued fractions.
  explicit PsiFunction(ContinuedFraction cf);

  const ContinuedFraction& cf() const noexcept { return cf_; }
  const std::string& label() const noexcept { return cf_.label(); }

  const Convergent& convergent(std::size_t nu);
  const BigInt& denominator(std::size_t nu) { return convergent(nu).q; }
  const BigInt& first_denominator() { return denominator(1); }

  // The unique nu >= 1 with q_nu <= t < q_{nu+1}.
  std::size_t index_at(const BigInt& t);

  // xi_nu with a stable address for the lifetime of this object.
  const ErrorValue& xi_at(std::size_t nu);

  // psi(t) = xi_nu for q_nu <= t < q_{nu+1}. Throws BelowFirstDenominator if t < q_1.
  const ErrorValue& eval(const BigInt& t);

  // Number of materialized convergents.
  std::size_t materialized() const noexcept { return conv_.size(); }

 private:
  void extend_to(std::size_t nu);

  ContinuedFraction cf_;
  std::deque<Convergent> conv_;  // deque: references survive growth
  std::map<std::size_t, ErrorValue> errors_;
};

const ErrorValue& psi_eval(PsiFunction& f, const BigInt& t);

struct BruteForcePsi {
  Rational value;  // min_{q <= t} ||q x||
  BigInt argmin;   // smallest q attaining it
};

struct BruteForceOptions {
  // The proxy is the target itself (a rational), so no precision bound applies.
  bool proxy_is_exact = false;
};

// Direct scan of ||q x|| for q = 1..t over an exact rational x. Unless the
// proxy is exact, its denominator must exceed 2 t^3 (ProxyTooCoarse).
BruteForcePsi psi_bruteforce(const Rational& alpha_proxy, const BigInt& t, BruteForceOptions options = {});

// Running minimum for every t = 1..t_max in one pass: entry t-1 holds psi(t).
std::vector<BruteForcePsi> psi_bruteforce_scan(const Rational& alpha_proxy, std::size_t t_max,
                                               BruteForceOptions options = {});

struct JumpPoint {
  std::size_t nu = 0;    // psi drops from xi_{nu-1} to xi_nu at q_nu
  BigInt q;              // q_nu
  const ErrorValue* left = nullptr;   // xi_{nu-1}, the left limit
  const ErrorValue* right = nullptr;  // xi_nu
};

// Discontinuities of psi in (q_1, t_max]. Throws BelowFirstDenominator if t_max < q_1.
std::vector<JumpPoint> jump_points(PsiFunction& f, const BigInt& t_max);

// Step function rows t_start,t_end,nu,q_nu,xi_lo,xi_hi for every interval
// [q_nu, q_{nu+1}) meeting [q_1, t_max]; t_end is exclusive.
void write_step_csv(PsiFunction& f, const BigInt& t_max, std::ostream& out);

}  // namespace psiperm
