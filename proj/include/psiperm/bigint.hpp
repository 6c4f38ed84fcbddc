#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace psiperm {

using BigInt = mpz_class;
using Rational = mpq_class;

inline std::string to_decimal(const BigInt& x) { return x.get_str(10); }

// Rationals cross every text boundary as "num/den" in lowest terms.
inline std::string to_fraction_string(const Rational& x) {
  return x.get_num().get_str(10) + "/" + x.get_den().get_str(10);
}

// Throws std::invalid_argument on anything that is not an optionally signed
// run of decimal digits.
BigInt parse_decimal(std::string_view text);

inline std::size_t decimal_digits(const BigInt& x) {
  return x == 0 ? 1 : to_decimal(abs(x)).size();
}

}  // namespace psiperm
