// Copyright 2026 The fedgame Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fedgame {

/// Arbitrary-precision integer.
using Integer = mpz_class;

/// Exact rational number, always kept in lowest terms with a positive
/// denominator (gmp canonical form). Every error and cost in the library is
/// one of these so that preference comparisons and ties are exact.
using Rational = mpq_class;

inline Integer to_integer(std::int64_t v) {
  // mpz_class has no portable int64 constructor on every platform.
  return Integer(std::to_string(v));
}

inline Rational to_rational(std::int64_t v) { return Rational(to_integer(v)); }

inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) {
    throw std::invalid_argument("rational with zero denominator");
  }
  Rational r(num, den);
  r.canonicalize();
  return r;
}

namespace detail {

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

inline std::string_view strip_sign(std::string_view s, bool& negative) {
  negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  return s;
}

}  // namespace detail

/// Parses "7", "-7", "10/3" or a finite decimal such as "2.25".
/// Rejects zero denominators and anything else.
inline Rational parse_rational(std::string_view text) {
  bool negative = false;
  std::string_view body = detail::strip_sign(text, negative);
  Rational value;

  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!detail::all_digits(num) || !detail::all_digits(den)) {
      throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    }
    value = make_rational(Integer(std::string(num), 10), Integer(std::string(den), 10));
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if ((!whole.empty() && !detail::all_digits(whole)) || !detail::all_digits(frac)) {
      throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    }
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    Integer digits(std::string(whole.empty() ? "0" : whole) + std::string(frac), 10);
    value = make_rational(digits, scale);
  } else {
    if (!detail::all_digits(body)) {
      throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    }
    value = Rational(Integer(std::string(body), 10));
  }
  return negative ? Rational(-value) : value;
}

/// "p/q", or "p" when the denominator is one.
inline std::string to_exact_string(const Rational& r) { return r.get_str(); }

/// Decimal rendering rounded half away from zero; trailing zeros are trimmed
/// (Table-style output: 1.25, 0.667, 30).
inline std::string to_decimal_string(const Rational& r, int places = 3, bool trim = true) {
  if (places < 0) places = 0;
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(places));
  Rational scaled = abs(r) * scale;
  Integer rounded = scaled.get_num() * 2 + scaled.get_den();
  Integer twice_den = scaled.get_den() * 2;
  mpz_fdiv_q(rounded.get_mpz_t(), rounded.get_mpz_t(), twice_den.get_mpz_t());

  std::string digits = rounded.get_str();
  if (places > 0) {
    if (digits.size() <= static_cast<std::size_t>(places)) {
      digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
    }
    digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
    if (trim) {
      while (digits.back() == '0') digits.pop_back();
      if (digits.back() == '.') digits.pop_back();
    }
  }
  bool is_zero = rounded == 0;
  return (r < 0 && !is_zero) ? "-" + digits : digits;
}

inline double to_double(const Rational& r) { return r.get_d(); }

}  // namespace fedgame
