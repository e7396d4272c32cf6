// Copyright 2026 The iidsp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>

#include "iidsp/errors.hpp"

namespace iidsp {

using Rational = mpq_class;

// Lowest-terms "p/q" (or "p" when q == 1).
inline std::string to_string(const Rational& r) {
  Rational c(r);
  c.canonicalize();
  return c.get_str();
}

// p/q in lowest terms. GMP arithmetic expects canonical operands.
inline Rational ratio(long p, long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

inline double to_double(const Rational& r) { return r.get_d(); }

// Accepts "p/q", "p", and finite decimals such as "0.05" or "-1.5";
// decimals are converted exactly.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto fail = [&] { throw FormatError("not a rational number: '" + s + "'"); };
  if (s.empty()) fail();
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    if (s.find('/') != std::string::npos) fail();
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t frac = s.size() - dot - 1;
    if (frac == 0) fail();
    std::size_t start = (digits[0] == '-' || digits[0] == '+') ? 1 : 0;
    if (digits.size() == start) fail();
    for (std::size_t i = start; i < digits.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(digits[i]))) fail();
    if (digits[0] == '+') digits.erase(0, 1);
    mpz_class num(digits, 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    bool sign_ok = (c == '-' || c == '+') && (i == 0 || s[i - 1] == '/');
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != '/' && !sign_ok) fail();
  }
  auto slash = s.find('/');
  if (slash != std::string::npos &&
      (slash == 0 || slash + 1 == s.size() || s.find('/', slash + 1) != std::string::npos))
    fail();
  std::string clean;
  for (char c : s)
    if (c != '+') clean.push_back(c);
  Rational r;
  if (r.set_str(clean, 10) != 0) fail();
  if (r.get_den() == 0) throw FormatError("zero denominator: '" + s + "'");
  r.canonicalize();
  return r;
}

inline Rational abs_diff(const Rational& a, const Rational& b) {
  Rational d = a - b;
  return d < 0 ? Rational(-d) : d;
}

}  // namespace iidsp
