// Copyright 2026 The randworlds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "randworlds/rational.hpp"

#include <cctype>
#include <cstddef>

namespace randworlds {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

std::optional<Rational> parse_rational(const std::string& text) {
  std::string s = text;
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s = s.substr(1);
  }
  if (s.empty()) return std::nullopt;

  Rational value;
  std::size_t slash = s.find('/');
  std::size_t dot = s.find('.');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return std::nullopt;
    BigInt d(den);
    if (d == 0) return std::nullopt;
    value = Rational(BigInt(num), d);
  } else if (dot != std::string::npos) {
    std::string whole = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (!all_digits(whole) || !all_digits(frac)) return std::nullopt;
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    value = Rational(BigInt(whole) * scale + BigInt(frac), scale);
  } else {
    if (!all_digits(s)) return std::nullopt;
    value = Rational(BigInt(s));
  }
  if (negative) value = -value;
  return value;
}

std::string format_rational(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

double to_double(const Rational& r) { return static_cast<double>(r); }

}  // namespace randworlds
