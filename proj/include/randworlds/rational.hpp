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

#ifndef RANDWORLDS_RATIONAL_HPP_
#define RANDWORLDS_RATIONAL_HPP_

#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace randworlds {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Parses "3/5", "0.6", "-1.25" or "7" into an exact rational.
// Decimal input is converted exactly (0.6 becomes 3/5, not a dyadic).
std::optional<Rational> parse_rational(const std::string& text);

// Canonical form: integer when the denominator is 1, otherwise "num/den".
std::string format_rational(const Rational& r);

double to_double(const Rational& r);

}  // namespace randworlds

#endif  // RANDWORLDS_RATIONAL_HPP_
