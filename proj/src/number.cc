// Copyright 2026 The gameform Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gameform/number.h"

#include <numeric>

namespace gameform {
namespace {

int64_t CheckedMul(int64_t a, int64_t b) {
  int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw ArithmeticError("integer overflow");
  }
  return out;
}

int64_t CheckedAdd(int64_t a, int64_t b) {
  int64_t out;
  if (__builtin_add_overflow(a, b, &out)) {
    throw ArithmeticError("integer overflow");
  }
  return out;
}

}  // namespace

Number Number::FromFraction(int64_t num, int64_t den) {
  if (den == 0) throw ArithmeticError("division by zero");
  if (den < 0) {
    num = CheckedMul(num, -1);
    den = CheckedMul(den, -1);
  }
  int64_t g = std::gcd(num, den);
  Number n;
  n.num_ = num / g;
  n.den_ = den / g;
  return n;
}

std::optional<Number> Number::Parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  size_t i = 0;
  if (text[0] == '-') {
    negative = true;
    i = 1;
  }
  if (i >= text.size()) return std::nullopt;
  int64_t num = 0;
  int64_t den = 1;
  bool seen_point = false;
  bool seen_digit = false;
  try {
    for (; i < text.size(); ++i) {
      char c = text[i];
      if (c == '.') {
        if (seen_point || !seen_digit) return std::nullopt;
        seen_point = true;
        seen_digit = false;
        continue;
      }
      if (c < '0' || c > '9') return std::nullopt;
      seen_digit = true;
      num = CheckedAdd(CheckedMul(num, 10), c - '0');
      if (seen_point) den = CheckedMul(den, 10);
    }
    if (!seen_digit) return std::nullopt;
    return FromFraction(negative ? -num : num, den);
  } catch (const ArithmeticError&) {
    return std::nullopt;
  }
}

std::string Number::ToString() const {
  if (den_ == 1) return std::to_string(num_);
  // Terminating decimal iff the denominator has only factors 2 and 5.
  int64_t d = den_;
  int twos = 0, fives = 0;
  while (d % 2 == 0) { d /= 2; ++twos; }
  while (d % 5 == 0) { d /= 5; ++fives; }
  if (d != 1) return std::to_string(num_) + "/" + std::to_string(den_);
  int digits = std::max(twos, fives);
  // Scale to a power of ten: num/den == scaled / 10^digits.
  int64_t scale = 1;
  int64_t scaled = 0;
  try {
    for (int k = 0; k < digits; ++k) scale = CheckedMul(scale, 10);
    scaled = CheckedMul(num_, scale / den_);
  } catch (const ArithmeticError&) {
    return std::to_string(num_) + "/" + std::to_string(den_);
  }
  std::string sign = scaled < 0 ? "-" : "";
  uint64_t mag = scaled < 0 ? -static_cast<uint64_t>(scaled)
                            : static_cast<uint64_t>(scaled);
  std::string whole = std::to_string(mag / scale);
  std::string frac = std::to_string(mag % scale);
  frac.insert(0, digits - frac.size(), '0');
  return sign + whole + "." + frac;
}

Number operator+(const Number& a, const Number& b) {
  return Number::FromFraction(
      CheckedAdd(CheckedMul(a.num_, b.den_), CheckedMul(b.num_, a.den_)),
      CheckedMul(a.den_, b.den_));
}

Number operator-(const Number& a, const Number& b) { return a + (-b); }

Number operator*(const Number& a, const Number& b) {
  return Number::FromFraction(CheckedMul(a.num_, b.num_),
                              CheckedMul(a.den_, b.den_));
}

Number operator/(const Number& a, const Number& b) {
  if (b.num_ == 0) throw ArithmeticError("division by zero");
  return Number::FromFraction(CheckedMul(a.num_, b.den_),
                              CheckedMul(a.den_, b.num_));
}

Number Number::operator-() const {
  Number n = *this;
  n.num_ = CheckedMul(num_, -1);
  return n;
}

std::strong_ordering operator<=>(const Number& a, const Number& b) {
  // Denominators are positive, so cross-multiplication keeps the order.
  __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
  __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace gameform
