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

#ifndef GAMEFORM_NUMBER_H_
#define GAMEFORM_NUMBER_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gameform {

// Raised on overflow or division by zero.
class ArithmeticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exact rational number with 64-bit numerator and denominator. Decimal
// literals such as 1.25 are stored as 5/4. The representation is always
// normalized (gcd 1, positive denominator), so structural equality is value
// equality.
class Number {
 public:
  Number() = default;
  Number(int64_t value) : num_(value) {}  // NOLINT: implicit by intent

  static Number FromFraction(int64_t num, int64_t den);

  // Accepts "123", "-7", "1.25". Returns nullopt on malformed or overflowing
  // input.
  static std::optional<Number> Parse(std::string_view text);

  int64_t numerator() const { return num_; }
  int64_t denominator() const { return den_; }
  bool is_integer() const { return den_ == 1; }
  bool is_negative() const { return num_ < 0; }

  // Integers print as-is, terminating fractions as decimals, others as N/D.
  std::string ToString() const;

  friend Number operator+(const Number& a, const Number& b);
  friend Number operator-(const Number& a, const Number& b);
  friend Number operator*(const Number& a, const Number& b);
  friend Number operator/(const Number& a, const Number& b);
  Number operator-() const;

  friend bool operator==(const Number& a, const Number& b) = default;
  friend std::strong_ordering operator<=>(const Number& a, const Number& b);

 private:
  int64_t num_ = 0;
  int64_t den_ = 1;
};

}  // namespace gameform

#endif  // GAMEFORM_NUMBER_H_
