// Copyright 2026 The graphmart Authors.
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

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace graphmart {

// Fixed-point money in minor currency units (cents). All arithmetic is
// exact integer arithmetic; conservation checks never see rounding drift.
class Money {
 public:
  constexpr Money() = default;

  static constexpr Money from_minor(std::int64_t minor) { return Money(minor); }

  // Parses a decimal string ("0.18", "12", "1.5") into minor units.
  // At most two fraction digits are accepted. Throws ParseError otherwise.
  static Money parse(std::string_view text);

  constexpr std::int64_t minor() const { return minor_; }

  // Decimal rendering with two fraction digits, e.g. "0.18".
  std::string str() const;

  constexpr Money& operator+=(Money other) {
    minor_ += other.minor_;
    return *this;
  }
  constexpr Money& operator-=(Money other) {
    minor_ -= other.minor_;
    return *this;
  }

  friend constexpr Money operator+(Money a, Money b) { return Money(a.minor_ + b.minor_); }
  friend constexpr Money operator-(Money a, Money b) { return Money(a.minor_ - b.minor_); }
  friend constexpr Money operator*(Money a, std::int64_t k) { return Money(a.minor_ * k); }
  friend constexpr Money operator*(std::int64_t k, Money a) { return a * k; }

  friend constexpr auto operator<=>(Money, Money) = default;

 private:
  constexpr explicit Money(std::int64_t minor) : minor_(minor) {}
  std::int64_t minor_ = 0;
};

constexpr Money kZeroMoney = Money::from_minor(0);

}  // namespace graphmart
