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

#include "graphmart/money.hpp"

#include <cctype>
#include <cstdlib>

#include "graphmart/errors.hpp"

namespace graphmart {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::int64_t to_int(std::string_view s) {
  std::int64_t v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

}  // namespace

Money Money::parse(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  const auto dot = body.find('.');
  std::string_view whole = dot == std::string_view::npos ? body : body.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : body.substr(dot + 1);
  if (!all_digits(whole) || (dot != std::string_view::npos && !all_digits(frac)) ||
      frac.size() > 2 || whole.size() > 15) {
    throw ParseError("money", 0, "bad amount '" + std::string(text) + "'");
  }
  std::int64_t cents = to_int(whole) * 100;
  if (frac.size() == 1) cents += to_int(frac) * 10;
  if (frac.size() == 2) cents += to_int(frac);
  return Money(negative ? -cents : cents);
}

std::string Money::str() const {
  std::int64_t m = minor_;
  std::string sign;
  if (m < 0) {
    sign = "-";
    m = -m;
  }
  std::string cents = std::to_string(m % 100);
  if (cents.size() < 2) cents.insert(cents.begin(), '0');
  return sign + std::to_string(m / 100) + "." + cents;
}

}  // namespace graphmart
