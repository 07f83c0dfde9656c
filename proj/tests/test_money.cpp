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

#include <doctest.h>

#include "graphmart/errors.hpp"
#include "graphmart/money.hpp"
#include "graphmart/rng.hpp"

namespace graphmart {
namespace {

TEST_CASE("money parses decimal strings into minor units") {
  CHECK(Money::parse("0.18").minor() == 18);
  CHECK(Money::parse("0.1").minor() == 10);
  CHECK(Money::parse("12").minor() == 1200);
  CHECK(Money::parse("1.50").minor() == 150);
  CHECK(Money::parse("0.00").minor() == 0);
  CHECK(Money::parse("-0.65").minor() == -65);
  CHECK(Money::parse("+2.05").minor() == 205);
}

TEST_CASE("money rejects malformed amounts") {
  for (const char* bad : {"", ".", "1.", ".5", "1.234", "a", "1.2.3", "1e2", " 1", "--1"}) {
    CHECK_THROWS_AS(Money::parse(bad), ParseError);
  }
}

TEST_CASE("money renders with two fraction digits") {
  CHECK(Money::from_minor(18).str() == "0.18");
  CHECK(Money::from_minor(5).str() == "0.05");
  CHECK(Money::from_minor(1200).str() == "12.00");
  CHECK(Money::from_minor(-65).str() == "-0.65");
  CHECK(Money::from_minor(0).str() == "0.00");
}

TEST_CASE("money round-trips through its rendering") {
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const auto minor = static_cast<std::int64_t>(rng.below(2'000'000)) - 1'000'000;
    const Money m = Money::from_minor(minor);
    CHECK(Money::parse(m.str()) == m);
  }
}

TEST_CASE("money arithmetic is exact integer arithmetic") {
  const Money a = Money::parse("0.10"), b = Money::parse("0.02");
  CHECK((a + b).minor() == 12);
  CHECK((a - b).minor() == 8);
  CHECK((b * 4).minor() == 8);
  CHECK(a > b);
  CHECK(kZeroMoney < b);
  Money c;
  c += a;
  c -= b;
  CHECK(c.minor() == 8);
}

}  // namespace
}  // namespace graphmart
