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

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "graphmart/errors.hpp"
#include "graphmart/market.hpp"
#include "graphmart/money.hpp"
#include "graphmart/rng.hpp"
#include "graphmart/types.hpp"

namespace graphmart {
namespace {

using market::DataProduct;
using market::Offer;
using market::ResolvedOffers;
using market::Summary;
using market::SummaryKey;
using market::Valuation;

Money cents(std::int64_t c) { return Money::from_minor(c); }

TripleAtom triple(std::string s, std::string p, std::string o, bool lit = false) {
  return TripleAtom{std::move(s), std::move(p), std::move(o), lit};
}

// Two products sharing one graph-supplied triple, mirroring the join-cost
// worked example: the same statement is offered at $0.05 by pb and $0.09
// by pc, so the cheapest resolution must pick pb.
std::vector<DataProduct> two_provider_catalog() {
  DataProduct pb;
  pb.product_id = "pb";
  pb.provider_id = "provB";
  pb.price_per_triple = cents(5);
  pb.graph_ids = {"gb"};
  pb.metadata["region"] = MetaValue::str("eu");
  pb.metadata["age_days"] = MetaValue::num(3);
  pb.exposed_keys = {"region"};
  DataProduct pc;
  pc.product_id = "pc";
  pc.provider_id = "provC";
  pc.price_per_triple = cents(9);
  pc.graph_ids = {"gc"};
  return {pb, pc};
}

QueryAnswer shared_triple_answer() {
  QueryAnswer answer;
  answer.vars = {"x"};
  AnswerRow row;
  row.bindings = {Term{"ex:thing", false}};
  row.matches.push_back({triple("ex:thing", "ex:name", "Thing", true), {"pb", "pc"}});
  row.matches.push_back({triple("ex:thing", "ex:kind", "ex:widget"), {"pc"}});
  answer.rows.push_back(row);
  return answer;
}

TEST_CASE("resolve_cheapest_offers picks minimum price with id tie-break") {
  const TripleAtom t = triple("s", "p", "o");
  std::vector<Offer> offers = {
      {t, "zeta", cents(7)},
      {t, "beta", cents(5)},
      {t, "alpha", cents(5)},
      {triple("s2", "p", "o"), "zeta", cents(3)},
  };
  const ResolvedOffers resolved = market::resolve_cheapest_offers(offers);
  REQUIRE(resolved.size() == 2);
  CHECK(resolved.at(t).price == cents(5));
  CHECK(resolved.at(t).product_id == "alpha");
  CHECK(resolved.at(triple("s2", "p", "o")).price == cents(3));

  CHECK(market::resolve_cheapest_offers({}).empty());
}

TEST_CASE("offers_from_answer expands provenance into per-product offers") {
  const auto catalog = two_provider_catalog();
  const QueryAnswer answer = shared_triple_answer();
  const auto offers = market::offers_from_answer(answer, catalog);
  // Shared triple appears under both products, the second under pc only.
  REQUIRE(offers.size() == 3);
  const ResolvedOffers resolved = market::resolve_cheapest_offers(offers);
  CHECK(resolved.at(answer.rows[0].matches[0].triple).price == cents(5));
  CHECK(resolved.at(answer.rows[0].matches[0].triple).product_id == "pb");
  CHECK(resolved.at(answer.rows[0].matches[1].triple).price == cents(9));

  SUBCASE("duplicate provenance entries collapse") {
    QueryAnswer doubled = answer;
    doubled.rows.push_back(doubled.rows[0]);
    CHECK(market::offers_from_answer(doubled, catalog).size() == 3);
  }
  SUBCASE("unknown product is rejected") {
    QueryAnswer bad = answer;
    bad.rows[0].matches[0].product_ids = {"ghost"};
    CHECK_THROWS_AS(market::offers_from_answer(bad, catalog), UnknownProduct);
  }
}

TEST_CASE("summarize prices rows at cheapest offers") {
  const auto catalog = two_provider_catalog();
  const QueryAnswer answer = shared_triple_answer();
  const auto resolved =
      market::resolve_cheapest_offers(market::offers_from_answer(answer, catalog));
  const Summary summary = market::summarize(answer, resolved, catalog, 11);

  REQUIRE(summary.rows.size() == 1);
  REQUIRE(summary.rows[0].triple_ids.size() == 2);
  Money total = Money{};
  for (const auto& id : summary.rows[0].triple_ids) total = total + summary.triple_info.at(id).price;
  CHECK(total == cents(14));

  SUBCASE("only allow-listed metadata is exposed") {
    const auto& cheap_info = summary.triple_info.at(summary.rows[0].triple_ids[0]);
    REQUIRE(cheap_info.metadata.size() == 1);
    CHECK(cheap_info.metadata[0].first == "region");
    CHECK(cheap_info.metadata[0].second == MetaValue::str("eu"));
    const auto& other_info = summary.triple_info.at(summary.rows[0].triple_ids[1]);
    CHECK(other_info.metadata.empty());
  }
  SUBCASE("missing resolution is rejected") {
    ResolvedOffers partial = resolved;
    partial.erase(answer.rows[0].matches[1].triple);
    CHECK_THROWS_AS(market::summarize(answer, partial, catalog, 11), MissingOffer);
  }
  SUBCASE("same seed reproduces ids, key agrees") {
    const Summary again = market::summarize(answer, resolved, catalog, 11);
    CHECK(again.rows[0].triple_ids == summary.rows[0].triple_ids);
    const SummaryKey key = market::summary_key(answer, resolved, 11);
    REQUIRE(key.triples.size() == 2);
    CHECK(key.triples.at(summary.rows[0].triple_ids[0]) == answer.rows[0].matches[0].triple);
    CHECK(key.triples.at(summary.rows[0].triple_ids[1]) == answer.rows[0].matches[1].triple);
  }
}

// Random answers over short, id-alphabet-colliding atom text. The summary
// must never leak any atom field as a substring of any anonymous id, and
// identical triples must share one id.
TEST_CASE("anonymization leaks nothing and is bijective") {
  const std::vector<std::string> atoms = {"t", "_", "a", "b2", "c3f", "deadbeef",
                                          "t_", "0", "9", "e", "ff", "ab"};
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Rng rng = substream(seed, "answers");
    DataProduct product;
    product.product_id = "p0";
    product.provider_id = "prov0";
    product.price_per_triple = cents(1 + static_cast<std::int64_t>(rng.below(40)));
    std::vector<DataProduct> catalog = {product};

    QueryAnswer answer;
    answer.vars = {"v"};
    const int rows = 1 + static_cast<int>(rng.below(6));
    for (int r = 0; r < rows; ++r) {
      AnswerRow row;
      row.bindings = {Term{atoms[rng.below(atoms.size())], false}};
      const int width = 1 + static_cast<int>(rng.below(4));
      for (int m = 0; m < width; ++m) {
        TripleAtom t{atoms[rng.below(atoms.size())], atoms[rng.below(atoms.size())],
                     atoms[rng.below(atoms.size())], rng.below(2) == 0};
        row.matches.push_back({t, {"p0"}});
      }
      answer.rows.push_back(row);
    }

    const auto resolved =
        market::resolve_cheapest_offers(market::offers_from_answer(answer, catalog));
    const Summary summary = market::summarize(answer, resolved, catalog, seed);
    const SummaryKey key = market::summary_key(answer, resolved, seed);

    std::map<TripleAtom, std::string> id_of;
    for (const auto& [id, t] : key.triples) {
      auto [it, inserted] = id_of.emplace(t, id);
      CHECK(inserted);  // one id per distinct triple
      for (const std::string& field : {t.subject, t.predicate, t.object}) {
        CAPTURE(id);
        CAPTURE(field);
        CHECK(id.find(field) == std::string::npos);
      }
    }
    // Every row references ids of exactly its distinct triples.
    for (std::size_t r = 0; r < answer.rows.size(); ++r) {
      const auto want = answer.rows[r].required_triples();
      REQUIRE(summary.rows[r].triple_ids.size() == want.size());
      for (std::size_t i = 0; i < want.size(); ++i) {
        CHECK(summary.rows[r].triple_ids[i] == id_of.at(want[i]));
      }
    }
  }
}

TEST_CASE("valuation constructors validate shape") {
  CHECK(Valuation::make_linear({cents(3), cents(0)}).kind == Valuation::Kind::kLinear);
  CHECK_THROWS_AS(Valuation::make_linear({cents(-1)}), InvalidProblem);
  const Valuation dim = Valuation::make_diminishing({cents(9), cents(9), cents(2)});
  CHECK(dim.kind == Valuation::Kind::kDiminishing);
  CHECK_THROWS_AS(Valuation::make_diminishing({cents(1), cents(2)}), InvalidProblem);
  CHECK_THROWS_AS(Valuation::make_diminishing({cents(-2)}), InvalidProblem);
}

TEST_CASE("settle splits payment by provider of the winning product") {
  const auto catalog = two_provider_catalog();
  const QueryAnswer answer = shared_triple_answer();
  const auto resolved =
      market::resolve_cheapest_offers(market::offers_from_answer(answer, catalog));
  const std::vector<TripleAtom> purchased = {answer.rows[0].matches[0].triple,
                                             answer.rows[0].matches[1].triple};
  const auto split = market::settle(purchased, resolved, catalog);
  REQUIRE(split.size() == 2);
  CHECK(split.at("provB") == cents(5));
  CHECK(split.at("provC") == cents(9));

  SUBCASE("unpurchased providers are absent") {
    const std::vector<TripleAtom> only = {answer.rows[0].matches[0].triple};
    const auto one = market::settle(only, resolved, catalog);
    REQUIRE(one.size() == 1);
    CHECK(one.at("provB") == cents(5));
  }
  SUBCASE("duplicate purchases count once") {
    std::vector<TripleAtom> doubled = purchased;
    doubled.push_back(purchased[0]);
    CHECK(market::settle(doubled, resolved, catalog) == split);
  }
  SUBCASE("unknown winning product is rejected") {
    ResolvedOffers bad = resolved;
    bad.begin()->second.product_id = "ghost";
    CHECK_THROWS_AS(market::settle(purchased, bad, catalog), UnknownProduct);
  }
  SUBCASE("unresolved purchase is rejected") {
    const std::vector<TripleAtom> foreign = {triple("nope", "p", "o")};
    CHECK_THROWS_AS(market::settle(foreign, resolved, catalog), MissingOffer);
  }
}

// Settlements conserve money: the provider split sums exactly to the sum of
// resolved prices of the purchased triples, in integer minor units.
TEST_CASE("settlement conserves the payment") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    Rng rng = substream(seed, "settle");
    const int providers = 1 + static_cast<int>(rng.below(4));
    std::vector<DataProduct> catalog;
    for (int p = 0; p < providers; ++p) {
      DataProduct d;
      d.product_id = "p" + std::to_string(p);
      d.provider_id = "prov" + std::to_string(rng.below(3));
      d.price_per_triple = cents(1 + static_cast<std::int64_t>(rng.below(99)));
      catalog.push_back(d);
    }
    ResolvedOffers resolved;
    std::vector<TripleAtom> purchased;
    Money expected = Money{};
    const int triples = 1 + static_cast<int>(rng.below(30));
    for (int i = 0; i < triples; ++i) {
      const TripleAtom t = triple("s" + std::to_string(i), "p", "o");
      const auto& product = catalog[rng.below(catalog.size())];
      resolved[t] = {product.price_per_triple, product.product_id};
      if (rng.below(2) == 0) {
        purchased.push_back(t);
        expected = expected + product.price_per_triple;
      }
    }
    const auto split = market::settle(purchased, resolved, catalog);
    Money total = Money{};
    for (const auto& [provider, amount] : split) {
      CHECK(amount > Money{});
      total = total + amount;
    }
    CHECK(total == expected);
  }
}

}  // namespace
}  // namespace graphmart
