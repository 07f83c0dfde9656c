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
//
// Economic domain model: products, offers, valuations, summaries, and
// provider settlement. Everything here is immutable after construction and
// every operation is a pure function, so concurrent use needs no locking.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graphmart/money.hpp"
#include "graphmart/types.hpp"

namespace graphmart::market {

// A provider's priced bundle of named graphs. `price_per_triple` applies to
// every triple served from any graph of the product. `exposed_keys` is the
// provider-declared allow-list of metadata keys that summaries may reveal;
// everything else (including the provider id) stays private to the
// marketplace.
struct DataProduct {
  std::string product_id;
  std::string provider_id;
  Money price_per_triple;
  std::vector<std::string> graph_ids;
  std::map<std::string, MetaValue> metadata;
  std::vector<std::string> exposed_keys;
};

// One product's priced copy of a triple: the atomic purchasable unit.
struct Offer {
  TripleAtom triple;
  std::string product_id;
  Money price;
};

// Cheapest-offer resolution result for one triple.
struct ResolvedOffer {
  Money price;
  std::string product_id;
};

using ResolvedOffers = std::map<TripleAtom, ResolvedOffer>;

// Customer valuation. Linear assigns a value per mapping index; diminishing
// is a non-increasing schedule of marginal values consumed in allocation
// order (usable by the greedy rule only).
struct Valuation {
  enum class Kind { kLinear, kDiminishing };
  Kind kind = Kind::kLinear;
  std::vector<Money> linear;       // indexed by mapping index
  std::vector<Money> diminishing;  // marginal value of the m-th allocated mapping

  static Valuation make_linear(std::vector<Money> values);
  static Valuation make_diminishing(std::vector<Money> schedule);
};

// Anonymized, price-bearing view of a query answer: what the allocation
// rule is allowed to see before payment.
struct TripleInfo {
  Money price;
  std::vector<std::pair<std::string, MetaValue>> metadata;  // exposed keys only
};

struct SummaryRow {
  std::size_t mapping_index;
  std::vector<std::string> triple_ids;  // distinct, first-appearance order
};

struct Summary {
  std::vector<SummaryRow> rows;
  std::map<std::string, TripleInfo> triple_info;

  bool empty() const { return rows.empty(); }
};

// Marketplace-private reverse mapping from anonymous ids back to the
// canonical triples and their winning products. Never shown to customers.
struct SummaryKey {
  std::map<std::string, TripleAtom> triples;
};

// Minimum price per distinct triple over all offers. Price ties select the
// lexicographically smallest product id, a fixed deterministic ordering.
// Empty input yields an empty map.
ResolvedOffers resolve_cheapest_offers(std::span<const Offer> offers);

// Derives the offer set implied by an answer's provenance: one offer per
// (triple, supplying product) pair, priced at the product's per-triple price.
// Throws UnknownProduct if a match references an unregistered product.
std::vector<Offer> offers_from_answer(const QueryAnswer& answer,
                                      std::span<const DataProduct> products);

// Anonymizes a query answer into a Summary. Distinct canonical triples map
// bijectively onto anonymous ids; prices and allow-listed metadata of the
// winning product are copied; no subject/predicate/object text leaks into
// any id. Same (answer, seed) yields the identical summary.
// Throws MissingOffer if a required triple has no resolved price.
Summary summarize(const QueryAnswer& answer, const ResolvedOffers& resolved,
                  std::span<const DataProduct> products, std::uint64_t seed);

// The private counterpart of summarize: same ids, canonical triples attached.
SummaryKey summary_key(const QueryAnswer& answer, const ResolvedOffers& resolved,
                       std::uint64_t seed);

// Splits a payment among providers: each provider receives exactly the sum
// of resolved prices of its purchased triples; providers with no purchased
// triple are absent. Throws UnknownProduct if a purchased triple resolves to
// an unregistered product, MissingOffer if it is not in the resolved map.
std::map<std::string, Money> settle(std::span<const TripleAtom> purchased,
                                    const ResolvedOffers& resolved,
                                    std::span<const DataProduct> products);

}  // namespace graphmart::market
