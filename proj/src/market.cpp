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

#include "graphmart/market.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <utility>

#include "graphmart/errors.hpp"
#include "graphmart/rng.hpp"

namespace graphmart::market {
namespace {

const DataProduct* find_product(std::span<const DataProduct> products, const std::string& id) {
  for (const DataProduct& p : products) {
    if (p.product_id == id) return &p;
  }
  return nullptr;
}

// Distinct required triples of the whole answer, first-appearance order
// (row order, then within-row order).
std::vector<TripleAtom> distinct_triples(const QueryAnswer& answer) {
  std::vector<TripleAtom> out;
  std::set<TripleAtom> seen;
  for (const AnswerRow& row : answer.rows) {
    for (const TripleAtom& t : row.required_triples()) {
      if (seen.insert(t).second) out.push_back(t);
    }
  }
  return out;
}

std::string hex12(std::uint64_t x) {
  static const char* kDigits = "0123456789abcdef";
  std::string s(12, '0');
  for (int i = 11; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = kDigits[x & 0xf];
    x >>= 4;
  }
  return s;
}

// Assigns anonymous ids to the distinct triples of an answer. An id is
// accepted only if no subject/predicate/object of any underlying triple
// occurs in it as a substring and it is unused; rejected candidates are
// re-drawn from the per-triple stream. Ids use the alphabet {t,_,0-9,a-f},
// with an uppercase fallback alphabet in case some atom text blocks every
// lowercase candidate.
std::map<TripleAtom, std::string> assign_ids(const std::vector<TripleAtom>& triples,
                                             std::uint64_t seed) {
  std::vector<std::string> atoms;
  for (const TripleAtom& t : triples) {
    atoms.push_back(t.subject);
    atoms.push_back(t.predicate);
    atoms.push_back(t.object);
  }
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());

  auto leaks = [&atoms](const std::string& id) {
    for (const std::string& a : atoms) {
      if (!a.empty() && a.size() <= id.size() && id.find(a) != std::string::npos) return true;
    }
    return false;
  };

  std::map<TripleAtom, std::string> ids;
  std::set<std::string> used;
  for (std::size_t i = 0; i < triples.size(); ++i) {
    Rng rng = substream(seed, "anon", i);
    std::string id;
    for (int attempt = 0; attempt < 128; ++attempt) {
      std::string body = hex12(rng.next_u64());
      id = "t_" + body;
      if (attempt >= 64) {
        // Fallback alphabet {T,0-9,A-F}, disjoint letters from the primary.
        for (char& c : body) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        id = "T" + body;
      }
      if (!leaks(id) && !used.count(id)) break;
      id.clear();
    }
    if (id.empty()) throw Error("cannot anonymize: atom text blocks every candidate id");
    used.insert(id);
    ids.emplace(triples[i], std::move(id));
  }
  return ids;
}

}  // namespace

Valuation Valuation::make_linear(std::vector<Money> values) {
  Valuation v;
  v.kind = Kind::kLinear;
  v.linear = std::move(values);
  for (Money m : v.linear) {
    if (m < kZeroMoney) throw InvalidProblem("linear valuation has a negative value");
  }
  return v;
}

Valuation Valuation::make_diminishing(std::vector<Money> schedule) {
  Valuation v;
  v.kind = Kind::kDiminishing;
  v.diminishing = std::move(schedule);
  for (std::size_t i = 0; i < v.diminishing.size(); ++i) {
    if (v.diminishing[i] < kZeroMoney) {
      throw InvalidProblem("diminishing valuation has a negative value");
    }
    if (i > 0 && v.diminishing[i] > v.diminishing[i - 1]) {
      throw InvalidProblem("diminishing valuation schedule increases");
    }
  }
  return v;
}

ResolvedOffers resolve_cheapest_offers(std::span<const Offer> offers) {
  ResolvedOffers resolved;
  for (const Offer& offer : offers) {
    auto [it, inserted] = resolved.try_emplace(offer.triple, ResolvedOffer{offer.price, offer.product_id});
    if (inserted) continue;
    ResolvedOffer& best = it->second;
    if (offer.price < best.price ||
        (offer.price == best.price && offer.product_id < best.product_id)) {
      best = {offer.price, offer.product_id};
    }
  }
  return resolved;
}

std::vector<Offer> offers_from_answer(const QueryAnswer& answer,
                                      std::span<const DataProduct> products) {
  std::vector<Offer> offers;
  std::set<std::pair<TripleAtom, std::string>> seen;
  for (const AnswerRow& row : answer.rows) {
    for (const PatternMatch& match : row.matches) {
      for (const std::string& pid : match.product_ids) {
        if (!seen.insert({match.triple, pid}).second) continue;
        const DataProduct* product = find_product(products, pid);
        if (product == nullptr) throw UnknownProduct("unregistered product '" + pid + "'");
        offers.push_back({match.triple, pid, product->price_per_triple});
      }
    }
  }
  return offers;
}

Summary summarize(const QueryAnswer& answer, const ResolvedOffers& resolved,
                  std::span<const DataProduct> products, std::uint64_t seed) {
  const std::vector<TripleAtom> triples = distinct_triples(answer);
  for (const TripleAtom& t : triples) {
    if (!resolved.count(t)) {
      throw MissingOffer("no resolved price for triple '" + t.canonical() + "'");
    }
  }
  const std::map<TripleAtom, std::string> ids = assign_ids(triples, seed);

  Summary summary;
  for (std::size_t m = 0; m < answer.rows.size(); ++m) {
    SummaryRow row;
    row.mapping_index = m;
    for (const TripleAtom& t : answer.rows[m].required_triples()) {
      row.triple_ids.push_back(ids.at(t));
    }
    summary.rows.push_back(std::move(row));
  }
  for (const TripleAtom& t : triples) {
    const ResolvedOffer& offer = resolved.at(t);
    TripleInfo info;
    info.price = offer.price;
    if (const DataProduct* product = find_product(products, offer.product_id)) {
      for (const std::string& key : product->exposed_keys) {
        auto it = product->metadata.find(key);
        if (it != product->metadata.end()) info.metadata.emplace_back(key, it->second);
      }
    }
    summary.triple_info.emplace(ids.at(t), std::move(info));
  }
  return summary;
}

SummaryKey summary_key(const QueryAnswer& answer, const ResolvedOffers& resolved,
                       std::uint64_t seed) {
  const std::vector<TripleAtom> triples = distinct_triples(answer);
  for (const TripleAtom& t : triples) {
    if (!resolved.count(t)) {
      throw MissingOffer("no resolved price for triple '" + t.canonical() + "'");
    }
  }
  const std::map<TripleAtom, std::string> ids = assign_ids(triples, seed);
  SummaryKey key;
  for (const auto& [triple, id] : ids) key.triples.emplace(id, triple);
  return key;
}

std::map<std::string, Money> settle(std::span<const TripleAtom> purchased,
                                    const ResolvedOffers& resolved,
                                    std::span<const DataProduct> products) {
  std::map<std::string, Money> settlement;
  std::set<TripleAtom> seen;
  for (const TripleAtom& t : purchased) {
    if (!seen.insert(t).second) continue;
    auto it = resolved.find(t);
    if (it == resolved.end()) {
      throw MissingOffer("purchased triple '" + t.canonical() + "' has no resolved offer");
    }
    const DataProduct* product = find_product(products, it->second.product_id);
    if (product == nullptr) {
      throw UnknownProduct("unregistered product '" + it->second.product_id + "'");
    }
    settlement[product->provider_id] += it->second.price;
  }
  return settlement;
}

}  // namespace graphmart::market
