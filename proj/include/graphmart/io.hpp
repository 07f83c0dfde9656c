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
// File formats. Line-oriented formats (products, query, instance,
// valuation) carry a '#graphmart-<kind> v1' header; richer records
// (answers, summaries, results) are JSON documents with a "format" field.
// The exact grammars are documented in docs/formats.md.

#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graphmart/allocation.hpp"
#include "graphmart/bench.hpp"
#include "graphmart/federation.hpp"
#include "graphmart/market.hpp"
#include "graphmart/scenario.hpp"

namespace graphmart::io {

// ---- products: one `<id> <provider> <price> <graph,graph,...> [k=v ...]`
//      record per line; reserved key `expose=<k1,k2>` declares the
//      summary-visible metadata allow-list.
std::vector<market::DataProduct> read_products(const std::string& path);
void write_products(std::ostream& out, std::span<const market::DataProduct> products);

// ---- query: `select ?a ?b`, then `pattern <s> <p> <o>` lines (optional
//      trailing '.'), then `filter <key> <op> <value>` lines.
federation::BGPQuery read_query(const std::string& path);

// ---- instance: the allocation module's archival format. Optional scenario
//      metadata rides along so benchmarks can recover (s, d, seed).
struct InstanceFile {
  std::string id;  // empty unless the file carries `meta id`
  int s = 0;       // mapping count (mirrors k)
  double d = -1;   // diversity, negative when unknown
  std::optional<std::uint64_t> seed;
  int tpm = 0;  // triples per mapping, 0 when unknown
  allocation::AllocationProblem problem;
};

InstanceFile read_instance(const std::string& path);
void write_instance(std::ostream& out, const InstanceFile& instance);
InstanceFile instance_from_generated(const scenario::GeneratedInstance& g);

// ---- valuation: `kind linear` + `values v1 v2 ...`, or
//      `kind diminishing` + `schedule m1 m2 ...`.
market::Valuation read_valuation(const std::string& path);

// ---- JSON documents.
std::string answer_to_json(const QueryAnswer& answer);
QueryAnswer answer_from_json(const std::string& text);

std::string summary_to_json(const market::Summary& summary);
market::Summary summary_from_json(const std::string& text);

std::string key_to_json(const market::SummaryKey& key, const market::ResolvedOffers& resolved);
// Rebuilds both the anon->triple map and the resolved offers recorded in a key file.
std::pair<market::SummaryKey, market::ResolvedOffers> key_from_json(const std::string& text);

// Result files carry chosen mapping indices, purchased triples (1-based
// instance indices and, when allocated from a summary, anonymous ids),
// payment, utility and the optimality flag.
std::string result_to_json(const allocation::AllocationResult& result, bool optimal,
                           std::span<const std::string> purchased_ids);
struct ResultFile {
  allocation::AllocationResult result;
  bool optimal = false;
  std::vector<std::string> purchased_ids;
};
ResultFile result_from_json(const std::string& text);

std::string settlement_to_json(const std::map<std::string, Money>& settlement);

// Shared helpers.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace graphmart::io
