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
// A minimal federated query layer: in-memory named-graph stores, basic
// graph pattern evaluation with product provenance, and the GRAPH-wrapper
// query rewriting. Endpoints are immutable after load; evaluation is pure.

#pragma once

#include <span>
#include <string>
#include <vector>

#include "graphmart/market.hpp"
#include "graphmart/types.hpp"

namespace graphmart::federation {

struct NamedGraph {
  std::string graph_id;
  std::vector<TripleAtom> triples;
};

struct Endpoint {
  std::string endpoint_id;
  std::vector<NamedGraph> graphs;
};

// One position of a triple pattern: a variable or a constant term.
struct PatternTerm {
  enum class Kind { kVariable, kResource, kLiteral };
  Kind kind = Kind::kResource;
  std::string text;  // variable name without '?', or the constant text

  static PatternTerm var(std::string name) { return {Kind::kVariable, std::move(name)}; }
  static PatternTerm resource(std::string t) { return {Kind::kResource, std::move(t)}; }
  static PatternTerm literal(std::string t) { return {Kind::kLiteral, std::move(t)}; }

  bool is_variable() const { return kind == Kind::kVariable; }
};

struct TriplePattern {
  PatternTerm subject;
  PatternTerm predicate;
  PatternTerm object;

  // The rendering used by query files and the rewriter, as in
  // `?hotel ex:name "Hotel California" .`.
  std::string text() const;
};

// Comparison over a product metadata key. A product passes only if it
// declares the key with a matching kind and the comparison holds.
struct MetadataFilter {
  enum class Op { kEq, kNe, kLt, kLe, kGt, kGe };
  std::string key;
  Op op = Op::kEq;
  MetaValue value;

  bool passes(const market::DataProduct& product) const;
};

struct BGPQuery {
  std::vector<std::string> projected_vars;  // without '?'
  std::vector<TriplePattern> patterns;
  std::vector<MetadataFilter> filters;

  // Throws InvalidProblem unless patterns are non-empty and every projected
  // variable occurs in some pattern.
  void validate() const;
};

// Emits the GRAPH-wrapper form of one pattern, bit-exact modulo the index:
//   GRAPH ?graph_<i> { <pattern> . } ?product_<i> market:contains ?graph_<i> .
std::string rewrite_pattern(const TriplePattern& pattern, int fresh_index);

// Rewrites a whole query, one fresh index per pattern starting at 1 and
// skipping indices whose graph_/product_ variables the query already uses.
std::vector<std::string> rewrite_query(const BGPQuery& query);

// Recovers the original pattern text from a rewritten graph pattern.
// Inverse of rewrite_pattern; throws Error on foreign input.
std::string strip_rewritten(const std::string& rewritten);

// Evaluates the BGP over the union of all graphs of all endpoints. A triple
// can match a pattern only while some catalog product passing every filter
// contains a graph that holds it; each answer row records, per pattern, the
// matched triple and the full set of passing suppliers. Rows are projected
// onto projected_vars; rows identical in bindings and matched triples are
// merged; rows are ordered canonically (bindings, then triples).
// Throws UnknownGraph if a product references a graph no endpoint serves.
QueryAnswer evaluate(const BGPQuery& query, std::span<const Endpoint> federation,
                     std::span<const market::DataProduct> catalog);

// Loads endpoints from a quad file: one `subject predicate object graph_id`
// line per statement, literals double-quoted, '#' comments and blank lines
// skipped. All graphs are served by a single endpoint named after the file.
// Throws ParseError with the offending line number.
std::vector<Endpoint> load_graphs(const std::string& path);

}  // namespace graphmart::federation
