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
#include <map>
#include <string>
#include <vector>

#include "graphmart/money.hpp"

namespace graphmart {

// One statement: subject, predicate, object. The object may be a literal,
// distinguished by the flag (and by quoting in every text rendering).
struct TripleAtom {
  std::string subject;
  std::string predicate;
  std::string object;
  bool object_is_literal = false;

  friend auto operator<=>(const TripleAtom&, const TripleAtom&) = default;

  // Canonical single-line rendering: `subject predicate object` with the
  // object quoted iff it is a literal. Used as the canonical triple id in
  // files and as the anonymization leak-check corpus.
  std::string canonical() const;
};

// A bound term: resource identifier or literal.
struct Term {
  std::string text;
  bool is_literal = false;

  friend auto operator<=>(const Term&, const Term&) = default;
};

// Product metadata values are strings or numbers.
struct MetaValue {
  enum class Kind { kString, kNumber };
  Kind kind = Kind::kString;
  std::string text;   // valid when kind == kString
  double number = 0;  // valid when kind == kNumber

  static MetaValue str(std::string s) { return {Kind::kString, std::move(s), 0}; }
  static MetaValue num(double n) { return {Kind::kNumber, {}, n}; }

  friend bool operator==(const MetaValue& a, const MetaValue& b) {
    if (a.kind != b.kind) return false;
    return a.kind == Kind::kString ? a.text == b.text : a.number == b.number;
  }
};

// One concrete way a pattern is satisfied inside a solution mapping: the
// matched triple plus every product that can supply it (after filters).
struct PatternMatch {
  TripleAtom triple;
  std::vector<std::string> product_ids;  // sorted, unique

  friend auto operator<=>(const PatternMatch&, const PatternMatch&) = default;
};

// One solution mapping with provenance: bindings for the projected
// variables plus, per query pattern, the matched triple and its suppliers.
struct AnswerRow {
  std::vector<Term> bindings;          // aligned with QueryAnswer::vars
  std::vector<PatternMatch> matches;   // aligned with the query's patterns

  friend auto operator<=>(const AnswerRow&, const AnswerRow&) = default;

  // Distinct triples this row requires, in first-appearance order.
  std::vector<TripleAtom> required_triples() const;
};

struct QueryAnswer {
  std::vector<std::string> vars;
  std::vector<AnswerRow> rows;
};

}  // namespace graphmart
