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

#include "graphmart/federation.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <string>

#include "graphmart/errors.hpp"

namespace graphmart::federation {
namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string term_text(const PatternTerm& t) {
  switch (t.kind) {
    case PatternTerm::Kind::kVariable:
      return "?" + t.text;
    case PatternTerm::Kind::kLiteral:
      return "\"" + t.text + "\"";
    case PatternTerm::Kind::kResource:
      break;
  }
  return t.text;
}

// Matches one pattern position against a concrete term, extending
// `bindings`; names newly bound go to `added` so the caller can backtrack.
bool unify(const PatternTerm& pattern, const Term& term,
           std::map<std::string, Term>& bindings, std::vector<std::string>& added) {
  switch (pattern.kind) {
    case PatternTerm::Kind::kResource:
      return !term.is_literal && pattern.text == term.text;
    case PatternTerm::Kind::kLiteral:
      return term.is_literal && pattern.text == term.text;
    case PatternTerm::Kind::kVariable:
      break;
  }
  auto [it, inserted] = bindings.try_emplace(pattern.text, term);
  if (inserted) {
    added.push_back(pattern.text);
    return true;
  }
  return it->second == term;
}

bool match_pattern(const TriplePattern& pattern, const TripleAtom& triple,
                   std::map<std::string, Term>& bindings, std::vector<std::string>& added) {
  const std::size_t before = added.size();
  if (unify(pattern.subject, Term{triple.subject, false}, bindings, added) &&
      unify(pattern.predicate, Term{triple.predicate, false}, bindings, added) &&
      unify(pattern.object, Term{triple.object, triple.object_is_literal}, bindings, added)) {
    return true;
  }
  while (added.size() > before) {
    bindings.erase(added.back());
    added.pop_back();
  }
  return false;
}

}  // namespace

std::string TriplePattern::text() const {
  return term_text(subject) + " " + term_text(predicate) + " " + term_text(object) + " .";
}

bool MetadataFilter::passes(const market::DataProduct& product) const {
  auto it = product.metadata.find(key);
  if (it == product.metadata.end() || it->second.kind != value.kind) return false;
  int cmp;
  if (value.kind == MetaValue::Kind::kNumber) {
    cmp = it->second.number < value.number ? -1 : it->second.number > value.number ? 1 : 0;
  } else {
    cmp = it->second.text.compare(value.text);
    cmp = cmp < 0 ? -1 : cmp > 0 ? 1 : 0;
  }
  switch (op) {
    case Op::kEq:
      return cmp == 0;
    case Op::kNe:
      return cmp != 0;
    case Op::kLt:
      return cmp < 0;
    case Op::kLe:
      return cmp <= 0;
    case Op::kGt:
      return cmp > 0;
    case Op::kGe:
      return cmp >= 0;
  }
  return false;
}

void BGPQuery::validate() const {
  if (patterns.empty()) throw InvalidProblem("query has no patterns");
  std::set<std::string> seen;
  for (const TriplePattern& p : patterns) {
    for (const PatternTerm* t : {&p.subject, &p.predicate, &p.object}) {
      if (t->is_variable()) seen.insert(t->text);
    }
  }
  for (const std::string& v : projected_vars) {
    if (!seen.count(v)) {
      throw InvalidProblem("projected variable ?" + v + " occurs in no pattern");
    }
  }
}

std::string rewrite_pattern(const TriplePattern& pattern, int fresh_index) {
  const std::string i = std::to_string(fresh_index);
  return "GRAPH ?graph_" + i + " { " + pattern.text() + " } ?product_" + i +
         " market:contains ?graph_" + i + " .";
}

std::vector<std::string> rewrite_query(const BGPQuery& query) {
  std::set<std::string> vars;
  for (const TriplePattern& p : query.patterns) {
    for (const PatternTerm* t : {&p.subject, &p.predicate, &p.object}) {
      if (t->is_variable()) vars.insert(t->text);
    }
  }
  for (const std::string& v : query.projected_vars) vars.insert(v);

  std::vector<std::string> out;
  int index = 0;
  for (const TriplePattern& p : query.patterns) {
    do {
      ++index;
    } while (vars.count("graph_" + std::to_string(index)) ||
             vars.count("product_" + std::to_string(index)));
    out.push_back(rewrite_pattern(p, index));
  }
  return out;
}

std::string strip_rewritten(const std::string& rewritten) {
  const std::string head = "GRAPH ?graph_";
  if (rewritten.rfind(head, 0) != 0) throw Error("not a rewritten pattern: " + rewritten);
  std::size_t pos = head.size();
  std::size_t digits = pos;
  while (digits < rewritten.size() && std::isdigit(static_cast<unsigned char>(rewritten[digits]))) {
    ++digits;
  }
  if (digits == pos) throw Error("not a rewritten pattern: " + rewritten);
  const std::string index = rewritten.substr(pos, digits - pos);
  const std::string open = " { ";
  if (rewritten.compare(digits, open.size(), open) != 0) {
    throw Error("not a rewritten pattern: " + rewritten);
  }
  const std::string tail =
      " } ?product_" + index + " market:contains ?graph_" + index + " .";
  if (rewritten.size() < digits + open.size() + tail.size() ||
      rewritten.compare(rewritten.size() - tail.size(), tail.size(), tail) != 0) {
    throw Error("not a rewritten pattern: " + rewritten);
  }
  const std::size_t start = digits + open.size();
  return rewritten.substr(start, rewritten.size() - tail.size() - start);
}

QueryAnswer evaluate(const BGPQuery& query, std::span<const Endpoint> federation,
                     std::span<const market::DataProduct> catalog) {
  query.validate();

  std::map<std::string, const NamedGraph*> graphs;
  for (const Endpoint& e : federation) {
    for (const NamedGraph& g : e.graphs) graphs.emplace(g.graph_id, &g);
  }

  // Triples supplied by filter-passing products; only these can match.
  std::map<TripleAtom, std::vector<std::string>> suppliers;
  for (const market::DataProduct& product : catalog) {
    bool passes = true;
    for (const MetadataFilter& f : query.filters) passes = passes && f.passes(product);
    for (const std::string& gid : product.graph_ids) {
      auto it = graphs.find(gid);
      if (it == graphs.end()) {
        throw UnknownGraph("product '" + product.product_id + "' references unknown graph '" +
                           gid + "'");
      }
      if (!passes) continue;
      for (const TripleAtom& t : it->second->triples) {
        std::vector<std::string>& list = suppliers[t];
        if (std::find(list.begin(), list.end(), product.product_id) == list.end()) {
          list.push_back(product.product_id);
        }
      }
    }
  }
  for (auto& [triple, list] : suppliers) std::sort(list.begin(), list.end());

  // Candidates per pattern against constants only; join cheapest-first.
  const std::size_t np = query.patterns.size();
  std::vector<std::vector<const TripleAtom*>> candidates(np);
  for (std::size_t pi = 0; pi < np; ++pi) {
    for (const auto& [triple, list] : suppliers) {
      std::map<std::string, Term> bindings;
      std::vector<std::string> added;
      if (match_pattern(query.patterns[pi], triple, bindings, added)) {
        candidates[pi].push_back(&triple);
      }
    }
  }
  std::vector<std::size_t> order(np);
  for (std::size_t i = 0; i < np; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&candidates](std::size_t a, std::size_t b) {
    return candidates[a].size() < candidates[b].size();
  });

  std::set<AnswerRow> rows;
  std::map<std::string, Term> bindings;
  std::vector<const TripleAtom*> picked(np, nullptr);

  auto emit = [&] {
    AnswerRow row;
    for (const std::string& v : query.projected_vars) row.bindings.push_back(bindings.at(v));
    for (std::size_t pi = 0; pi < np; ++pi) {
      row.matches.push_back({*picked[pi], suppliers.at(*picked[pi])});
    }
    rows.insert(std::move(row));
  };

  auto join = [&](auto&& self, std::size_t depth) -> void {
    if (depth == np) {
      emit();
      return;
    }
    const std::size_t pi = order[depth];
    for (const TripleAtom* triple : candidates[pi]) {
      std::vector<std::string> added;
      if (match_pattern(query.patterns[pi], *triple, bindings, added)) {
        picked[pi] = triple;
        self(self, depth + 1);
        for (const std::string& name : added) bindings.erase(name);
      }
    }
  };
  join(join, 0);

  QueryAnswer answer;
  answer.vars = query.projected_vars;
  answer.rows.assign(rows.begin(), rows.end());
  return answer;
}

std::vector<Endpoint> load_graphs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");

  Endpoint endpoint;
  endpoint.endpoint_id = path;
  std::map<std::string, std::size_t> graph_index;

  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;

    // subject predicate object graph, object optionally a quoted literal.
    std::size_t pos = 0;
    auto next_token = [&](bool allow_quoted) -> std::pair<std::string, bool> {
      while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
      if (pos >= line.size()) throw ParseError(path, lineno, "expected 4 fields");
      if (allow_quoted && line[pos] == '"') {
        const std::size_t close = line.find('"', pos + 1);
        if (close == std::string::npos) throw ParseError(path, lineno, "unterminated literal");
        std::string text = line.substr(pos + 1, close - pos - 1);
        pos = close + 1;
        return {std::move(text), true};
      }
      std::size_t end = pos;
      while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
      std::string text = line.substr(pos, end - pos);
      pos = end;
      return {std::move(text), false};
    };

    TripleAtom t;
    t.subject = next_token(false).first;
    t.predicate = next_token(false).first;
    auto [object, quoted] = next_token(true);
    t.object = std::move(object);
    t.object_is_literal = quoted;
    const std::string graph_id = next_token(false).first;
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos != line.size()) throw ParseError(path, lineno, "trailing content after graph id");
    if (t.subject.empty() || t.predicate.empty() || (t.object.empty() && !t.object_is_literal)) {
      throw ParseError(path, lineno, "empty field");
    }

    auto [it, inserted] = graph_index.try_emplace(graph_id, endpoint.graphs.size());
    if (inserted) endpoint.graphs.push_back({graph_id, {}});
    endpoint.graphs[it->second].triples.push_back(std::move(t));
  }
  if (endpoint.graphs.empty()) return {};
  return {std::move(endpoint)};
}

}  // namespace graphmart::federation
