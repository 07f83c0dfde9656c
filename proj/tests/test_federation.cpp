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
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "graphmart/errors.hpp"
#include "graphmart/federation.hpp"
#include "graphmart/market.hpp"
#include "graphmart/rng.hpp"

namespace graphmart::federation {
namespace {

using market::DataProduct;

Money cents(std::int64_t c) { return Money::from_minor(c); }

TripleAtom triple(std::string s, std::string p, std::string o, bool lit = false) {
  return TripleAtom{std::move(s), std::move(p), std::move(o), lit};
}

DataProduct product(std::string id, std::string provider, std::int64_t price,
                    std::vector<std::string> graphs) {
  DataProduct d;
  d.product_id = std::move(id);
  d.provider_id = std::move(provider);
  d.price_per_triple = cents(price);
  d.graph_ids = std::move(graphs);
  return d;
}

// The suggestion-lookup scenario: product pa sells success ratings at ten
// cents per triple; pb and pc sell disjoint four-triple suggestion records
// at two and three cents. Joining yields one mapping per suggestion, priced
// eighteen and twenty-two cents.
struct SuggestionFixture {
  std::vector<Endpoint> federation;
  std::vector<DataProduct> catalog;
  BGPQuery query;
};

SuggestionFixture suggestion_fixture() {
  SuggestionFixture f;
  NamedGraph ga{"ga",
                {triple("ex:sug1", "ex:success_rate", "0.9", true),
                 triple("ex:sug2", "ex:success_rate", "0.8", true)}};
  NamedGraph gb{"gb",
                {triple("ex:sug1", "ex:err_code", "0x12345678", true),
                 triple("ex:sug1", "ex:program", "ex:hack_ide"),
                 triple("ex:sug1", "ex:language", "ex:java"),
                 triple("ex:sug1", "ex:os", "ex:os_x")}};
  NamedGraph gc{"gc",
                {triple("ex:sug2", "ex:err_code", "0x12345678", true),
                 triple("ex:sug2", "ex:program", "ex:hack_ide"),
                 triple("ex:sug2", "ex:language", "ex:java"),
                 triple("ex:sug2", "ex:os", "ex:os_x")}};
  f.federation = {Endpoint{"host0", {ga, gb}}, Endpoint{"host1", {gc}}};
  f.catalog = {product("pa", "provA", 10, {"ga"}), product("pb", "provB", 2, {"gb"}),
               product("pc", "provC", 3, {"gc"})};

  f.query.projected_vars = {"suggestion", "rate"};
  f.query.patterns = {
      {PatternTerm::var("suggestion"), PatternTerm::resource("ex:success_rate"),
       PatternTerm::var("rate")},
      {PatternTerm::var("suggestion"), PatternTerm::resource("ex:err_code"),
       PatternTerm::literal("0x12345678")},
      {PatternTerm::var("suggestion"), PatternTerm::resource("ex:program"),
       PatternTerm::resource("ex:hack_ide")},
      {PatternTerm::var("suggestion"), PatternTerm::resource("ex:language"),
       PatternTerm::resource("ex:java")},
      {PatternTerm::var("suggestion"), PatternTerm::resource("ex:os"),
       PatternTerm::resource("ex:os_x")},
  };
  return f;
}

TEST_CASE("rewrite_pattern emits the GRAPH wrapper form") {
  const TriplePattern p{PatternTerm::var("hotel"), PatternTerm::resource("ex:name"),
                        PatternTerm::literal("Hotel California")};
  CHECK(rewrite_pattern(p, 1) ==
        "GRAPH ?graph_1 { ?hotel ex:name \"Hotel California\" . } "
        "?product_1 market:contains ?graph_1 .");
  CHECK(rewrite_pattern(p, 7) ==
        "GRAPH ?graph_7 { ?hotel ex:name \"Hotel California\" . } "
        "?product_7 market:contains ?graph_7 .");
}

TEST_CASE("rewrite_query numbers patterns and avoids clashes") {
  BGPQuery q;
  q.projected_vars = {"a"};
  q.patterns = {{PatternTerm::var("a"), PatternTerm::resource("ex:p"),
                 PatternTerm::resource("ex:o")},
                {PatternTerm::var("a"), PatternTerm::resource("ex:q"),
                 PatternTerm::var("b")}};
  const auto lines = rewrite_query(q);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] ==
        "GRAPH ?graph_1 { ?a ex:p ex:o . } ?product_1 market:contains ?graph_1 .");
  CHECK(lines[1] ==
        "GRAPH ?graph_2 { ?a ex:q ?b . } ?product_2 market:contains ?graph_2 .");

  SUBCASE("indices already used by query variables are skipped") {
    q.patterns[1].object = PatternTerm::var("graph_1");
    const auto shifted = rewrite_query(q);
    CHECK(shifted[0].find("?graph_2 ") != std::string::npos);
    CHECK(shifted[1].find("?graph_3 ") != std::string::npos);
  }
}

TEST_CASE("strip_rewritten inverts the wrapper") {
  const SuggestionFixture f = suggestion_fixture();
  for (const auto& pattern : f.query.patterns) {
    for (int idx : {1, 3, 12}) {
      CHECK(strip_rewritten(rewrite_pattern(pattern, idx)) == pattern.text());
    }
  }
  CHECK_THROWS_AS(strip_rewritten("SELECT * WHERE { ?s ?p ?o }"), Error);
  CHECK_THROWS_AS(strip_rewritten(""), Error);
}

TEST_CASE("evaluate joins across products with provenance") {
  const SuggestionFixture f = suggestion_fixture();
  f.query.validate();
  const QueryAnswer answer = evaluate(f.query, f.federation, f.catalog);
  REQUIRE(answer.vars == std::vector<std::string>{"suggestion", "rate"});
  REQUIRE(answer.rows.size() == 2);

  // Canonical row order sorts by bindings: sug1 before sug2.
  CHECK(answer.rows[0].bindings[0] == Term{"ex:sug1", false});
  CHECK(answer.rows[0].bindings[1] == Term{"0.9", true});
  CHECK(answer.rows[1].bindings[0] == Term{"ex:sug2", false});
  CHECK(answer.rows[1].bindings[1] == Term{"0.8", true});

  // Provenance: rating triples come from pa, record triples from pb or pc.
  for (const auto& row : answer.rows) {
    REQUIRE(row.matches.size() == 5);
    CHECK(row.matches[0].product_ids == std::vector<std::string>{"pa"});
    CHECK(row.required_triples().size() == 5);
  }
  CHECK(answer.rows[0].matches[1].product_ids == std::vector<std::string>{"pb"});
  CHECK(answer.rows[1].matches[1].product_ids == std::vector<std::string>{"pc"});

  // Cheapest-offer pricing of the two mappings: eighteen and twenty-two
  // cents, via the providers of pb and pc.
  const auto resolved =
      market::resolve_cheapest_offers(market::offers_from_answer(answer, f.catalog));
  Money row0{};
  for (const auto& t : answer.rows[0].required_triples()) row0 = row0 + resolved.at(t).price;
  Money row1{};
  for (const auto& t : answer.rows[1].required_triples()) row1 = row1 + resolved.at(t).price;
  CHECK(row0 == cents(18));
  CHECK(row1 == cents(22));
}

TEST_CASE("filters restrict supplying products") {
  SuggestionFixture f = suggestion_fixture();
  f.catalog[1].metadata["freshness"] = MetaValue::num(30);
  f.catalog[2].metadata["freshness"] = MetaValue::num(5);
  f.catalog[0].metadata["freshness"] = MetaValue::num(10);

  MetadataFilter fresh{"freshness", MetadataFilter::Op::kLe, MetaValue::num(10)};
  f.query.filters.push_back(fresh);

  // pb fails the filter, so only the sug2 mapping survives.
  const QueryAnswer answer = evaluate(f.query, f.federation, f.catalog);
  REQUIRE(answer.rows.size() == 1);
  CHECK(answer.rows[0].bindings[0] == Term{"ex:sug2", false});

  SUBCASE("products lacking the key fail the filter") {
    f.catalog[2].metadata.erase("freshness");
    CHECK(evaluate(f.query, f.federation, f.catalog).rows.empty());
  }
  SUBCASE("string comparisons") {
    f.query.filters[0] = {"region", MetadataFilter::Op::kEq, MetaValue::str("eu")};
    f.catalog[0].metadata["region"] = MetaValue::str("eu");
    f.catalog[1].metadata["region"] = MetaValue::str("eu");
    f.catalog[2].metadata["region"] = MetaValue::str("us");
    const QueryAnswer only_b = evaluate(f.query, f.federation, f.catalog);
    REQUIRE(only_b.rows.size() == 1);
    CHECK(only_b.rows[0].bindings[0] == Term{"ex:sug1", false});
  }
  SUBCASE("kind mismatch never passes") {
    f.query.filters[0] = {"freshness", MetadataFilter::Op::kEq, MetaValue::str("10")};
    CHECK(evaluate(f.query, f.federation, f.catalog).rows.empty());
  }
}

TEST_CASE("evaluate merges duplicate supply and rejects unknown graphs") {
  SuggestionFixture f = suggestion_fixture();
  SUBCASE("second product over the same graph becomes a second supplier") {
    f.catalog.push_back(product("pa2", "provA2", 12, {"ga"}));
    const QueryAnswer answer = evaluate(f.query, f.federation, f.catalog);
    REQUIRE(answer.rows.size() == 2);
    CHECK(answer.rows[0].matches[0].product_ids == std::vector<std::string>{"pa", "pa2"});
  }
  SUBCASE("unknown graph reference") {
    f.catalog[0].graph_ids.push_back("missing_graph");
    CHECK_THROWS_AS(evaluate(f.query, f.federation, f.catalog), UnknownGraph);
  }
  SUBCASE("unlisted graphs supply nothing") {
    f.catalog.erase(f.catalog.begin());  // drop pa entirely
    CHECK(evaluate(f.query, f.federation, f.catalog).rows.empty());
  }
}

TEST_CASE("query validation") {
  BGPQuery q;
  q.projected_vars = {"x"};
  CHECK_THROWS_AS(q.validate(), InvalidProblem);  // no patterns
  q.patterns = {{PatternTerm::var("y"), PatternTerm::resource("p"),
                 PatternTerm::resource("o")}};
  CHECK_THROWS_AS(q.validate(), InvalidProblem);  // x unbound
  q.projected_vars = {"y"};
  CHECK_NOTHROW(q.validate());
}

// Reference evaluator: enumerate every assignment of catalog-supplied
// triples to patterns, unify naively, project, dedup. Independent of the
// candidate-indexed join in the library.
QueryAnswer reference_evaluate(const BGPQuery& query, std::span<const Endpoint> federation,
                               std::span<const market::DataProduct> catalog) {
  std::map<std::string, const NamedGraph*> graphs;
  for (const auto& e : federation)
    for (const auto& g : e.graphs) graphs.emplace(g.graph_id, &g);
  std::map<TripleAtom, std::set<std::string>> supply;
  for (const auto& p : catalog) {
    bool passes = true;
    for (const auto& f : query.filters) passes = passes && f.passes(p);
    if (!passes) continue;
    for (const auto& gid : p.graph_ids) {
      for (const auto& t : graphs.at(gid)->triples) supply[t].insert(p.product_id);
    }
  }
  std::vector<std::pair<TripleAtom, std::vector<std::string>>> pool;
  for (const auto& [t, ids] : supply) pool.emplace_back(t, std::vector<std::string>(ids.begin(), ids.end()));

  std::set<AnswerRow> rows;
  std::map<std::string, Term> binding;
  std::vector<PatternMatch> matches;
  auto term_of = [&](const PatternTerm& pt, const std::string& text, bool lit) {
    if (pt.kind == PatternTerm::Kind::kVariable) return true;
    return pt.text == text && (pt.kind == PatternTerm::Kind::kLiteral) == lit;
  };
  auto bind = [&](const PatternTerm& pt, const std::string& text, bool lit,
                  std::vector<std::string>& added) {
    if (!pt.is_variable()) return term_of(pt, text, lit);
    auto it = binding.find(pt.text);
    if (it != binding.end()) return it->second == Term{text, lit};
    binding.emplace(pt.text, Term{text, lit});
    added.push_back(pt.text);
    return true;
  };
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == query.patterns.size()) {
      AnswerRow row;
      for (const auto& v : query.projected_vars) row.bindings.push_back(binding.at(v));
      row.matches = matches;
      rows.insert(row);
      return;
    }
    for (const auto& [t, ids] : pool) {
      std::vector<std::string> added;
      const auto& pat = query.patterns[i];
      if (bind(pat.subject, t.subject, false, added) &&
          bind(pat.predicate, t.predicate, false, added) &&
          bind(pat.object, t.object, t.object_is_literal, added)) {
        matches.push_back({t, ids});
        rec(i + 1);
        matches.pop_back();
      }
      for (const auto& v : added) binding.erase(v);
    }
  };
  rec(0);
  QueryAnswer answer;
  answer.vars = query.projected_vars;
  answer.rows.assign(rows.begin(), rows.end());
  return answer;
}

TEST_CASE("evaluate agrees with a brute-force reference") {
  const std::vector<std::string> subjects = {"ex:a", "ex:b", "ex:c"};
  const std::vector<std::string> predicates = {"ex:p", "ex:q"};
  const std::vector<std::string> objects = {"ex:a", "ex:x", "lit1"};
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    Rng rng = substream(seed, "bgp");
    // Random triples spread over two graphs, two products over them.
    NamedGraph g0{"g0", {}};
    NamedGraph g1{"g1", {}};
    const int count = 4 + static_cast<int>(rng.below(10));
    for (int i = 0; i < count; ++i) {
      const std::string o = objects[rng.below(objects.size())];
      TripleAtom t{subjects[rng.below(subjects.size())],
                   predicates[rng.below(predicates.size())], o, o == "lit1"};
      (rng.below(2) == 0 ? g0 : g1).triples.push_back(t);
    }
    const std::vector<Endpoint> federation = {Endpoint{"e", {g0, g1}}};
    const std::vector<DataProduct> catalog = {product("p0", "prov0", 2, {"g0"}),
                                              product("p1", "prov1", 3, {"g1"})};

    // Random 2..3-pattern query over shared variables.
    BGPQuery query;
    const int width = 2 + static_cast<int>(rng.below(2));
    for (int i = 0; i < width; ++i) {
      auto pick_subject = [&]() {
        return rng.below(2) == 0 ? PatternTerm::var("s")
                                 : PatternTerm::resource(subjects[rng.below(subjects.size())]);
      };
      auto pick_object = [&]() {
        const auto roll = rng.below(3);
        if (roll == 0) return PatternTerm::var("o" + std::to_string(i));
        if (roll == 1) return PatternTerm::var("o");
        const std::string o = objects[rng.below(objects.size())];
        return o == "lit1" ? PatternTerm::literal(o) : PatternTerm::resource(o);
      };
      query.patterns.push_back(
          {pick_subject(), PatternTerm::resource(predicates[rng.below(predicates.size())]),
           pick_object()});
    }
    std::set<std::string> vars;
    for (const auto& p : query.patterns) {
      for (const auto* t : {&p.subject, &p.predicate, &p.object}) {
        if (t->is_variable()) vars.insert(t->text);
      }
    }
    if (vars.empty()) continue;
    query.projected_vars.assign(vars.begin(), vars.end());

    const QueryAnswer got = evaluate(query, federation, catalog);
    const QueryAnswer want = reference_evaluate(query, federation, catalog);
    CAPTURE(seed);
    REQUIRE(got.rows.size() == want.rows.size());
    CHECK(got.rows == want.rows);
  }
}

TEST_CASE("load_graphs parses quad files") {
  const std::string path = "/tmp/graphmart_test_quads.nq";
  {
    std::ofstream out(path);
    out << "# fixture\n";
    out << "ex:s ex:p ex:o g0\n";
    out << "\n";
    out << "ex:s ex:name \"Hotel California\" g0\n";
    out << "ex:t ex:p ex:o g1\n";
  }
  const auto endpoints = load_graphs(path);
  REQUIRE(endpoints.size() == 1);
  CHECK(endpoints[0].endpoint_id == path);
  REQUIRE(endpoints[0].graphs.size() == 2);
  CHECK(endpoints[0].graphs[0].graph_id == "g0");
  REQUIRE(endpoints[0].graphs[0].triples.size() == 2);
  CHECK(endpoints[0].graphs[0].triples[1] ==
        triple("ex:s", "ex:name", "Hotel California", true));
  CHECK(endpoints[0].graphs[1].graph_id == "g1");

  SUBCASE("short line reports its number") {
    {
      std::ofstream out(path);
      out << "ex:s ex:p ex:o g0\n";
      out << "ex:s ex:p\n";
    }
    try {
      load_graphs(path);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("trailing garbage is rejected") {
    {
      std::ofstream out(path);
      out << "ex:s ex:p ex:o g0 extra\n";
    }
    CHECK_THROWS_AS(load_graphs(path), ParseError);
  }
  SUBCASE("empty file loads no endpoints") {
    { std::ofstream out(path); }
    CHECK(load_graphs(path).empty());
  }
  std::remove(path.c_str());
}

}  // namespace
}  // namespace graphmart::federation
