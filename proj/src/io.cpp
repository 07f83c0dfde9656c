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

#include "graphmart/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "graphmart/errors.hpp"

namespace graphmart::io {
namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// Splits on whitespace; a double-quoted token may contain spaces.
std::vector<std::pair<std::string, bool>> tokenize(const std::string& line,
                                                   const std::string& path, std::size_t lineno) {
  std::vector<std::pair<std::string, bool>> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos >= line.size()) break;
    if (line[pos] == '"') {
      const std::size_t close = line.find('"', pos + 1);
      if (close == std::string::npos) throw ParseError(path, lineno, "unterminated quote");
      tokens.emplace_back(line.substr(pos + 1, close - pos - 1), true);
      pos = close + 1;
    } else {
      // A token may carry an embedded quoted span, as in key="two words".
      std::size_t end = pos;
      while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) {
        if (line[end] == '"') {
          const std::size_t close = line.find('"', end + 1);
          if (close == std::string::npos) throw ParseError(path, lineno, "unterminated quote");
          end = close;
        }
        ++end;
      }
      tokens.emplace_back(line.substr(pos, end - pos), false);
      pos = end;
    }
  }
  return tokens;
}

Money parse_money(const std::string& text, const std::string& path, std::size_t lineno) {
  try {
    return Money::parse(text);
  } catch (const Error&) {
    throw ParseError(path, lineno, "bad money amount '" + text + "'");
  }
}

bool looks_numeric(const std::string& s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t digits = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
  }
  if (digits == 0) return false;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t exp = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++exp;
    if (exp == 0) return false;
  }
  return i == s.size();
}

// A bare numeric token becomes a number; quoting (either of the whole token
// or embedded, as in key="text") forces a string.
MetaValue parse_meta_value(const std::string& text, bool quoted) {
  if (quoted) return MetaValue::str(text);
  if (text.size() >= 2 && text.front() == '"' && text.back() == '"') {
    return MetaValue::str(text.substr(1, text.size() - 2));
  }
  if (looks_numeric(text)) {
    try {
      return MetaValue::num(std::stod(text));
    } catch (const std::logic_error&) {
    }
  }
  return MetaValue::str(text);
}

std::string render_meta_value(const MetaValue& v) {
  if (v.kind == MetaValue::Kind::kNumber) {
    json j = v.number;  // shortest round-trip rendering
    return j.dump();
  }
  return "\"" + v.text + "\"";
}

// Line-oriented reader with a mandatory `#graphmart-<kind> v1` header.
class LineReader {
 public:
  LineReader(const std::string& path, const std::string& kind) : path_(path), in_(path) {
    if (!in_) throw Error("cannot open '" + path + "'");
    std::string raw;
    while (std::getline(in_, raw)) {
      ++lineno_;
      const std::string line = trim(raw);
      if (line.empty()) continue;
      if (line == "#graphmart-" + kind + " v1") return;
      throw ParseError(path_, lineno_, "expected header '#graphmart-" + kind + " v1'");
    }
    throw ParseError(path_, 1, "expected header '#graphmart-" + kind + " v1'");
  }

  // Next non-empty, non-comment line, trimmed.
  bool next(std::string& line) {
    std::string raw;
    while (std::getline(in_, raw)) {
      ++lineno_;
      line = trim(raw);
      if (!line.empty() && line[0] != '#') return true;
    }
    return false;
  }

  std::size_t lineno() const { return lineno_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(path_, lineno_, message);
  }

 private:
  std::string path_;
  std::ifstream in_;
  std::size_t lineno_ = 0;
};

json money_json(Money m) { return m.str(); }

Money money_from_json(const json& j, const std::string& what) {
  if (!j.is_string()) throw Error(what + ": money must be a decimal string");
  try {
    return Money::parse(j.get<std::string>());
  } catch (const Error&) {
    throw Error(what + ": bad money amount '" + j.get<std::string>() + "'");
  }
}

json triple_json(const TripleAtom& t) {
  return json{{"s", t.subject}, {"p", t.predicate}, {"o", t.object}, {"literal", t.object_is_literal}};
}

TripleAtom triple_from_json(const json& j) {
  return {j.at("s").get<std::string>(), j.at("p").get<std::string>(),
          j.at("o").get<std::string>(), j.at("literal").get<bool>()};
}

json meta_json(const MetaValue& v) {
  if (v.kind == MetaValue::Kind::kNumber) return v.number;
  return v.text;
}

MetaValue meta_from_json(const json& j) {
  if (j.is_number()) return MetaValue::num(j.get<double>());
  return MetaValue::str(j.get<std::string>());
}

json parse_document(const std::string& text, const std::string& format) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(format + ": invalid JSON: " + e.what());
  }
  if (!j.is_object() || j.value("format", "") != format || j.value("version", 0) != 1) {
    throw Error("not a " + format + " v1 document");
  }
  return j;
}

}  // namespace

std::vector<market::DataProduct> read_products(const std::string& path) {
  LineReader reader(path, "products");
  std::vector<market::DataProduct> products;
  std::string line;
  while (reader.next(line)) {
    const auto tokens = tokenize(line, reader.path(), reader.lineno());
    if (tokens.size() < 4) {
      reader.fail("expected: <id> <provider> <price> <graphs> [key=value ...]");
    }
    market::DataProduct p;
    p.product_id = tokens[0].first;
    p.provider_id = tokens[1].first;
    p.price_per_triple = parse_money(tokens[2].first, reader.path(), reader.lineno());
    if (p.price_per_triple < kZeroMoney) reader.fail("negative price");
    std::stringstream graphs(tokens[3].first);
    std::string gid;
    while (std::getline(graphs, gid, ',')) {
      if (!gid.empty()) p.graph_ids.push_back(gid);
    }
    if (p.graph_ids.empty()) reader.fail("product serves no graphs");
    for (std::size_t i = 4; i < tokens.size(); ++i) {
      const auto& [token, quoted] = tokens[i];
      const std::size_t eq = token.find('=');
      if (eq == std::string::npos || eq == 0) reader.fail("expected key=value, got '" + token + "'");
      const std::string key = token.substr(0, eq);
      const std::string value = token.substr(eq + 1);
      if (key == "expose") {
        std::stringstream keys(value);
        std::string k;
        while (std::getline(keys, k, ',')) {
          if (!k.empty()) p.exposed_keys.push_back(k);
        }
      } else {
        p.metadata[key] = parse_meta_value(value, quoted);
      }
    }
    for (const market::DataProduct& existing : products) {
      if (existing.product_id == p.product_id) {
        reader.fail("duplicate product id '" + p.product_id + "'");
      }
    }
    products.push_back(std::move(p));
  }
  return products;
}

void write_products(std::ostream& out, std::span<const market::DataProduct> products) {
  out << "#graphmart-products v1\n";
  for (const market::DataProduct& p : products) {
    out << p.product_id << ' ' << p.provider_id << ' ' << p.price_per_triple.str() << ' ';
    for (std::size_t i = 0; i < p.graph_ids.size(); ++i) {
      if (i) out << ',';
      out << p.graph_ids[i];
    }
    for (const auto& [key, value] : p.metadata) {
      out << ' ' << key << '=';
      if (value.kind == MetaValue::Kind::kNumber) {
        out << meta_json(value).dump();
      } else {
        out << '"' << value.text << '"';
      }
    }
    if (!p.exposed_keys.empty()) {
      out << " expose=";
      for (std::size_t i = 0; i < p.exposed_keys.size(); ++i) {
        if (i) out << ',';
        out << p.exposed_keys[i];
      }
    }
    out << "\n";
  }
}

federation::BGPQuery read_query(const std::string& path) {
  LineReader reader(path, "query");
  federation::BGPQuery query;
  bool have_select = false;
  std::string line;
  while (reader.next(line)) {
    auto tokens = tokenize(line, reader.path(), reader.lineno());
    const std::string& verb = tokens[0].first;
    if (verb == "select") {
      if (have_select) reader.fail("duplicate select line");
      have_select = true;
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        const std::string& v = tokens[i].first;
        if (v.size() < 2 || v[0] != '?') reader.fail("projected variables look like ?name");
        query.projected_vars.push_back(v.substr(1));
      }
      if (query.projected_vars.empty()) reader.fail("select needs at least one variable");
    } else if (verb == "pattern") {
      // Optional trailing '.'.
      if (tokens.size() >= 2 && tokens.back().first == "." && !tokens.back().second) {
        tokens.pop_back();
      }
      if (tokens.size() != 4) reader.fail("expected: pattern <subject> <predicate> <object> [.]");
      auto term = [&](std::size_t i, bool object) {
        const auto& [text, quoted] = tokens[i];
        if (quoted) {
          if (!object) reader.fail("literals are only valid in object position");
          return federation::PatternTerm::literal(text);
        }
        if (text.size() >= 2 && text[0] == '?') {
          return federation::PatternTerm::var(text.substr(1));
        }
        return federation::PatternTerm::resource(text);
      };
      query.patterns.push_back({term(1, false), term(2, false), term(3, true)});
    } else if (verb == "filter") {
      if (tokens.size() != 4) reader.fail("expected: filter <key> <op> <value>");
      federation::MetadataFilter f;
      f.key = tokens[1].first;
      const std::string& op = tokens[2].first;
      if (op == "=" || op == "==") {
        f.op = federation::MetadataFilter::Op::kEq;
      } else if (op == "!=") {
        f.op = federation::MetadataFilter::Op::kNe;
      } else if (op == "<") {
        f.op = federation::MetadataFilter::Op::kLt;
      } else if (op == "<=") {
        f.op = federation::MetadataFilter::Op::kLe;
      } else if (op == ">") {
        f.op = federation::MetadataFilter::Op::kGt;
      } else if (op == ">=") {
        f.op = federation::MetadataFilter::Op::kGe;
      } else {
        reader.fail("unknown operator '" + op + "'");
      }
      f.value = parse_meta_value(tokens[3].first, tokens[3].second);
      query.filters.push_back(std::move(f));
    } else {
      reader.fail("unknown directive '" + verb + "'");
    }
  }
  if (!have_select) throw ParseError(path, reader.lineno(), "missing select line");
  try {
    query.validate();
  } catch (const Error& e) {
    throw ParseError(path, reader.lineno(), e.what());
  }
  return query;
}

InstanceFile read_instance(const std::string& path) {
  LineReader reader(path, "instance");
  InstanceFile file;
  bool have_budget = false, have_values = false, have_prices = false;
  std::string line;
  while (reader.next(line)) {
    const auto tokens = tokenize(line, reader.path(), reader.lineno());
    const std::string& verb = tokens[0].first;
    if (verb == "meta") {
      if (tokens.size() != 3) reader.fail("expected: meta <key> <value>");
      const std::string& key = tokens[1].first;
      const std::string& value = tokens[2].first;
      try {
        if (key == "id") {
          file.id = value;
        } else if (key == "s") {
          file.s = std::stoi(value);
        } else if (key == "d") {
          file.d = std::stod(value);
        } else if (key == "seed") {
          file.seed = std::stoull(value);
        } else if (key == "tpm") {
          file.tpm = std::stoi(value);
        } else {
          reader.fail("unknown meta key '" + key + "'");
        }
      } catch (const std::logic_error&) {
        reader.fail("bad meta value '" + value + "'");
      }
    } else if (verb == "budget") {
      if (tokens.size() != 2) reader.fail("expected: budget <amount>");
      file.problem.budget = parse_money(tokens[1].first, reader.path(), reader.lineno());
      have_budget = true;
    } else if (verb == "values" || verb == "prices") {
      std::vector<Money>& dst = verb == "values" ? file.problem.values : file.problem.prices;
      if (!dst.empty()) reader.fail("duplicate " + verb + " line");
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        dst.push_back(parse_money(tokens[i].first, reader.path(), reader.lineno()));
      }
      (verb == "values" ? have_values : have_prices) = true;
    } else if (verb == "require") {
      if (!have_prices) reader.fail("require lines must follow the prices line");
      std::vector<int> set;
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        int idx = 0;
        try {
          idx = std::stoi(tokens[i].first);
        } catch (const std::logic_error&) {
          reader.fail("bad triple index '" + tokens[i].first + "'");
        }
        if (idx < 1 || idx > file.problem.num_triples()) {
          reader.fail("triple index " + std::to_string(idx) + " out of range");
        }
        set.push_back(idx - 1);  // 1-based on disk, 0-based in memory
      }
      std::sort(set.begin(), set.end());
      set.erase(std::unique(set.begin(), set.end()), set.end());
      file.problem.required.push_back(std::move(set));
    } else {
      reader.fail("unknown directive '" + verb + "'");
    }
  }
  if (!have_budget || !have_values || !have_prices) {
    throw ParseError(path, reader.lineno(), "missing budget, values or prices line");
  }
  if (file.problem.required.size() != file.problem.values.size()) {
    throw ParseError(path, reader.lineno(),
                     "expected " + std::to_string(file.problem.values.size()) +
                         " require lines, got " + std::to_string(file.problem.required.size()));
  }
  if (file.s == 0) file.s = file.problem.num_mappings();
  try {
    file.problem.validate();
  } catch (const Error& e) {
    throw ParseError(path, reader.lineno(), e.what());
  }
  return file;
}

void write_instance(std::ostream& out, const InstanceFile& instance) {
  out << "#graphmart-instance v1\n";
  if (!instance.id.empty()) out << "meta id " << instance.id << "\n";
  if (instance.s > 0) out << "meta s " << instance.s << "\n";
  if (instance.d >= 0) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", instance.d);
    out << "meta d " << buf << "\n";
  }
  if (instance.seed) out << "meta seed " << *instance.seed << "\n";
  if (instance.tpm > 0) out << "meta tpm " << instance.tpm << "\n";
  out << "budget " << instance.problem.budget.str() << "\n";
  out << "values";
  for (Money v : instance.problem.values) out << ' ' << v.str();
  out << "\nprices";
  for (Money p : instance.problem.prices) out << ' ' << p.str();
  out << "\n";
  for (const std::vector<int>& set : instance.problem.required) {
    out << "require";
    for (int i : set) out << ' ' << i + 1;
    out << "\n";
  }
}

InstanceFile instance_from_generated(const scenario::GeneratedInstance& g) {
  InstanceFile file;
  file.id = g.id;
  file.s = g.spec.mapping_count;
  file.d = g.spec.diversity;
  file.seed = g.spec.seed;
  file.tpm = g.spec.triples_per_mapping;
  file.problem = g.problem;
  return file;
}

market::Valuation read_valuation(const std::string& path) {
  LineReader reader(path, "valuation");
  std::string kind;
  std::vector<Money> amounts;
  std::string line;
  while (reader.next(line)) {
    const auto tokens = tokenize(line, reader.path(), reader.lineno());
    const std::string& verb = tokens[0].first;
    if (verb == "kind") {
      if (tokens.size() != 2 || (tokens[1].first != "linear" && tokens[1].first != "diminishing")) {
        reader.fail("expected: kind linear|diminishing");
      }
      kind = tokens[1].first;
    } else if (verb == "values" || verb == "schedule") {
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        amounts.push_back(parse_money(tokens[i].first, reader.path(), reader.lineno()));
      }
    } else {
      reader.fail("unknown directive '" + verb + "'");
    }
  }
  if (kind.empty()) throw ParseError(path, reader.lineno(), "missing kind line");
  try {
    return kind == "linear" ? market::Valuation::make_linear(std::move(amounts))
                            : market::Valuation::make_diminishing(std::move(amounts));
  } catch (const Error& e) {
    throw ParseError(path, reader.lineno(), e.what());
  }
}

std::string answer_to_json(const QueryAnswer& answer) {
  json rows = json::array();
  for (const AnswerRow& row : answer.rows) {
    json bindings = json::array();
    for (const Term& t : row.bindings) {
      bindings.push_back({{"text", t.text}, {"literal", t.is_literal}});
    }
    json matches = json::array();
    for (const PatternMatch& m : row.matches) {
      matches.push_back({{"triple", triple_json(m.triple)}, {"products", m.product_ids}});
    }
    rows.push_back({{"bindings", std::move(bindings)}, {"matches", std::move(matches)}});
  }
  json doc{{"format", "graphmart-answer"},
           {"version", 1},
           {"vars", answer.vars},
           {"rows", std::move(rows)}};
  return doc.dump(2) + "\n";
}

QueryAnswer answer_from_json(const std::string& text) {
  const json doc = parse_document(text, "graphmart-answer");
  QueryAnswer answer;
  answer.vars = doc.at("vars").get<std::vector<std::string>>();
  for (const json& jrow : doc.at("rows")) {
    AnswerRow row;
    for (const json& jb : jrow.at("bindings")) {
      row.bindings.push_back({jb.at("text").get<std::string>(), jb.at("literal").get<bool>()});
    }
    for (const json& jm : jrow.at("matches")) {
      PatternMatch m;
      m.triple = triple_from_json(jm.at("triple"));
      m.product_ids = jm.at("products").get<std::vector<std::string>>();
      row.matches.push_back(std::move(m));
    }
    answer.rows.push_back(std::move(row));
  }
  return answer;
}

std::string summary_to_json(const market::Summary& summary) {
  json rows = json::array();
  for (const market::SummaryRow& row : summary.rows) {
    rows.push_back({{"mapping", row.mapping_index}, {"triples", row.triple_ids}});
  }
  json info = json::object();
  for (const auto& [id, ti] : summary.triple_info) {
    json metadata = json::object();
    for (const auto& [key, value] : ti.metadata) metadata[key] = meta_json(value);
    info[id] = {{"price", money_json(ti.price)}, {"metadata", std::move(metadata)}};
  }
  json doc{{"format", "graphmart-summary"},
           {"version", 1},
           {"rows", std::move(rows)},
           {"triple_info", std::move(info)}};
  return doc.dump(2) + "\n";
}

market::Summary summary_from_json(const std::string& text) {
  const json doc = parse_document(text, "graphmart-summary");
  market::Summary summary;
  for (const json& jrow : doc.at("rows")) {
    market::SummaryRow row;
    row.mapping_index = jrow.at("mapping").get<std::size_t>();
    row.triple_ids = jrow.at("triples").get<std::vector<std::string>>();
    summary.rows.push_back(std::move(row));
  }
  for (const auto& [id, jinfo] : doc.at("triple_info").items()) {
    market::TripleInfo info;
    info.price = money_from_json(jinfo.at("price"), "summary");
    for (const auto& [key, jvalue] : jinfo.at("metadata").items()) {
      info.metadata.emplace_back(key, meta_from_json(jvalue));
    }
    summary.triple_info.emplace(id, std::move(info));
  }
  return summary;
}

std::string key_to_json(const market::SummaryKey& key, const market::ResolvedOffers& resolved) {
  json triples = json::object();
  json offers = json::object();
  for (const auto& [id, triple] : key.triples) {
    triples[id] = triple_json(triple);
    auto it = resolved.find(triple);
    if (it == resolved.end()) {
      throw MissingOffer("no resolved offer for triple '" + triple.canonical() + "'");
    }
    offers[id] = {{"price", money_json(it->second.price)}, {"product", it->second.product_id}};
  }
  json doc{{"format", "graphmart-key"},
           {"version", 1},
           {"triples", std::move(triples)},
           {"resolved", std::move(offers)}};
  return doc.dump(2) + "\n";
}

std::pair<market::SummaryKey, market::ResolvedOffers> key_from_json(const std::string& text) {
  const json doc = parse_document(text, "graphmart-key");
  market::SummaryKey key;
  market::ResolvedOffers resolved;
  for (const auto& [id, jtriple] : doc.at("triples").items()) {
    key.triples.emplace(id, triple_from_json(jtriple));
  }
  for (const auto& [id, joffer] : doc.at("resolved").items()) {
    auto it = key.triples.find(id);
    if (it == key.triples.end()) throw Error("key: resolved offer for unknown id '" + id + "'");
    resolved[it->second] = {money_from_json(joffer.at("price"), "key"),
                            joffer.at("product").get<std::string>()};
  }
  return {std::move(key), std::move(resolved)};
}

std::string result_to_json(const allocation::AllocationResult& result, bool optimal,
                           std::span<const std::string> purchased_ids) {
  json chosen = json::array();
  for (int j : result.chosen) chosen.push_back(j + 1);  // 1-based on disk
  json purchased = json::array();
  for (int i : result.purchased) purchased.push_back(i + 1);
  json doc{{"format", "graphmart-result"}, {"version", 1},
           {"chosen", std::move(chosen)},  {"purchased", std::move(purchased)},
           {"payment", money_json(result.payment)}, {"utility", money_json(result.utility)},
           {"optimal", optimal}};
  if (!purchased_ids.empty()) {
    doc["purchased_ids"] = std::vector<std::string>(purchased_ids.begin(), purchased_ids.end());
  }
  return doc.dump(2) + "\n";
}

ResultFile result_from_json(const std::string& text) {
  const json doc = parse_document(text, "graphmart-result");
  ResultFile file;
  for (const json& j : doc.at("chosen")) file.result.chosen.push_back(j.get<int>() - 1);
  for (const json& j : doc.at("purchased")) file.result.purchased.push_back(j.get<int>() - 1);
  file.result.payment = money_from_json(doc.at("payment"), "result");
  file.result.utility = money_from_json(doc.at("utility"), "result");
  file.optimal = doc.at("optimal").get<bool>();
  if (doc.contains("purchased_ids")) {
    file.purchased_ids = doc.at("purchased_ids").get<std::vector<std::string>>();
  }
  return file;
}

std::string settlement_to_json(const std::map<std::string, Money>& settlement) {
  json providers = json::object();
  Money total;
  for (const auto& [provider, amount] : settlement) {
    providers[provider] = money_json(amount);
    total += amount;
  }
  json doc{{"format", "graphmart-settlement"},
           {"version", 1},
           {"providers", std::move(providers)},
           {"total", money_json(total)}};
  return doc.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace graphmart::io
