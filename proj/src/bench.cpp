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

#include "graphmart/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <map>
#include <ostream>
#include <thread>

#include "graphmart/errors.hpp"

namespace graphmart::bench {
namespace {

std::string format_d(double d) {
  if (d < 0) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", d);
  return buf;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

BenchRecord solve_one(const BenchInstance& instance, Rule rule,
                      const allocation::SolverConfig& config) {
  BenchRecord rec;
  rec.instance_id = instance.id;
  rec.s = instance.s;
  rec.d = instance.d;
  rec.rule = rule;
  rec.timeout = std::chrono::duration_cast<std::chrono::milliseconds>(config.timeout);

  const auto start = std::chrono::steady_clock::now();
  try {
    allocation::AllocationResult result;
    switch (rule) {
      case Rule::kExact: {
        allocation::ExactResult exact = allocation::solve_exact(instance.problem, config);
        result = std::move(exact.allocation);
        rec.optimal = exact.optimal;
        break;
      }
      case Rule::kGreedy:
        result = allocation::solve_greedy(instance.problem);
        break;
      case Rule::kBrute:
        result = allocation::brute_force(instance.problem);
        rec.optimal = true;
        break;
    }
    rec.utility = result.utility;
    rec.payment = result.payment;
  } catch (const Error& e) {
    rec.error = e.what();
  }
  rec.runtime = std::chrono::steady_clock::now() - start;
  return rec;
}

}  // namespace

std::string rule_name(Rule rule) {
  switch (rule) {
    case Rule::kExact:
      return "exact";
    case Rule::kGreedy:
      return "greedy";
    case Rule::kBrute:
      return "brute";
  }
  return "unknown";
}

std::optional<Rule> parse_rule(const std::string& name) {
  if (name == "exact") return Rule::kExact;
  if (name == "greedy") return Rule::kGreedy;
  if (name == "brute") return Rule::kBrute;
  return std::nullopt;
}

BenchInstance BenchInstance::from_generated(const scenario::GeneratedInstance& g) {
  return {g.id, g.spec.mapping_count, g.spec.diversity, g.problem};
}

std::vector<BenchRecord> run(std::span<const BenchInstance> instances, const RunOptions& options) {
  struct Task {
    const BenchInstance* instance;
    Rule rule;
  };
  std::vector<Task> tasks;
  for (const BenchInstance& instance : instances) {
    for (Rule rule : options.rules) tasks.push_back({&instance, rule});
  }

  std::vector<BenchRecord> records(tasks.size());
  const int workers = std::max(1, options.workers);
  if (workers == 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      records[i] = solve_one(*tasks[i].instance, tasks[i].rule, options.config);
    }
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= tasks.size()) return;
        records[i] = solve_one(*tasks[i].instance, tasks[i].rule, options.config);
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  std::stable_sort(records.begin(), records.end(),
                   [](const BenchRecord& a, const BenchRecord& b) {
                     if (a.instance_id != b.instance_id) return a.instance_id < b.instance_id;
                     return rule_name(a.rule) < rule_name(b.rule);
                   });
  return records;
}

std::vector<RatioRow> utility_ratio(std::span<const BenchRecord> records) {
  std::map<std::string, std::pair<const BenchRecord*, const BenchRecord*>> by_instance;
  for (const BenchRecord& rec : records) {
    if (!rec.error.empty()) continue;
    auto& [greedy, exact] = by_instance[rec.instance_id];
    if (rec.rule == Rule::kGreedy) greedy = &rec;
    // Brute-force results count as proven-optimal exact solutions.
    if ((rec.rule == Rule::kExact || rec.rule == Rule::kBrute) && rec.optimal) exact = &rec;
  }

  std::vector<RatioRow> out;
  for (const auto& [id, pair] : by_instance) {
    const auto& [greedy, exact] = pair;
    if (greedy == nullptr || exact == nullptr) {
      throw MissingPair("instance '" + id +
                        "' lacks a greedy record or a proven-optimal exact record");
    }
    RatioRow row;
    row.instance_id = id;
    row.s = greedy->s;
    row.d = greedy->d;
    row.greedy_utility = greedy->utility;
    row.exact_utility = exact->utility;
    if (exact->utility.minor() == 0) {
      row.degenerate = greedy->utility.minor() != 0;
      row.ratio = row.degenerate ? 0.0 : 1.0;
    } else {
      row.ratio = static_cast<double>(greedy->utility.minor()) /
                  static_cast<double>(exact->utility.minor());
    }
    out.push_back(std::move(row));
  }
  return out;
}

void write_csv(std::ostream& out, std::span<const BenchRecord> records,
               std::span<const std::pair<std::string, std::string>> metadata) {
  for (const auto& [key, value] : metadata) out << "# " << key << "=" << value << "\n";
  out << "instance_id,s,d,rule,runtime_ms,utility_minor,payment_minor,optimal,timeout_ms,error\n";
  for (const BenchRecord& rec : records) {
    char runtime[32];
    std::snprintf(runtime, sizeof runtime, "%.3f",
                  static_cast<double>(rec.runtime.count()) / 1e6);
    out << csv_escape(rec.instance_id) << ',' << rec.s << ',' << format_d(rec.d) << ','
        << rule_name(rec.rule) << ',' << runtime << ',' << rec.utility.minor() << ','
        << rec.payment.minor() << ',' << (rec.optimal ? "true" : "false") << ','
        << rec.timeout.count() << ',' << csv_escape(rec.error) << "\n";
  }
}

void write_ratio_csv(std::ostream& out, std::span<const RatioRow> rows) {
  out << "instance_id,s,d,greedy_utility_minor,exact_utility_minor,ratio,degenerate\n";
  for (const RatioRow& row : rows) {
    char ratio[32];
    std::snprintf(ratio, sizeof ratio, "%.6f", row.ratio);
    out << csv_escape(row.instance_id) << ',' << row.s << ',' << format_d(row.d) << ','
        << row.greedy_utility.minor() << ',' << row.exact_utility.minor() << ',' << ratio << ','
        << (row.degenerate ? "true" : "false") << "\n";
  }
}

}  // namespace graphmart::bench
