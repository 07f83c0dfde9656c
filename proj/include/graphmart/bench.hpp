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

#include <chrono>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graphmart/allocation.hpp"
#include "graphmart/scenario.hpp"

namespace graphmart::bench {

enum class Rule { kExact, kGreedy, kBrute };

std::string rule_name(Rule rule);
std::optional<Rule> parse_rule(const std::string& name);

// Instance handed to the harness. `s` and `d` are the scenario shape when
// known; hand-built instances leave d negative (emitted as an empty field).
struct BenchInstance {
  std::string id;
  int s = 0;
  double d = -1;
  allocation::AllocationProblem problem;

  static BenchInstance from_generated(const scenario::GeneratedInstance& g);
};

struct BenchRecord {
  std::string instance_id;
  int s = 0;
  double d = -1;
  Rule rule = Rule::kGreedy;
  std::chrono::nanoseconds runtime{0};  // wall clock around the solve call only
  Money utility;
  Money payment;
  bool optimal = false;  // greedy/brute: semantically n/a, recorded as false/true
  std::chrono::milliseconds timeout{0};
  std::string error;  // per-record solver fault, empty on success
};

struct RunOptions {
  std::vector<Rule> rules;
  allocation::SolverConfig config;
  int workers = 1;  // instances solved in parallel; keep <= physical cores
};

// Solves every (instance, rule) pair once. Exact-solver timeouts are
// recorded with optimal=false and never abort the suite. Records come back
// sorted by (instance_id, rule name).
std::vector<BenchRecord> run(std::span<const BenchInstance> instances,
                             const RunOptions& options);

struct RatioRow {
  std::string instance_id;
  int s = 0;
  double d = -1;
  Money greedy_utility;
  Money exact_utility;
  double ratio = 0;
  bool degenerate = false;  // exact utility 0 while greedy utility nonzero
};

// Per-instance greedy/exact utility ratio. Requires one greedy record and
// one proven-optimal exact record per instance (throws MissingPair
// otherwise). A 0/0 pair reports ratio 1.
std::vector<RatioRow> utility_ratio(std::span<const BenchRecord> records);

// CSV schema (fixed column order):
//   instance_id,s,d,rule,runtime_ms,utility_minor,payment_minor,optimal,timeout_ms,error
// Metadata header rows are '#'-prefixed key=value lines.
void write_csv(std::ostream& out, std::span<const BenchRecord> records,
               std::span<const std::pair<std::string, std::string>> metadata);

void write_ratio_csv(std::ostream& out, std::span<const RatioRow> rows);

}  // namespace graphmart::bench
