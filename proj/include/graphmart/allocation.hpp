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
// The allocation core: the normalized optimization instance and the three
// rules that solve it (an exact branch-and-bound, the greedy heuristic,
// and a subset-enumeration oracle). Solvers are pure functions of
// (problem, config); concurrent solves are safe.

#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <vector>

#include "graphmart/market.hpp"
#include "graphmart/money.hpp"

namespace graphmart::allocation {

// The normalized instance. Mapping j is worth values[j] and requires the
// triple index set required[j] (0-based, sorted, unique, non-empty); buying
// triple i costs prices[i]; total payment may not exceed budget.
struct AllocationProblem {
  std::vector<Money> values;               // per mapping
  std::vector<Money> prices;               // per triple
  std::vector<std::vector<int>> required;  // per mapping: triple index sets
  Money budget;

  int num_mappings() const { return static_cast<int>(values.size()); }
  int num_triples() const { return static_cast<int>(prices.size()); }

  // Throws InvalidProblem unless: |values| == |required|, every index set is
  // non-empty, sorted, unique and in range, every triple is required by at
  // least one mapping, and all money amounts are non-negative.
  void validate() const;

  // Exact total price of a union of required sets, each triple counted once.
  Money union_price(std::span<const int> chosen_mappings) const;
};

struct SolverConfig {
  std::chrono::milliseconds timeout{60000};
  std::uint64_t seed = 0;  // reserved for parallel subtree exploration
  Money gap_tolerance{};   // informational; optimality is proven to gap 0
};

// A solved allocation. `chosen` are mapping indices, `purchased` is exactly
// the union of their required sets (both sorted ascending). payment is the
// sum of purchased prices; utility is the value sum minus payment.
struct AllocationResult {
  std::vector<int> chosen;
  std::vector<int> purchased;
  Money payment;
  Money utility;
};

struct ExactResult {
  AllocationResult allocation;
  bool optimal = false;     // proven optimal within the timeout
  double upper_bound = 0;   // best dual bound, minor units; equals utility when optimal
  std::uint64_t nodes = 0;  // search nodes explored
};

// Derives purchased/payment/utility from a chosen set.
AllocationResult result_from_chosen(const AllocationProblem& problem,
                                    std::vector<int> chosen);

// Normalizes a summary plus a linear valuation into an instance: triple
// indices are assigned over distinct anonymous ids in first-appearance
// order, prices copied from triple_info. Throws MissingValue if the
// valuation does not cover every mapping index (diminishing valuations
// carry no per-mapping values and are rejected here; use the greedy
// overload that consumes the schedule directly).
AllocationProblem build_problem(const market::Summary& summary,
                                const market::Valuation& valuation, Money budget);

// Maximizes total value minus payment subject to the budget, exactly.
// Branch and bound over mapping variables; the dual bound is a Lagrangian
// relaxation of the budget constraint whose inner problem is a maximum-
// closure min-cut (see exact_solver.cpp). On timeout the best incumbent is
// returned with optimal=false, never an error.
ExactResult solve_exact(const AllocationProblem& problem, const SolverConfig& config);

// One pass of the ratio-greedy rule: repeatedly allocate the mapping with
// the highest residual-utility / residual-price ratio among those that fit
// the budget and have non-negative residual utility. A zero residual price
// ranks above every finite ratio; all ties break toward the lowest index.
AllocationResult solve_greedy(const AllocationProblem& problem);

// Greedy under a diminishing valuation: problem.values is ignored and the
// m-th allocated mapping is valued at schedule[m] (0 beyond the end).
AllocationResult solve_greedy(const AllocationProblem& problem,
                              std::span<const Money> schedule);

// Enumerates all 2^k mapping subsets and returns the best feasible one.
// Ties break toward fewer mappings, then lexicographically smaller sorted
// index sequence. Throws TooLarge for k > 25.
AllocationResult brute_force(const AllocationProblem& problem);

inline constexpr int kBruteForceMaxMappings = 25;

}  // namespace graphmart::allocation
