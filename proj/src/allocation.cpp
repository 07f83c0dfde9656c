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

#include "graphmart/allocation.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <string>

#include "graphmart/errors.hpp"

namespace graphmart::allocation {
namespace {

// ratio(u1, p1) > ratio(u2, p2) with p >= 0, zero price meaning +infinity.
// Cross-multiplication keeps the comparison exact; minor-unit products fit
// comfortably in 128 bits.
bool ratio_greater(Money u1, Money p1, Money u2, Money p2) {
  if (p1.minor() == 0) return p2.minor() != 0;
  if (p2.minor() == 0) return false;
  return static_cast<__int128>(u1.minor()) * p2.minor() >
         static_cast<__int128>(u2.minor()) * p1.minor();
}

}  // namespace

void AllocationProblem::validate() const {
  const int k = num_mappings();
  const int n = num_triples();
  if (static_cast<int>(required.size()) != k) {
    throw InvalidProblem("values and required sets disagree on the mapping count");
  }
  if (budget < kZeroMoney) throw InvalidProblem("negative budget");
  for (Money v : values) {
    if (v < kZeroMoney) throw InvalidProblem("negative mapping value");
  }
  for (Money p : prices) {
    if (p < kZeroMoney) throw InvalidProblem("negative triple price");
  }
  std::vector<char> covered(static_cast<std::size_t>(n), 0);
  for (int j = 0; j < k; ++j) {
    const std::vector<int>& set = required[static_cast<std::size_t>(j)];
    if (set.empty()) {
      throw InvalidProblem("mapping " + std::to_string(j) + " requires no triples");
    }
    int prev = -1;
    for (int i : set) {
      if (i < 0 || i >= n) {
        throw InvalidProblem("mapping " + std::to_string(j) + " requires triple " +
                             std::to_string(i) + " outside [0," + std::to_string(n) + ")");
      }
      if (i <= prev) {
        throw InvalidProblem("mapping " + std::to_string(j) +
                             " has an unsorted or duplicate index set");
      }
      prev = i;
      covered[static_cast<std::size_t>(i)] = 1;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!covered[static_cast<std::size_t>(i)]) {
      throw InvalidProblem("triple " + std::to_string(i) + " is required by no mapping");
    }
  }
}

Money AllocationProblem::union_price(std::span<const int> chosen_mappings) const {
  std::vector<char> seen(prices.size(), 0);
  Money total;
  for (int j : chosen_mappings) {
    for (int i : required[static_cast<std::size_t>(j)]) {
      if (!seen[static_cast<std::size_t>(i)]) {
        seen[static_cast<std::size_t>(i)] = 1;
        total += prices[static_cast<std::size_t>(i)];
      }
    }
  }
  return total;
}

AllocationResult result_from_chosen(const AllocationProblem& problem, std::vector<int> chosen) {
  std::sort(chosen.begin(), chosen.end());
  chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());

  AllocationResult result;
  std::vector<char> seen(problem.prices.size(), 0);
  for (int j : chosen) {
    result.utility += problem.values[static_cast<std::size_t>(j)];
    for (int i : problem.required[static_cast<std::size_t>(j)]) {
      if (!seen[static_cast<std::size_t>(i)]) {
        seen[static_cast<std::size_t>(i)] = 1;
        result.purchased.push_back(i);
        result.payment += problem.prices[static_cast<std::size_t>(i)];
      }
    }
  }
  std::sort(result.purchased.begin(), result.purchased.end());
  result.utility -= result.payment;
  result.chosen = std::move(chosen);
  return result;
}

AllocationProblem build_problem(const market::Summary& summary,
                                const market::Valuation& valuation, Money budget) {
  AllocationProblem problem;
  problem.budget = budget;
  if (valuation.kind != market::Valuation::Kind::kLinear) {
    throw MissingValue("valuation assigns no per-mapping values; use the schedule-based greedy");
  }

  std::map<std::string, int> index;
  for (const market::SummaryRow& row : summary.rows) {
    if (row.mapping_index >= valuation.linear.size()) {
      throw MissingValue("no value for mapping index " + std::to_string(row.mapping_index));
    }
    problem.values.push_back(valuation.linear[row.mapping_index]);
    std::vector<int> set;
    for (const std::string& id : row.triple_ids) {
      auto [it, inserted] = index.try_emplace(id, static_cast<int>(index.size()));
      if (inserted) {
        auto info = summary.triple_info.find(id);
        if (info == summary.triple_info.end()) {
          throw MissingOffer("summary row references unknown triple id '" + id + "'");
        }
        problem.prices.push_back(info->second.price);
      }
      set.push_back(it->second);
    }
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    problem.required.push_back(std::move(set));
  }
  problem.validate();
  return problem;
}

// The ratio-greedy loop. `schedule` is empty for linear valuations (values
// come from the problem); otherwise the m-th allocation is worth
// schedule[m]. Each round is a fresh scan: residual prices shrink as
// purchases accumulate, so ratios must be recomputed, not cached.
static AllocationResult greedy_impl(const AllocationProblem& problem,
                                    std::span<const Money> schedule, bool use_schedule) {
  problem.validate();
  const int k = problem.num_mappings();
  std::vector<char> bought(problem.prices.size(), 0);
  std::vector<char> open(static_cast<std::size_t>(k), 1);

  AllocationResult result;
  int allocated = 0;
  for (;;) {
    int best = -1;
    Money best_u, best_p;
    for (int j = 0; j < k; ++j) {
      if (!open[static_cast<std::size_t>(j)]) continue;
      Money residual;
      for (int i : problem.required[static_cast<std::size_t>(j)]) {
        if (!bought[static_cast<std::size_t>(i)]) residual += problem.prices[static_cast<std::size_t>(i)];
      }
      const Money value = use_schedule
                              ? (static_cast<std::size_t>(allocated) < schedule.size()
                                     ? schedule[static_cast<std::size_t>(allocated)]
                                     : kZeroMoney)
                              : problem.values[static_cast<std::size_t>(j)];
      const Money u = value - residual;
      if (u < kZeroMoney || result.payment + residual > problem.budget) continue;
      if (best < 0 || ratio_greater(u, residual, best_u, best_p)) {
        best = j;
        best_u = u;
        best_p = residual;
        if (residual == kZeroMoney) break;  // +inf ratio, lowest index first
      }
    }
    if (best < 0) break;
    open[static_cast<std::size_t>(best)] = 0;
    result.chosen.push_back(best);
    result.payment += best_p;
    result.utility += best_u;
    for (int i : problem.required[static_cast<std::size_t>(best)]) {
      bought[static_cast<std::size_t>(i)] = 1;
    }
    ++allocated;
  }

  std::sort(result.chosen.begin(), result.chosen.end());
  for (std::size_t i = 0; i < bought.size(); ++i) {
    if (bought[i]) result.purchased.push_back(static_cast<int>(i));
  }
  return result;
}

AllocationResult solve_greedy(const AllocationProblem& problem) {
  return greedy_impl(problem, {}, false);
}

AllocationResult solve_greedy(const AllocationProblem& problem, std::span<const Money> schedule) {
  return greedy_impl(problem, schedule, true);
}

AllocationResult brute_force(const AllocationProblem& problem) {
  problem.validate();
  const int k = problem.num_mappings();
  if (k > kBruteForceMaxMappings) {
    throw TooLarge("brute force over " + std::to_string(k) + " mappings exceeds the guard of " +
                   std::to_string(kBruteForceMaxMappings));
  }

  // Gray-code walk over all subsets; each step flips one mapping and updates
  // per-triple usage counts, so union payments update incrementally.
  std::vector<int> usage(problem.prices.size(), 0);
  std::vector<char> in(static_cast<std::size_t>(k), 0);
  Money payment, value;
  int size = 0;

  std::vector<int> best_chosen;
  Money best_utility;  // empty set: utility 0, always feasible
  int best_size = 0;

  auto current_chosen = [&] {
    std::vector<int> chosen;
    for (int j = 0; j < k; ++j) {
      if (in[static_cast<std::size_t>(j)]) chosen.push_back(j);
    }
    return chosen;
  };
  auto consider = [&] {
    if (payment > problem.budget) return;
    const Money utility = value - payment;
    if (utility < best_utility) return;
    if (utility == best_utility) {
      if (size > best_size) return;
      if (size == best_size) {
        std::vector<int> chosen = current_chosen();
        if (!(chosen < best_chosen)) return;
        best_chosen = std::move(chosen);
        return;
      }
    }
    best_utility = utility;
    best_size = size;
    best_chosen = current_chosen();
  };

  const std::uint64_t total = 1ULL << k;
  for (std::uint64_t step = 1; step < total; ++step) {
    const int j = std::countr_zero(step);  // Gray code flips bit j at this step
    const std::size_t ju = static_cast<std::size_t>(j);
    if (!in[ju]) {
      in[ju] = 1;
      ++size;
      value += problem.values[ju];
      for (int i : problem.required[ju]) {
        if (usage[static_cast<std::size_t>(i)]++ == 0) {
          payment += problem.prices[static_cast<std::size_t>(i)];
        }
      }
    } else {
      in[ju] = 0;
      --size;
      value -= problem.values[ju];
      for (int i : problem.required[ju]) {
        if (--usage[static_cast<std::size_t>(i)] == 0) {
          payment -= problem.prices[static_cast<std::size_t>(i)];
        }
      }
    }
    consider();
  }
  return result_from_chosen(problem, std::move(best_chosen));
}

}  // namespace graphmart::allocation
