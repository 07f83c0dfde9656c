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

#include "graphmart/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "graphmart/errors.hpp"
#include "graphmart/rng.hpp"

namespace graphmart::scenario {
namespace {

constexpr int kMaxAttempts = 1000;

std::string format_diversity(double d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", d);
  return buf;
}

// One draw of the full instance from a concrete seed. Identifier
// assignment, prices and values come from independent substreams so a
// change in one parameter never shifts another stream.
allocation::AllocationProblem draw(const ScenarioSpec& spec, std::uint64_t seed) {
  const int n = spec.triples_per_mapping * spec.mapping_count;
  const int uniq = unique_triple_count(n, spec.diversity);

  // Surjective slot assignment: each identifier appears at least once, the
  // remaining slots draw uniformly, then everything is shuffled.
  std::vector<int> slots(static_cast<std::size_t>(n));
  std::iota(slots.begin(), slots.begin() + uniq, 0);
  Rng ids = substream(seed, "ids");
  for (int i = uniq; i < n; ++i) {
    slots[static_cast<std::size_t>(i)] = static_cast<int>(ids.below(static_cast<std::uint64_t>(uniq)));
  }
  ids.shuffle(slots);

  allocation::AllocationProblem problem;
  Rng prices = substream(seed, "prices");
  for (int i = 0; i < uniq; ++i) {
    problem.prices.push_back(Money::from_minor(std::llround(prices.unit() * 100.0)));
  }
  Rng values = substream(seed, "values");
  for (int j = 0; j < spec.mapping_count; ++j) {
    const double dollars = static_cast<double>(spec.triples_per_mapping) * (1.0 + values.unit());
    problem.values.push_back(Money::from_minor(std::llround(dollars * 100.0)));
    std::vector<int> set(slots.begin() + j * spec.triples_per_mapping,
                         slots.begin() + (j + 1) * spec.triples_per_mapping);
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    problem.required.push_back(std::move(set));
  }

  Money total;
  for (Money p : problem.prices) total += p;
  problem.budget = Money::from_minor(total.minor() / 2);
  return problem;
}

}  // namespace

int unique_triple_count(int slots, double diversity) {
  const int uniq = static_cast<int>(std::floor(1.0 + diversity * (slots - 1) + 0.5));
  return std::clamp(uniq, 1, slots);
}

GeneratedInstance generate(const ScenarioSpec& spec) {
  if (spec.mapping_count < 1 || spec.triples_per_mapping < 1 || spec.diversity < 0 ||
      spec.diversity > 1) {
    throw InvalidProblem("scenario requires mapping_count >= 1, triples_per_mapping >= 1 and "
                         "diversity in [0, 1]");
  }

  GeneratedInstance out;
  out.spec = spec;
  out.id = "s" + std::to_string(spec.mapping_count) + "_d" + format_diversity(spec.diversity);

  std::uint64_t seed = spec.seed;
  for (int attempt = 1; attempt <= kMaxAttempts; ++attempt) {
    allocation::AllocationProblem problem = draw(spec, seed);
    problem.validate();

    bool accept = true;
    if (spec.mapping_count >= 2 && spec.diversity > 0) {
      // At least one mapping affordable, never all of them (the budget must
      // stay below the full answer cost).
      Money cheapest = problem.values.empty() ? kZeroMoney : Money::from_minor(INT64_MAX);
      for (int j = 0; j < problem.num_mappings(); ++j) {
        const int set[] = {j};
        cheapest = std::min(cheapest, problem.union_price(set));
      }
      Money total;
      for (Money p : problem.prices) total += p;
      accept = cheapest <= problem.budget && problem.budget < total;
    }
    if (accept) {
      out.problem = std::move(problem);
      out.effective_seed = seed;
      out.attempts = attempt;
      return out;
    }
    seed = derive_seed(seed, "retry");
  }
  throw Error("scenario generation rejected " + std::to_string(kMaxAttempts) +
              " consecutive draws for " + out.id);
}

std::vector<GeneratedInstance> sweep(std::span<const std::pair<int, double>> grid, int replicates,
                                     std::uint64_t base_seed) {
  if (replicates < 1) throw InvalidProblem("sweep requires replicates >= 1");
  std::vector<GeneratedInstance> out;
  out.reserve(grid.size() * static_cast<std::size_t>(replicates));
  for (const auto& [s, d] : grid) {
    for (int r = 0; r < replicates; ++r) {
      ScenarioSpec spec;
      spec.mapping_count = s;
      spec.diversity = d;
      const auto d_key = static_cast<std::uint64_t>(std::llround(d * 1e6));
      spec.seed = derive_seed(base_seed, "sweep", (static_cast<std::uint64_t>(s) << 20) | d_key,
                              static_cast<std::uint64_t>(r));
      GeneratedInstance g = generate(spec);
      g.id += "_r" + std::to_string(r);
      out.push_back(std::move(g));
    }
  }
  return out;
}

}  // namespace graphmart::scenario
