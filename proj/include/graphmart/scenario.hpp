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

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "graphmart/allocation.hpp"

namespace graphmart::scenario {

// Synthetic instance shape: `mapping_count` solution mappings of
// `triples_per_mapping` triple slots each, with `diversity` in [0,1]
// controlling how many distinct triples the answer contains.
struct ScenarioSpec {
  int mapping_count = 0;
  int triples_per_mapping = 5;
  double diversity = 1.0;
  std::uint64_t seed = 0;
};

struct GeneratedInstance {
  std::string id;  // "s<count>_d<diversity>_r<replicate>" or "s<count>_d<diversity>"
  ScenarioSpec spec;
  allocation::AllocationProblem problem;
  std::uint64_t effective_seed = 0;  // seed actually used (after regeneration)
  int attempts = 1;                  // 1 unless degenerate draws were rejected
};

// Number of distinct triple identifiers for `slots` total triple slots:
// round-half-up of 1 + diversity * (slots - 1).
int unique_triple_count(int slots, double diversity);

// Generates one instance:
//   * slots = triples_per_mapping * mapping_count, grouped consecutively
//     into mappings;
//   * every one of the n_unique identifiers is used at least once and the
//     remaining slots draw identifiers uniformly, then all slots are
//     shuffled, so diversity 0 collapses to a single shared triple and
//     diversity 1 yields pairwise disjoint required sets;
//   * per-identifier price is uniform on $0.00..$1.00, per-mapping value is
//     triples_per_mapping times uniform on $1.00..$2.00, both rounded to
//     cents; budget is half the total distinct-triple cost, floored.
// Identifier, price and value draws come from independent substreams of the
// seed. When mapping_count >= 2 and diversity > 0, draws under which no
// mapping is affordable (or all are) are rejected and redrawn from the next
// derived seed; `attempts` records how many draws were needed.
GeneratedInstance generate(const ScenarioSpec& spec);

// One instance per (mapping_count, diversity, replicate), with seeds derived
// from base_seed by grid position. Ordering is deterministic: grid order,
// then replicate.
std::vector<GeneratedInstance> sweep(std::span<const std::pair<int, double>> grid,
                                     int replicates, std::uint64_t base_seed);

}  // namespace graphmart::scenario
