# Copyright 2026 The graphmart Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Data-marketplace allocation engine.

Monetary amounts cross this API as integer minor units (cents). JSON
document strings are byte-compatible with the ``graphmart`` CLI.
"""

from graphmart._core import (
    BRUTE_FORCE_MAX_MAPPINGS,
    AllocationProblem,
    AllocationResult,
    ExactResult,
    GeneratedInstance,
    GraphmartError,
    __version__,
    build_problem,
    brute_force,
    evaluate_files,
    generate,
    money_str,
    parse_money,
    settle_purchase,
    solve_exact,
    solve_greedy,
    solve_greedy_diminishing,
    summarize_answer,
    sweep,
    unique_triple_count,
)

__all__ = [
    "BRUTE_FORCE_MAX_MAPPINGS",
    "AllocationProblem",
    "AllocationResult",
    "ExactResult",
    "GeneratedInstance",
    "GraphmartError",
    "__version__",
    "build_problem",
    "brute_force",
    "evaluate_files",
    "generate",
    "money_str",
    "parse_money",
    "settle_purchase",
    "solve_exact",
    "solve_greedy",
    "solve_greedy_diminishing",
    "summarize_answer",
    "sweep",
    "unique_triple_count",
]
