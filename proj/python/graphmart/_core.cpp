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
// Python bindings. Money crosses the boundary as integer minor units
// (cents); richer documents cross as the same JSON strings the CLI reads
// and writes.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <chrono>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "graphmart/allocation.hpp"
#include "graphmart/errors.hpp"
#include "graphmart/federation.hpp"
#include "graphmart/io.hpp"
#include "graphmart/market.hpp"
#include "graphmart/money.hpp"
#include "graphmart/scenario.hpp"

namespace py = pybind11;

namespace graphmart {
namespace {

std::vector<std::int64_t> to_minor(const std::vector<Money>& v) {
  std::vector<std::int64_t> out;
  out.reserve(v.size());
  for (Money m : v) out.push_back(m.minor());
  return out;
}

std::vector<Money> from_minor(const std::vector<std::int64_t>& v) {
  std::vector<Money> out;
  out.reserve(v.size());
  for (std::int64_t m : v) out.push_back(Money::from_minor(m));
  return out;
}

allocation::ExactResult solve_exact_py(const allocation::AllocationProblem& problem,
                                       std::int64_t timeout_ms, std::uint64_t seed) {
  allocation::SolverConfig config;
  config.timeout = std::chrono::milliseconds(timeout_ms);
  config.seed = seed;
  py::gil_scoped_release release;
  return allocation::solve_exact(problem, config);
}

std::string evaluate_files(const std::string& query_path, const std::string& graphs_path,
                           const std::string& products_path) {
  const auto query = io::read_query(query_path);
  const auto endpoints = federation::load_graphs(graphs_path);
  const auto products = io::read_products(products_path);
  query.validate();
  return io::answer_to_json(federation::evaluate(query, endpoints, products));
}

std::pair<std::string, std::string> summarize_answer(const std::string& answer_json,
                                                     const std::string& products_path,
                                                     std::uint64_t seed) {
  const QueryAnswer answer = io::answer_from_json(answer_json);
  const auto products = io::read_products(products_path);
  const auto resolved =
      market::resolve_cheapest_offers(market::offers_from_answer(answer, products));
  const market::Summary summary = market::summarize(answer, resolved, products, seed);
  const market::SummaryKey key = market::summary_key(answer, resolved, seed);
  return {io::summary_to_json(summary), io::key_to_json(key, resolved)};
}

allocation::AllocationProblem build_problem_py(const std::string& summary_json,
                                               const std::vector<std::int64_t>& values,
                                               std::int64_t budget) {
  const market::Summary summary = io::summary_from_json(summary_json);
  const auto valuation = market::Valuation::make_linear(from_minor(values));
  return allocation::build_problem(summary, valuation, Money::from_minor(budget));
}

std::string settle_purchase(const std::string& key_json, const std::string& products_path,
                            const std::vector<std::string>& purchased_ids) {
  const auto [key, resolved] = io::key_from_json(key_json);
  const auto products = io::read_products(products_path);
  std::vector<TripleAtom> purchased;
  purchased.reserve(purchased_ids.size());
  for (const std::string& id : purchased_ids) {
    auto it = key.triples.find(id);
    if (it == key.triples.end()) throw MissingOffer("unknown anonymous id: " + id);
    purchased.push_back(it->second);
  }
  return io::settlement_to_json(market::settle(purchased, resolved, products));
}

}  // namespace
}  // namespace graphmart

PYBIND11_MODULE(_core, m) {
  using namespace graphmart;

  m.doc() =
      "Data-marketplace allocation engine. All monetary amounts are integer "
      "minor units (cents); JSON document strings match the CLI formats.";

  static py::exception<Error> exc(m, "GraphmartError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(exc, e.what());
    }
  });

  py::class_<allocation::AllocationProblem>(m, "AllocationProblem")
      .def(py::init<>())
      .def_property(
          "values",
          [](const allocation::AllocationProblem& p) { return to_minor(p.values); },
          [](allocation::AllocationProblem& p, const std::vector<std::int64_t>& v) {
            p.values = from_minor(v);
          },
          "Per-mapping value in minor units.")
      .def_property(
          "prices",
          [](const allocation::AllocationProblem& p) { return to_minor(p.prices); },
          [](allocation::AllocationProblem& p, const std::vector<std::int64_t>& v) {
            p.prices = from_minor(v);
          },
          "Per-triple price in minor units.")
      .def_readwrite("required", &allocation::AllocationProblem::required,
                     "Per-mapping sorted sets of 0-based triple indices.")
      .def_property(
          "budget",
          [](const allocation::AllocationProblem& p) { return p.budget.minor(); },
          [](allocation::AllocationProblem& p, std::int64_t b) {
            p.budget = Money::from_minor(b);
          },
          "Payment cap in minor units.")
      .def("num_mappings", &allocation::AllocationProblem::num_mappings)
      .def("num_triples", &allocation::AllocationProblem::num_triples)
      .def("validate", &allocation::AllocationProblem::validate)
      .def(
          "union_price",
          [](const allocation::AllocationProblem& p, const std::vector<int>& chosen) {
            return p.union_price(chosen).minor();
          },
          py::arg("chosen"),
          "Total price of the union of the chosen mappings' required sets.");

  py::class_<allocation::AllocationResult>(m, "AllocationResult")
      .def_readonly("chosen", &allocation::AllocationResult::chosen)
      .def_readonly("purchased", &allocation::AllocationResult::purchased)
      .def_property_readonly(
          "payment",
          [](const allocation::AllocationResult& r) { return r.payment.minor(); })
      .def_property_readonly(
          "utility",
          [](const allocation::AllocationResult& r) { return r.utility.minor(); })
      .def("__repr__", [](const allocation::AllocationResult& r) {
        return "AllocationResult(chosen=" + std::to_string(r.chosen.size()) +
               " mappings, utility=" + r.utility.str() + ")";
      });

  py::class_<allocation::ExactResult>(m, "ExactResult")
      .def_readonly("allocation", &allocation::ExactResult::allocation)
      .def_readonly("optimal", &allocation::ExactResult::optimal)
      .def_readonly("upper_bound", &allocation::ExactResult::upper_bound)
      .def_readonly("nodes", &allocation::ExactResult::nodes);

  py::class_<scenario::GeneratedInstance>(m, "GeneratedInstance")
      .def_readonly("id", &scenario::GeneratedInstance::id)
      .def_readonly("problem", &scenario::GeneratedInstance::problem)
      .def_readonly("effective_seed", &scenario::GeneratedInstance::effective_seed)
      .def_readonly("attempts", &scenario::GeneratedInstance::attempts)
      .def_property_readonly(
          "s", [](const scenario::GeneratedInstance& g) { return g.spec.mapping_count; })
      .def_property_readonly(
          "d", [](const scenario::GeneratedInstance& g) { return g.spec.diversity; });

  m.def("solve_exact", &solve_exact_py, py::arg("problem"),
        py::arg("timeout_ms") = 60000, py::arg("seed") = 0,
        "Provably optimal allocation via branch and bound. On timeout returns "
        "the best incumbent with optimal=False.");
  m.def(
      "solve_greedy",
      [](const allocation::AllocationProblem& p) { return allocation::solve_greedy(p); },
      py::arg("problem"), "Ratio-greedy allocation heuristic.");
  m.def(
      "solve_greedy_diminishing",
      [](const allocation::AllocationProblem& p, const std::vector<std::int64_t>& schedule) {
        return allocation::solve_greedy(p, from_minor(schedule));
      },
      py::arg("problem"), py::arg("schedule"),
      "Greedy under a diminishing marginal-value schedule (minor units).");
  m.def(
      "brute_force",
      [](const allocation::AllocationProblem& p) { return allocation::brute_force(p); },
      py::arg("problem"), "Exhaustive subset oracle; raises for more than 25 mappings.");

  m.def(
      "generate",
      [](int mapping_count, double diversity, std::uint64_t seed, int triples_per_mapping) {
        scenario::ScenarioSpec spec;
        spec.mapping_count = mapping_count;
        spec.diversity = diversity;
        spec.seed = seed;
        spec.triples_per_mapping = triples_per_mapping;
        return scenario::generate(spec);
      },
      py::arg("mapping_count"), py::arg("diversity"), py::arg("seed") = 0,
      py::arg("triples_per_mapping") = 5, "Seeded synthetic allocation instance.");
  m.def(
      "sweep",
      [](const std::vector<std::pair<int, double>>& grid, int replicates,
         std::uint64_t base_seed) { return scenario::sweep(grid, replicates, base_seed); },
      py::arg("grid"), py::arg("replicates"), py::arg("base_seed"),
      "One instance per (mapping_count, diversity, replicate).");
  m.def("unique_triple_count", &scenario::unique_triple_count, py::arg("slots"),
        py::arg("diversity"),
        "Distinct identifiers for a slot count at a diversity level.");

  m.def("evaluate_files", &evaluate_files, py::arg("query_path"), py::arg("graphs_path"),
        py::arg("products_path"),
        "Federated BGP evaluation; returns the answer JSON document.");
  m.def("summarize_answer", &summarize_answer, py::arg("answer_json"),
        py::arg("products_path"), py::arg("seed"),
        "Anonymized priced summary of an answer; returns (summary_json, key_json).");
  m.def("build_problem", &build_problem_py, py::arg("summary_json"), py::arg("values"),
        py::arg("budget"),
        "Normalizes a summary plus per-mapping values (minor units) into an "
        "AllocationProblem.");
  m.def("settle_purchase", &settle_purchase, py::arg("key_json"), py::arg("products_path"),
        py::arg("purchased_ids"),
        "Splits the payment for purchased anonymous ids among providers; "
        "returns the settlement JSON document.");

  m.def(
      "money_str", [](std::int64_t minor) { return Money::from_minor(minor).str(); },
      py::arg("minor"), "Renders minor units as a dollar string.");
  m.def(
      "parse_money", [](const std::string& text) { return Money::parse(text).minor(); },
      py::arg("text"), "Parses a dollar string into minor units.");

  m.attr("BRUTE_FORCE_MAX_MAPPINGS") = allocation::kBruteForceMaxMappings;
  m.attr("__version__") = "1.0.0";
}
