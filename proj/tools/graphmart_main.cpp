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
// graphmart command line front end.
//
//   evaluate   run a query over a quad file, with product provenance
//   summarize  anonymize an answer into a purchasable summary (+ key)
//   allocate   solve an instance or a summary under a budget
//   settle     split a result's payment among providers
//   gen        generate synthetic instances
//   bench      run rules over instance files, emit CSV
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "graphmart/allocation.hpp"
#include "graphmart/bench.hpp"
#include "graphmart/errors.hpp"
#include "graphmart/federation.hpp"
#include "graphmart/io.hpp"
#include "graphmart/market.hpp"
#include "graphmart/rng.hpp"
#include "graphmart/scenario.hpp"

namespace {

namespace fs = std::filesystem;
using namespace graphmart;

// Distinct anonymous ids of a summary in first-appearance order; the same
// order assigns triple indices in allocation::build_problem.
std::vector<std::string> summary_id_order(const market::Summary& summary) {
  std::vector<std::string> ids;
  std::map<std::string, bool> seen;
  for (const market::SummaryRow& row : summary.rows) {
    for (const std::string& id : row.triple_ids) {
      if (!seen[id]) {
        seen[id] = true;
        ids.push_back(id);
      }
    }
  }
  return ids;
}

// Writes to the path, or to stdout when no path was given. The human status
// line is printed only when the document went to a file, keeping piped
// stdout parseable.
bool emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return false;
  }
  io::write_file(path, content);
  return true;
}

struct AllocateArgs {
  std::string instance_path, summary_path, valuation_path, key_path, products_path;
  std::string rule = "exact";
  std::string budget;
  std::string out, settlement_out;
  long long timeout_ms = 60000;
};

int run_allocate(const AllocateArgs& args) {
  allocation::SolverConfig config;
  config.timeout = std::chrono::milliseconds(args.timeout_ms);

  allocation::AllocationProblem problem;
  std::vector<std::string> id_order;  // summary mode only
  std::optional<market::Valuation> valuation;
  if (!args.valuation_path.empty()) valuation = io::read_valuation(args.valuation_path);

  if (!args.instance_path.empty()) {
    problem = io::read_instance(args.instance_path).problem;
    if (valuation && valuation->kind == market::Valuation::Kind::kLinear) {
      if (valuation->linear.size() != problem.values.size()) {
        throw Error("valuation has " + std::to_string(valuation->linear.size()) +
                    " values for " + std::to_string(problem.values.size()) + " mappings");
      }
      problem.values = valuation->linear;
    }
  } else {
    market::Summary summary = io::summary_from_json(io::read_file(args.summary_path));
    if (!valuation) throw Error("allocating a summary requires --valuation");
    market::Valuation linear = *valuation;
    if (linear.kind != market::Valuation::Kind::kLinear) {
      // build_problem needs per-mapping values; give the schedule a linear
      // reading only for sizing, the greedy overload consumes the schedule.
      linear = market::Valuation::make_linear(
          std::vector<Money>(summary.rows.size(), kZeroMoney));
    }
    if (args.budget.empty()) throw Error("allocating a summary requires --budget");
    problem = allocation::build_problem(summary, linear, Money::parse(args.budget));
    id_order = summary_id_order(summary);
  }
  if (!args.budget.empty()) problem.budget = Money::parse(args.budget);
  problem.validate();

  allocation::AllocationResult result;
  bool optimal = false;
  const bool diminishing =
      valuation && valuation->kind == market::Valuation::Kind::kDiminishing;
  if (args.rule == "greedy") {
    result = diminishing ? allocation::solve_greedy(problem, valuation->diminishing)
                         : allocation::solve_greedy(problem);
  } else if (diminishing) {
    throw Error("diminishing valuations are supported by the greedy rule only");
  } else if (args.rule == "exact") {
    allocation::ExactResult exact = allocation::solve_exact(problem, config);
    result = std::move(exact.allocation);
    optimal = exact.optimal;
  } else if (args.rule == "brute") {
    result = allocation::brute_force(problem);
    optimal = true;
  } else {
    throw Error("unknown rule '" + args.rule + "' (expected exact, greedy or brute)");
  }

  std::vector<std::string> purchased_ids;
  for (int i : result.purchased) {
    if (!id_order.empty()) purchased_ids.push_back(id_order[static_cast<std::size_t>(i)]);
  }
  if (emit(args.out, io::result_to_json(result, optimal, purchased_ids))) {
    std::cout << "allocated " << result.chosen.size() << " mappings, payment "
              << result.payment.str() << ", utility " << result.utility.str()
              << (optimal ? " (optimal)" : "") << "\n";
  }

  if (!args.settlement_out.empty()) {
    if (args.key_path.empty() || args.products_path.empty()) {
      throw Error("--settlement-out requires --key and --products");
    }
    auto [key, resolved] = io::key_from_json(io::read_file(args.key_path));
    std::vector<market::DataProduct> products = io::read_products(args.products_path);
    std::vector<TripleAtom> purchased;
    for (const std::string& id : purchased_ids) {
      auto it = key.triples.find(id);
      if (it == key.triples.end()) throw Error("key does not cover purchased id '" + id + "'");
      purchased.push_back(it->second);
    }
    const auto settlement = market::settle(purchased, resolved, products);
    io::write_file(args.settlement_out, io::settlement_to_json(settlement));
    std::cout << "settled " << result.payment.str() << " among " << settlement.size()
              << " providers\n";
  }
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"graphmart: priced federated queries and budgeted allocation"};
  app.require_subcommand(1);

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "run a query over a quad file");
  std::string ev_graphs, ev_query, ev_products, ev_out;
  evaluate->add_option("--graphs", ev_graphs, "quad file")->required();
  evaluate->add_option("--query", ev_query, "query file")->required();
  evaluate->add_option("--products", ev_products, "products file")->required();
  evaluate->add_option("--out", ev_out, "answer JSON output path (stdout when absent)");

  // summarize
  auto* summarize = app.add_subcommand("summarize", "anonymize an answer into a summary");
  std::string su_answer, su_products, su_out, su_key_out;
  std::uint64_t su_seed = 0;
  summarize->add_option("--answer", su_answer, "answer JSON")->required();
  summarize->add_option("--products", su_products, "products file")->required();
  summarize->add_option("--seed", su_seed, "anonymization seed")->required();
  summarize->add_option("--out", su_out, "summary JSON output path (stdout when absent)");
  summarize->add_option("--key-out", su_key_out, "marketplace-private key JSON output path");

  // allocate
  auto* allocate = app.add_subcommand("allocate", "solve an instance or summary");
  AllocateArgs al;
  auto* al_instance = allocate->add_option("--instance", al.instance_path, "instance file");
  auto* al_summary = allocate->add_option("--summary", al.summary_path, "summary JSON");
  al_instance->excludes(al_summary);
  al_summary->excludes(al_instance);
  allocate->add_option("--valuation", al.valuation_path, "valuation file");
  allocate->add_option("--budget", al.budget, "budget, decimal (overrides the instance)");
  allocate->add_option("--rule", al.rule, "exact, greedy or brute")->default_val("exact");
  allocate->add_option("--timeout-ms", al.timeout_ms, "exact solver timeout")->default_val(60000);
  allocate->add_option("--out", al.out, "result JSON output path (stdout when absent)");
  allocate->add_option("--settlement-out", al.settlement_out, "settlement JSON output path");
  allocate->add_option("--key", al.key_path, "key JSON (for settlement)");
  allocate->add_option("--products", al.products_path, "products file (for settlement)");

  // settle
  auto* settle = app.add_subcommand("settle", "split a result's payment among providers");
  std::string se_result, se_key, se_products, se_out;
  settle->add_option("--result", se_result, "result JSON")->required();
  settle->add_option("--key", se_key, "key JSON")->required();
  settle->add_option("--products", se_products, "products file")->required();
  settle->add_option("--out", se_out, "settlement JSON output path (stdout when absent)");

  // gen
  auto* gen = app.add_subcommand("gen", "generate synthetic instances");
  int ge_s = 0, ge_tpm = 5, ge_replicates = 1;
  double ge_d = 1.0;
  std::uint64_t ge_seed = 0;
  std::string ge_out, ge_out_dir;
  gen->add_option("--s", ge_s, "solution mapping count")->required();
  gen->add_option("--d", ge_d, "diversity in [0,1]")->required();
  gen->add_option("--seed", ge_seed, "generator seed")->required();
  gen->add_option("--tpm", ge_tpm, "triples per mapping")->default_val(5);
  auto* ge_rep_opt =
      gen->add_option("--replicates", ge_replicates, "instances to emit (requires --out-dir)")
          ->default_val(1);
  auto* ge_out_opt =
      gen->add_option("--out", ge_out, "instance output path (stdout when absent)");
  auto* ge_dir_opt = gen->add_option("--out-dir", ge_out_dir, "output directory");
  ge_out_opt->excludes(ge_dir_opt);
  ge_dir_opt->excludes(ge_out_opt);
  ge_rep_opt->needs(ge_dir_opt);

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "run rules over instance files");
  std::string be_dir, be_rules = "exact,greedy", be_out, be_ratio_out;
  long long be_timeout = 60000;
  int be_workers = 1;
  bench_cmd->add_option("--instances", be_dir, "directory of .inst files")->required();
  bench_cmd->add_option("--rules", be_rules, "comma list of exact,greedy,brute")
      ->default_val("exact,greedy");
  bench_cmd->add_option("--timeout-ms", be_timeout, "exact solver timeout")->default_val(60000);
  bench_cmd->add_option("--workers", be_workers, "parallel solves")->default_val(1);
  bench_cmd->add_option("--out", be_out, "CSV output path")->required();
  bench_cmd->add_option("--ratio-out", be_ratio_out, "greedy/exact ratio CSV output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the usage error
    return code == 0 ? 0 : 1;
  }

  if (evaluate->parsed()) {
    const auto endpoints = federation::load_graphs(ev_graphs);
    const auto query = io::read_query(ev_query);
    const auto products = io::read_products(ev_products);
    const QueryAnswer answer = federation::evaluate(query, endpoints, products);
    if (emit(ev_out, io::answer_to_json(answer))) {
      std::cout << "evaluated " << answer.rows.size() << " solution mappings\n";
    }
    return 0;
  }

  if (summarize->parsed()) {
    const QueryAnswer answer = io::answer_from_json(io::read_file(su_answer));
    const auto products = io::read_products(su_products);
    const auto offers = market::offers_from_answer(answer, products);
    const auto resolved = market::resolve_cheapest_offers(offers);
    const market::Summary summary = market::summarize(answer, resolved, products, su_seed);
    if (emit(su_out, io::summary_to_json(summary))) {
      std::cout << "summarized " << summary.rows.size() << " mappings over "
                << summary.triple_info.size() << " anonymous triples\n";
    }
    if (!su_key_out.empty()) {
      const market::SummaryKey key = market::summary_key(answer, resolved, su_seed);
      io::write_file(su_key_out, io::key_to_json(key, resolved));
    }
    return 0;
  }

  if (allocate->parsed()) {
    if (al.instance_path.empty() == al.summary_path.empty()) {
      throw Error("allocate needs exactly one of --instance or --summary");
    }
    return run_allocate(al);
  }

  if (settle->parsed()) {
    const io::ResultFile result = io::result_from_json(io::read_file(se_result));
    auto [key, resolved] = io::key_from_json(io::read_file(se_key));
    const auto products = io::read_products(se_products);
    std::vector<TripleAtom> purchased;
    for (const std::string& id : result.purchased_ids) {
      auto it = key.triples.find(id);
      if (it == key.triples.end()) throw Error("key does not cover purchased id '" + id + "'");
      purchased.push_back(it->second);
    }
    const auto settlement = market::settle(purchased, resolved, products);
    Money total;
    for (const auto& [provider, amount] : settlement) total += amount;
    if (total != result.result.payment) {
      throw Error("settlement total " + total.str() + " does not match payment " +
                  result.result.payment.str());
    }
    if (emit(se_out, io::settlement_to_json(settlement))) {
      std::cout << "settled " << total.str() << " among " << settlement.size()
                << " providers\n";
    }
    return 0;
  }

  if (gen->parsed()) {
    scenario::ScenarioSpec spec;
    spec.mapping_count = ge_s;
    spec.triples_per_mapping = ge_tpm;
    spec.diversity = ge_d;
    spec.seed = ge_seed;
    if (!ge_out_dir.empty()) {
      fs::create_directories(ge_out_dir);
      // Same per-replicate seed derivation as scenario::sweep.
      const auto d_key = static_cast<std::uint64_t>(std::llround(ge_d * 1e6));
      for (int r = 0; r < ge_replicates; ++r) {
        scenario::ScenarioSpec rep = spec;
        rep.seed = derive_seed(ge_seed, "sweep",
                               (static_cast<std::uint64_t>(ge_s) << 20) | d_key,
                               static_cast<std::uint64_t>(r));
        scenario::GeneratedInstance g = scenario::generate(rep);
        g.id += "_r" + std::to_string(r);
        std::ostringstream buffer;
        io::write_instance(buffer, io::instance_from_generated(g));
        io::write_file((fs::path(ge_out_dir) / (g.id + ".inst")).string(), buffer.str());
      }
      std::cout << "wrote " << ge_replicates << " instances to " << ge_out_dir << "\n";
    } else {
      const scenario::GeneratedInstance g = scenario::generate(spec);
      std::ostringstream buffer;
      io::write_instance(buffer, io::instance_from_generated(g));
      if (emit(ge_out, buffer.str())) {
        std::cout << "wrote " << g.id << " (" << g.problem.num_mappings() << " mappings, "
                  << g.problem.num_triples() << " triples) to " << ge_out << "\n";
      }
    }
    return 0;
  }

  if (bench_cmd->parsed()) {
    std::vector<std::string> paths;
    if (!fs::is_directory(be_dir)) throw Error("'" + be_dir + "' is not a directory");
    for (const auto& entry : fs::directory_iterator(be_dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".inst") {
        paths.push_back(entry.path().string());
      }
    }
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) throw Error("no .inst files in '" + be_dir + "'");

    std::vector<bench::BenchInstance> instances;
    for (const std::string& path : paths) {
      io::InstanceFile file = io::read_instance(path);
      bench::BenchInstance instance;
      instance.id = file.id.empty() ? fs::path(path).stem().string() : file.id;
      instance.s = file.s;
      instance.d = file.d;
      instance.problem = std::move(file.problem);
      instances.push_back(std::move(instance));
    }

    bench::RunOptions options;
    std::stringstream rules(be_rules);
    std::string name;
    while (std::getline(rules, name, ',')) {
      const auto rule = bench::parse_rule(name);
      if (!rule) throw Error("unknown rule '" + name + "'");
      options.rules.push_back(*rule);
    }
    if (options.rules.empty()) throw Error("no rules selected");
    options.config.timeout = std::chrono::milliseconds(be_timeout);
    options.workers = be_workers;

    const auto records = bench::run(instances, options);
    std::vector<std::pair<std::string, std::string>> metadata{
        {"tool", "graphmart bench v1"},
        {"instances", std::to_string(instances.size())},
        {"rules", be_rules},
        {"timeout_ms", std::to_string(be_timeout)},
        {"workers", std::to_string(be_workers)},
    };
    std::ostringstream csv;
    bench::write_csv(csv, records, metadata);
    io::write_file(be_out, csv.str());
    std::cout << "wrote " << records.size() << " records to " << be_out << "\n";

    if (!be_ratio_out.empty()) {
      const auto rows = bench::utility_ratio(records);
      std::ostringstream ratio_csv;
      bench::write_ratio_csv(ratio_csv, rows);
      io::write_file(be_ratio_out, ratio_csv.str());
      std::cout << "wrote " << rows.size() << " ratio rows to " << be_ratio_out << "\n";
    }
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const graphmart::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
