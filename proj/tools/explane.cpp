// explane: command-line front end for parsing, planning, model diffs,
// explanation generation and the scavenger-hunt benchmark.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "explane/baselines/flat.hpp"
#include "explane/error.hpp"
#include "explane/mdp/value_iteration.hpp"
#include "explane/model/features.hpp"
#include "explane/model/pddl.hpp"
#include "explane/planner/planner.hpp"
#include "explane/reconcile/reconcile.hpp"
#include "explane/scavenger/bench.hpp"

namespace {

using namespace explane;

enum Exit { kOk = 0, kUsage = 1, kParse = 2, kUnsolvable = 3 };

int cmd_parse(const std::string& path) {
  const std::string text = model::read_file(path);
  if (text.find("(problem") != std::string::npos || text.find("(PROBLEM") != std::string::npos) {
    const auto p = model::parse_problem(text);
    std::cout << model::to_pddl(p);
    std::cerr << "problem " << p.name << ": " << p.objects.size() << " objects, " << p.init.size()
              << " init atoms, " << p.goal.size() << " goal atoms\n";
  } else {
    const auto d = model::parse_domain(text);
    std::cout << model::to_pddl(d);
    std::cerr << "domain " << d.name << ": " << d.types.size() << " types, " << d.predicates.size()
              << " predicates, " << d.actions.size() << " actions\n";
  }
  return kOk;
}

int cmd_plan(const std::string& domain, const std::string& problem, double gamma, const std::string& kernel,
             const std::string& values_out) {
  const auto task = model::load_task(domain, problem);
  const auto mdp = mdp::GoalMdp::compile(task, gamma);
  mdp::SolveOptions opts;
  opts.kernel = kernel == "serial" ? mdp::Kernel::Serial : mdp::Kernel::Parallel;
  const auto cost = mdp::optimal_cost(mdp, opts);
  if (!values_out.empty()) {
    std::ofstream out(values_out);
    if (!out) throw Error("cannot write '" + values_out + "'");
    out << cost.to_csv();
  }
  const auto plan = planner::optimal_plan(mdp, cost);
  if (!plan) {
    std::cerr << "unsolvable: the goal is unreachable from the initial state\n";
    return kUnsolvable;
  }
  std::cout << planner::write_plan(*plan);
  std::cerr.precision(12);
  std::cerr << "length " << plan->size() << ", discounted cost " << cost.at_index(0) << ", states " << cost.size()
            << ", sweeps " << cost.stats().sweeps << "\n";
  return kOk;
}

int cmd_diff(const std::string& a, const std::string& b, const std::string& domain, const std::string& domain_b) {
  const auto ta = model::load_task(domain, a);
  const auto tb = model::load_task(domain_b.empty() ? domain : domain_b, b);
  const auto delta = model::model_diff(ta, tb);
  for (const auto& e : reconcile::causal_order(delta)) std::cout << reconcile::to_string(e) << "\n";
  std::cerr << "distance " << delta.size() << "\n";
  return kOk;
}

struct ExplainArgs {
  std::string method = "hrl";
  std::string scenario;
  std::string catalog;
  std::uint64_t seed = 1;
  std::size_t episodes = 5000;
  double epsilon = 0.9;
  std::string convention = "paper";
  std::string format = "json";
  bool trace = false;
};

scavenger::RunParams run_params(std::size_t episodes, double epsilon, const std::string& convention) {
  scavenger::RunParams p;
  p.adapt.sarsa.episodes = episodes;
  p.adapt.sarsa.epsilon = epsilon;
  p.adapt.sarsa.convention = hrl::epsilon_convention_from_string(convention);
  return p;
}

int cmd_explain(const ExplainArgs& args) {
  const auto catalog = args.catalog.empty() ? scavenger::load_catalog() : scavenger::load_catalog(args.catalog);
  const auto scn = scavenger::Scenario::load(args.scenario);
  const auto method = scavenger::method_from_string(args.method);
  const auto params = run_params(args.episodes, args.epsilon, args.convention);
  const auto row = scavenger::run_scenario(catalog, scn, method, params, args.seed);
  if (args.format == "json" || args.format == "both") std::cout << reconcile::to_json(row.explanation) << "\n";
  if (args.format == "english" || args.format == "both")
    for (const auto& line : reconcile::render_english(row.explanation, catalog.templates)) std::cout << line << "\n";
  if (args.trace) std::cout << row.trace.to_text();
  std::cerr << "scenario " << row.scenario << " method " << scavenger::to_string(method) << ": |E| = " << row.size
            << ", flags " << row.flags << "/" << row.actions << ", sound " << (row.sound ? "yes" : "no") << "\n";
  return kOk;
}

int cmd_bench(const std::string& dir, const std::string& out_path, std::uint64_t seed, const std::string& catalog_dir,
              std::size_t episodes) {
  const auto catalog = catalog_dir.empty() ? scavenger::load_catalog() : scavenger::load_catalog(catalog_dir);
  const auto scenarios = scavenger::load_scenarios(dir);
  if (scenarios.empty()) throw Error("no scenario files in '" + dir + "'");
  const auto rows = scavenger::run_bench(catalog, scenarios, run_params(episodes, 0.9, "paper"), seed);
  const std::string report = scavenger::write_report(rows);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw Error("cannot write '" + out_path + "'");
    out << report;
  }
  std::cout << report;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical explanation generation for human-robot teaming"};
  app.require_subcommand(1);

  std::string file;
  auto* parse = app.add_subcommand("parse", "Parse a PDDL domain or problem and print it normalised");
  parse->add_option("file", file, "PDDL file")->required();

  std::string domain, problem, kernel = "parallel", values_out;
  double gamma = 0.95;
  auto* plan = app.add_subcommand("plan", "Compute the optimal plausible plan");
  plan->add_option("domain", domain, "domain file")->required();
  plan->add_option("problem", problem, "problem file")->required();
  plan->add_option("--gamma", gamma, "discount factor")->check(CLI::Range(0.0, 1.0));
  plan->add_option("--kernel", kernel, "value iteration kernel")->check(CLI::IsMember({"serial", "parallel"}));
  plan->add_option("--values", values_out, "write J* per reachable state as CSV");

  std::string task_a, task_b, diff_domain, diff_domain_b;
  auto* diff = app.add_subcommand("diff", "List the feature edits turning task A into task B");
  diff->add_option("taskA", task_a, "problem file of the first model")->required();
  diff->add_option("taskB", task_b, "problem file of the second model")->required();
  diff->add_option("--domain", diff_domain, "domain file")->required();
  diff->add_option("--domain-b", diff_domain_b, "domain file of the second model, if different");

  ExplainArgs ex;
  auto* explain = app.add_subcommand("explain", "Explain one scavenger-hunt scenario");
  explain->add_option("--method", ex.method, "hrl, oeg or peg")->check(CLI::IsMember({"hrl", "oeg", "peg"}));
  explain->add_option("--scenario", ex.scenario, "scenario JSON file")->required();
  explain->add_option("--catalog", ex.catalog, "catalog directory (bundled one by default)");
  explain->add_option("--seed", ex.seed, "random seed");
  explain->add_option("--episodes", ex.episodes, "SARSA episodes per iteration")->check(CLI::PositiveNumber);
  explain->add_option("--epsilon", ex.epsilon, "exploration parameter")->check(CLI::Range(0.0, 1.0));
  explain->add_option("--epsilon-convention", ex.convention, "paper or standard")
      ->check(CLI::IsMember({"paper", "standard"}));
  explain->add_option("--format", ex.format, "json, english or both")->check(CLI::IsMember({"json", "english", "both"}));
  explain->add_flag("--trace", ex.trace, "print the execution trace");

  std::string scenarios_dir, out_path, bench_catalog;
  std::uint64_t bench_seed = 1;
  std::size_t bench_episodes = 5000;
  auto* bench = app.add_subcommand("bench", "Run every method on a scenario directory");
  bench->add_option("--scenarios", scenarios_dir, "directory of scenario JSON files")->required();
  bench->add_option("--out", out_path, "CSV report path");
  bench->add_option("--seed", bench_seed, "random seed");
  bench->add_option("--catalog", bench_catalog, "catalog directory (bundled one by default)");
  bench->add_option("--episodes", bench_episodes, "SARSA episodes per iteration")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*parse) return cmd_parse(file);
    if (*plan) return cmd_plan(domain, problem, gamma, kernel, values_out);
    if (*diff) return cmd_diff(task_a, task_b, diff_domain, diff_domain_b);
    if (*explain) return cmd_explain(ex);
    if (*bench) return cmd_bench(scenarios_dir, out_path, bench_seed, bench_catalog, bench_episodes);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const UnsolvableError& e) {
    std::cerr << "unsolvable: " << e.what() << "\n";
    return kUnsolvable;
  } catch (const IrreconcilableError& e) {
    std::cerr << "irreconcilable: " << e.what() << "\n";
    return kUnsolvable;
  } catch (const ModelError& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return kParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
