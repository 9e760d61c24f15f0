// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "explane/error.hpp"
#include "explane/hrl/sarsa.hpp"
#include "explane/planner/planner.hpp"
#include "explane/reconcile/reconcile.hpp"
#include "explane/scavenger/bench.hpp"
#include "support/toy.hpp"

using namespace explane;

namespace {

constexpr std::size_t kPlannerTasks = 100;
constexpr double kPlannerSeconds = 10.0;
constexpr std::size_t kSarsaSeeds = 20;
constexpr std::size_t kSarsaEpisodes = 10000;
constexpr double kSarsaTolerance = 1e-3;
constexpr double kSarsaSeconds = 30.0;
constexpr double kHrlMeanMax = 5.0;
constexpr double kFlatMeanMin = 7.0;
constexpr double kBenchSeconds = 60.0;
constexpr std::size_t kTotalActions = 36;
constexpr std::size_t kInjected = 3;
constexpr std::size_t kToyInstances = 100;
constexpr std::size_t kToyAgreeMin = 95;
constexpr std::size_t kToyMaxDelta = 6;
constexpr double kToySeconds = 60.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome planner_optimality() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t agree = 0, solvable = 0;
  for (std::size_t i = 0; i < kPlannerTasks; ++i) {
    toy::Rng rng(1000 + i);
    toy::TaskShape shape;
    shape.atoms = 6 + i % 7;
    shape.actions = 8 + i % 9;
    auto task = toy::random_task(rng, shape);
    auto oracle = toy::dijkstra_cost(task, mdp::kDefaultGamma);
    auto mdp = mdp::GoalMdp::compile(task);
    auto plan = planner::optimal_plan(mdp);
    if (!oracle || !plan) {
      agree += !oracle && !plan;
      continue;
    }
    ++solvable;
    if (mdp::exact_plan_cost(mdp, *plan) == *oracle) ++agree;
    else std::printf("  task %zu: planner %.12f, oracle %.12f\n", i, mdp::plan_cost(mdp, *plan),
                     static_cast<double>(*oracle));
  }
  const double secs = seconds_since(t0);
  return {agree == kPlannerTasks && secs < kPlannerSeconds,
          std::to_string(agree) + "/" + std::to_string(kPlannerTasks) + " exact (" + std::to_string(solvable) +
              " solvable), " + std::to_string(secs) + " s"};
}

Outcome sarsa_correctness() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t agree = 0;
  double worst = 0.0;
  for (std::size_t seed = 0; seed < kSarsaSeeds; ++seed) {
    toy::Rng rng(77 + seed);
    auto mdp = toy::random_intent_mdp(rng, 2 + seed % 4);
    hrl::SarsaParams params;
    params.episodes = kSarsaEpisodes;
    auto q = hrl::sarsa(mdp, params, seed);
    const double err = std::abs(hrl::policy_return(mdp, q, params.gamma) - toy::dp_optimal_return(mdp, params.gamma));
    worst = std::max(worst, err);
    agree += err <= kSarsaTolerance;
  }
  const double secs = seconds_since(t0);
  return {agree == kSarsaSeeds && secs < kSarsaSeconds,
          std::to_string(agree) + "/" + std::to_string(kSarsaSeeds) + " within 1e-3 (worst " + std::to_string(worst) +
              "), " + std::to_string(secs) + " s"};
}

struct Bench {
  std::vector<scavenger::ReportRow> rows;
  std::vector<scavenger::Scenario> scenarios;
  double seconds = 0.0;
};

const Bench& bench() {
  static const Bench b = [] {
    Bench out;
    const auto t0 = std::chrono::steady_clock::now();
    auto catalog = scavenger::load_catalog();
    out.scenarios = scavenger::load_scenarios(scavenger::bundled_dir() + "/scenarios");
    out.rows = scavenger::run_bench(catalog, out.scenarios, {}, 1);
    out.seconds = seconds_since(t0);
    return out;
  }();
  return b;
}

Outcome explanation_sizes() {
  const auto& b = bench();
  double sum[3] = {0, 0, 0};
  bool ordered = true;
  for (std::size_t i = 0; i < b.rows.size(); i += 3) {
    for (std::size_t m = 0; m < 3; ++m) sum[m] += static_cast<double>(b.rows[i + m].size);
    ordered = ordered && b.rows[i].size <= b.rows[i + 1].size && b.rows[i].size <= b.rows[i + 2].size;
  }
  const double n = static_cast<double>(b.scenarios.size());
  const double hrl = sum[0] / n, oeg = sum[1] / n, peg = sum[2] / n;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu scenarios, mean |E| hrl %.2f oeg %.2f peg %.2f, per-scenario order %s, %.2f s",
                b.scenarios.size(), hrl, oeg, peg, ordered ? "holds" : "violated", b.seconds);
  return {b.scenarios.size() == 10 && hrl <= kHrlMeanMax && oeg >= kFlatMeanMin && peg >= kFlatMeanMin && ordered &&
              b.seconds < kBenchSeconds,
          buf};
}

Outcome power_out() {
  auto catalog = scavenger::load_catalog();
  auto s = scavenger::Scenario::load(scavenger::bundled_dir() + "/power_out.json");
  bool pass = s.changes == std::vector<std::string>{"power-out"};
  std::string detail;
  for (auto m : scavenger::kMethods) {
    auto row = scavenger::run_scenario(catalog, s, m, {}, scavenger::cell_seed(1, s.id, m));
    detail += std::string(scavenger::to_string(m)) + " |E|=" + std::to_string(row.size) + " ";
    if (m == scavenger::Method::Hrl) {
      pass = pass && row.size == 1 && row.explanation.steps.size() == 1 &&
             row.explanation.steps[0].level == reconcile::Disclosure::IntentOnly &&
             row.explanation.steps[0].option == "power-out";
    } else {
      pass = pass && row.size >= 2;
      for (const auto& st : row.explanation.steps) pass = pass && st.level == reconcile::Disclosure::ActionUnit;
    }
  }
  const auto& labels = catalog.change("power-out").labels;
  bool pin = false, elevator = false;
  for (const auto& [edit, label] : labels) {
    pin = pin || label == "activate_pin";
    elevator = elevator || label == "elevator_out_of_service";
  }
  return {pass && pin && elevator, detail + "(units: activate_pin, elevator_out_of_service)"};
}

Outcome questionable_actions() {
  const auto& b = bench();
  std::size_t actions = 0, injected = 0, flags = 0;
  for (const auto& s : b.scenarios) injected += s.inject.size();
  for (const auto& r : b.rows) {
    if (r.method != scavenger::Method::Hrl) continue;
    actions += r.actions;
    flags += r.flags;
  }
  return {actions == kTotalActions && injected == kInjected && flags == kInjected,
          std::to_string(flags) + " flags, " + std::to_string(injected) + " injected, " + std::to_string(actions) +
              " executed actions"};
}

Outcome conciseness() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t agree = 0;
  for (std::size_t i = 0; i < kToyInstances; ++i) {
    toy::Rng rng(5000 + i);
    auto inst = toy::random_reconcile(rng, kToyMaxDelta);
    auto problem = reconcile::AdaptationProblem(inst.human, inst.robot, {});
    auto oracle = reconcile::concise_oracle(problem);
    auto report = reconcile::mindset_adapt(problem, {}, i);
    if (report.explanation.total_size() == oracle.total_size()) {
      ++agree;
      continue;
    }
    std::printf("  instance %zu: adapt |E|=%zu, oracle |E|=%zu\n", i, report.explanation.total_size(),
                oracle.total_size());
    for (const auto& line : report.q_trace) std::printf("    %s\n", line.c_str());
  }
  const double secs = seconds_since(t0);
  return {agree >= kToyAgreeMin && secs < kToySeconds,
          std::to_string(agree) + "/" + std::to_string(kToyInstances) + " match the oracle, " + std::to_string(secs) +
              " s"};
}

Outcome soundness() {
  const auto& b = bench();
  std::size_t sound = 0;
  for (const auto& r : b.rows) sound += r.sound;
  return {sound == b.rows.size() && !b.rows.empty(),
          std::to_string(sound) + "/" + std::to_string(b.rows.size()) + " cells sound"};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"planner optimality", planner_optimality},   {"sarsa correctness", sarsa_correctness},
      {"explanation size", explanation_sizes},      {"single power-out scenario", power_out},
      {"questionable actions", questionable_actions}, {"conciseness", conciseness},
      {"soundness", soundness},
  };
  int failed = 0;
  int n = 1;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d (%s): %s - %s\n", n++, name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
