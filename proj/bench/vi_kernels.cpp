// Serial (Gauss-Seidel) against parallel (Jacobi, OpenMP) value iteration.
#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "explane/mdp/goal_mdp.hpp"
#include "explane/mdp/value_iteration.hpp"
#include "explane/scavenger/bench.hpp"

using namespace explane;

namespace {

/// n switches; setting is cheap, clearing costs more, the goal is all on.
/// Every one of the 2^n states is reachable.
model::PlanningTask switches(std::size_t n) {
  std::vector<std::string> atoms;
  std::vector<model::ActionSpec> actions;
  for (std::size_t i = 0; i < n; ++i) atoms.push_back("on" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i) {
    actions.push_back({"set" + std::to_string(i), {}, {atoms[i]}, {}, 1.0});
    actions.push_back({"clear" + std::to_string(i), {atoms[i]}, {}, {atoms[i]}, 2.0});
  }
  return model::PlanningTask(atoms, actions, {}, atoms);
}

model::PlanningTask scavenger_task() {
  const auto catalog = scavenger::load_catalog();
  std::vector<std::string> all;
  for (const auto& c : catalog.changes) all.push_back(c.name);
  return catalog.robot_task(all);
}

void run(benchmark::State& state, const mdp::GoalMdp& m, mdp::Kernel kernel) {
  mdp::SolveOptions opt;
  opt.kernel = kernel;
  std::size_t sweeps = 0;
  for (auto _ : state) {
    auto j = mdp::optimal_cost(m, opt);
    sweeps = j.stats().sweeps;
    benchmark::DoNotOptimize(j.values().data());
  }
  state.counters["states"] = static_cast<double>(m.graph().size());
  state.counters["sweeps"] = static_cast<double>(sweeps);
}

void BM_Switches(benchmark::State& state, mdp::Kernel kernel) {
  static const auto m = mdp::GoalMdp::compile(switches(14));
  run(state, m, kernel);
}

void BM_Scavenger(benchmark::State& state, mdp::Kernel kernel) {
  static const auto m = mdp::GoalMdp::compile(scavenger_task());
  run(state, m, kernel);
}

}  // namespace

BENCHMARK_CAPTURE(BM_Switches, serial, mdp::Kernel::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Switches, parallel, mdp::Kernel::Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Scavenger, serial, mdp::Kernel::Serial)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(BM_Scavenger, parallel, mdp::Kernel::Parallel)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
