#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "explane/error.hpp"
#include "explane/mdp/goal_mdp.hpp"
#include "explane/mdp/value_iteration.hpp"
#include "explane/planner/planner.hpp"
#include "support/toy.hpp"

using namespace explane;
using namespace explane::mdp;
using model::PlanningTask;

namespace {

PlanningTask swap_task() { return PlanningTask({"p", "q"}, {{"a", {"p"}, {"q"}, {"p"}, 1.0}}, {"p"}, {"q"}); }

/// Steps taken by the argmax policy on V*, or -1 when it stalls.
double greedy_value_rollout(const GoalMdp& m, const ValueTable& v, std::size_t limit) {
  const auto& g = m.graph();
  std::size_t s = 0, steps = 0;
  while (!g.goal[s]) {
    if (steps++ > limit || g.out(s).empty()) return -1;
    double best = -1;
    std::size_t next = s;
    for (const auto& e : g.out(s)) {
      const auto t = static_cast<std::size_t>(e.target);
      const double q = (g.goal[t] ? 1.0 : 0.0) + m.gamma() * v.at_index(t);
      if (q > best) best = q, next = t;
    }
    s = next;
  }
  return static_cast<double>(steps);
}

}  // namespace

TEST_CASE("transition rule and legality") {
  const auto t = swap_task();
  const auto m = GoalMdp::compile(t, 0.9);
  const auto s = m.initial_state();
  auto next = m.successor(s, 0);
  REQUIRE(next);
  CHECK(next->true_atoms() == std::vector<int>{*t.atom_index("q")});
  REQUIRE(m.successor(*next, 0).has_value());  // goal self-loop
  CHECK(*m.successor(*next, 0) == *next);
  CHECK(m.reward(*next, *next) == 0.0);
  CHECK(m.reward(s, *next) == 1.0);

  const PlanningTask blocked({"p", "q", "r"}, {{"a", {"r"}, {"q"}, {}, 1.0}}, {"p"}, {"q"});
  const auto mb = GoalMdp::compile(blocked, 0.9);
  CHECK_FALSE(mb.applicable(mb.initial_state(), 0));
  CHECK_FALSE(mb.successor(mb.initial_state(), 0).has_value());
}

TEST_CASE("gamma must lie strictly inside (0, 1)") {
  CHECK_THROWS_AS(GoalMdp::compile(swap_task(), 1.0), ModelError);
  CHECK_THROWS_AS(GoalMdp::compile(swap_task(), 0.0), ModelError);
}

TEST_CASE("J* and V* on small chains") {
  CHECK(optimal_cost(GoalMdp::compile(toy::chain_task(0), 0.9)).at_index(0) == 0.0);
  const auto two = GoalMdp::compile(toy::chain_task(2), 0.9);
  CHECK(optimal_cost(two).at(two.start()) == doctest::Approx(1.9).epsilon(1e-12));
  const auto one = GoalMdp::compile(toy::chain_task(1), 0.9);
  CHECK(optimal_value(one).at(one.start()) == doctest::Approx(1.0));
  CHECK(optimal_value(two).at(two.start()) == doctest::Approx(0.9));
}

TEST_CASE("plan_cost") {
  const auto three = GoalMdp::compile(toy::chain_task(3), 0.9);
  planner::Plan p{{"step0", "step1", "step2"}, three.start()};
  CHECK(plan_cost(three, p) == doctest::Approx(2.71).epsilon(1e-12));
  CHECK(plan_cost(GoalMdp::compile(toy::chain_task(0), 0.9), {{}, GoalMdp::compile(toy::chain_task(0), 0.9).start()}) == 0.0);
  try {
    plan_cost(three, {{"step0", "step2"}, three.start()});
    FAIL("expected an inapplicable step");
  } catch (const InapplicableActionError& e) {
    CHECK(e.step() == 1);
  }
  auto plan = planner::optimal_plan(three);
  REQUIRE(plan);
  CHECK(plan_cost(three, *plan) == doctest::Approx(optimal_cost(three).at(three.start())).epsilon(1e-12));
}

TEST_CASE("unreachable goal yields the infinity sentinel and zero value") {
  const PlanningTask dead({"p", "q"}, {{"a", {"q"}, {"p"}, {}, 1.0}}, {"p"}, {"q"});
  const auto m = GoalMdp::compile(dead);
  CHECK(std::isinf(optimal_cost(m).at(m.start())));
  CHECK(optimal_value(m).at(m.start()) == 0.0);
}

TEST_CASE("property: J* matches a Dijkstra oracle on random 8-atom tasks") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    toy::Rng rng(seed);
    const auto t = toy::random_task(rng, {8, 12, false});
    const auto m = GoalMdp::compile(t);
    const auto oracle = toy::dijkstra_cost(t, m.gamma());
    const double j = optimal_cost(m).at(m.start());
    if (!oracle) {
      CHECK(std::isinf(j));
      continue;
    }
    CHECK(j == doctest::Approx(static_cast<double>(*oracle)).epsilon(1e-9));
  }
}

TEST_CASE("property: Bellman residual, V*/J* consistency, kernel agreement") {
  for (std::uint64_t seed = 100; seed < 160; ++seed) {
    toy::Rng rng(seed);
    const auto m = GoalMdp::compile(toy::random_task(rng, {9, 14, false}));
    SolveOptions serial;
    serial.kernel = Kernel::Serial;
    SolveOptions parallel;
    parallel.kernel = Kernel::Parallel;
    const auto js = optimal_cost(m, serial);
    const auto jp = optimal_cost(m, parallel);
    const auto vs = optimal_value(m, serial);
    const auto vp = optimal_value(m, parallel);
    CHECK(bellman_residual(m, js) <= 1e-9);
    CHECK(bellman_residual(m, vp) <= 1e-9);
    for (std::size_t i = 0; i < js.size(); ++i) {
      CHECK((vs.at_index(i) > 0.0 || m.graph().goal[i]) == std::isfinite(js.at_index(i)));
      CHECK(vs.at_index(i) >= 0.0);
      CHECK(vs.at_index(i) <= 1.0);
      if (std::isfinite(js.at_index(i))) CHECK(js.at_index(i) == doctest::Approx(jp.at_index(i)).epsilon(1e-8));
      else CHECK(std::isinf(jp.at_index(i)));
      CHECK(vs.at_index(i) == doctest::Approx(vp.at_index(i)).epsilon(1e-8));
    }
  }
}

TEST_CASE("property: greedy V* rollout reaches G in BFS-minimal steps under unit costs") {
  std::size_t checked = 0;
  for (std::uint64_t seed = 200; seed < 300; ++seed) {
    toy::Rng rng(seed);
    const auto t = toy::random_task(rng, {8, 12, true});
    const auto m = GoalMdp::compile(t);
    const auto steps = toy::bfs_steps(t);
    const double j = optimal_cost(m).at(m.start());
    CHECK(steps.has_value() == std::isfinite(j));
    if (!steps) continue;
    ++checked;
    CHECK(greedy_value_rollout(m, optimal_value(m), 64) == doctest::Approx(static_cast<double>(*steps)));
    auto plan = planner::optimal_plan(m);
    REQUIRE(plan);
    CHECK(plan->size() == *steps);
  }
  CHECK(checked > 20);
}

TEST_CASE("value table CSV export") {
  const auto m = GoalMdp::compile(toy::chain_task(2), 0.9);
  const auto csv = optimal_cost(m).to_csv();
  CHECK(csv.find(m.start().to_bits()) != std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') >= 3);
}
