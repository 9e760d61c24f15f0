#include <doctest.h>

#include "explane/error.hpp"
#include "explane/planner/planner.hpp"
#include "explane/scavenger/bench.hpp"
#include "support/toy.hpp"

using namespace explane;
using namespace explane::planner;
using mdp::GoalMdp;

TEST_CASE("goal already satisfied gives the empty plan") {
  const model::PlanningTask t({"g"}, {}, {"g"}, {"g"});
  const auto m = GoalMdp::compile(t);
  auto p = optimal_plan(m);
  REQUIRE(p);
  CHECK(p->empty());
  CHECK(mdp::plan_cost(m, *p) == 0.0);
  CHECK(is_plausible(m, *p));
  CHECK(extract_policy(m, *p).empty());
}

TEST_CASE("nominal scavenger route leaves through the elevator") {
  const auto catalog = scavenger::load_catalog();
  auto p = plan_task(catalog.nominal);
  REQUIRE(p);
  CHECK(p->actions == std::vector<std::string>{"move room1 room5", "ride-elevator room5"});
}

TEST_CASE("plausibility") {
  const auto m = GoalMdp::compile(toy::chain_task(3));
  const auto s = m.start();
  CHECK(is_plausible(m, {{"step0", "step1", "step2"}, s}));
  CHECK_FALSE(is_plausible(m, {{"step0", "step2", "step1"}, s}));
  CHECK_FALSE(is_plausible(m, {{"step0", "step1"}, s}));
  CHECK(plan_probability(m, {{"step0", "step1"}, s}) == 0);
  CHECK_FALSE(is_plausible(m, {{"missing"}, s}));
}

TEST_CASE("unsolvable tasks") {
  const model::PlanningTask t({"p", "q"}, {{"a", {"q"}, {"p"}, {}, 1.0}}, {"p"}, {"q"});
  const auto m = GoalMdp::compile(t);
  CHECK_FALSE(optimal_plan(m).has_value());
  CHECK_THROWS_AS(require_plan(m), UnsolvableError);
}

TEST_CASE("policy extraction") {
  const auto m = GoalMdp::compile(toy::chain_task(3));
  auto p = require_plan(m);
  auto policy = extract_policy(m, p);
  CHECK(policy.size() == 3);
  CHECK(rollout(m, policy, m.start()) == p.actions);
  CHECK(policy_probability(m, policy, m.start()) == 1);
  CHECK_THROWS_AS(extract_policy(m, {{"step0"}, m.start()}), ModelError);
}

TEST_CASE("plan equality is sequence equality") {
  // two equal-cost routes to g
  const model::PlanningTask t({"s", "l", "r", "g"},
                              {{"left", {"s"}, {"l"}, {"s"}, 1.0},
                               {"right", {"s"}, {"r"}, {"s"}, 1.0},
                               {"from-left", {"l"}, {"g"}, {"l"}, 1.0},
                               {"from-right", {"r"}, {"g"}, {"r"}, 1.0}},
                              {"s"}, {"g"});
  const auto m = GoalMdp::compile(t);
  const Plan a{{"left", "from-left"}, m.start()};
  const Plan b{{"right", "from-right"}, m.start()};
  CHECK(plans_equal(a, a));
  CHECK(mdp::plan_cost(m, a) == mdp::plan_cost(m, b));
  CHECK_FALSE(plans_equal(a, b));
  // ties go to the lexicographically smaller action name
  CHECK(require_plan(m).actions == a.actions);
}

TEST_CASE("plan text round trip") {
  const Plan p{{"move room1 room2", "exit-door room2"}, {}};
  const auto text = write_plan(p);
  CHECK(text == "0: (move room1 room2)\n1: (exit-door room2)\n");
  CHECK(read_plan(text) == p.actions);
}

TEST_CASE("property: optimal plans are plausible, minimal and deterministic") {
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 400 && checked < 60; ++seed) {
    toy::Rng rng(seed);
    const auto t = toy::random_task(rng, {6, 8, false});
    if (toy::reachable_states(t) > 10) continue;
    const auto m = GoalMdp::compile(t);
    auto p = optimal_plan(m);
    if (!p) continue;
    ++checked;
    CHECK(is_plausible(m, *p));
    CHECK(plan_probability(m, *p) == 1);
    const double best = mdp::plan_cost(m, *p);
    for (const auto& other : toy::enumerate_plans(t, p->size())) {
      const Plan q{other, m.start()};
      CHECK(is_plausible(m, q));
      CHECK(mdp::plan_cost(m, q) >= best - 1e-12);
    }
    auto again = optimal_plan(GoalMdp::compile(t));
    REQUIRE(again);
    CHECK(plans_equal(*p, *again));
    const auto policy = extract_policy(m, *p);
    CHECK(rollout(m, policy, m.start()) == p->actions);
  }
  CHECK(checked >= 20);
}

TEST_CASE("property: plausibility iff the step-probability product is 1") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    toy::Rng rng(seed);
    const auto t = toy::random_task(rng, {6, 8, false});
    const auto m = GoalMdp::compile(t);
    std::uniform_int_distribution<std::size_t> pick(0, t.actions().size() - 1);
    for (int k = 0; k < 10; ++k) {
      Plan p{{}, m.start()};
      for (int i = 0; i < 3; ++i) p.actions.push_back(t.actions()[pick(rng)].name);
      CHECK(is_plausible(m, p) == (plan_probability(m, p) == 1));
    }
  }
}

TEST_CASE("edit distance") {
  CHECK(edit_distance({"a", "b"}, {"a", "b"}) == 0);
  CHECK(edit_distance({"a", "c"}, {"a", "b", "c"}) == 1);
  CHECK(edit_distance({}, {"a", "b"}) == 2);
  CHECK(edit_distance({"a", "b"}, {"b", "a"}) == 2);
}
