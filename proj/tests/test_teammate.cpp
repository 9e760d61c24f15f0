#include <doctest.h>

#include <algorithm>

#include "explane/error.hpp"
#include "explane/planner/planner.hpp"
#include "explane/reconcile/reconcile.hpp"
#include "explane/scavenger/bench.hpp"
#include "explane/sim/teammate.hpp"

using namespace explane;
using namespace explane::sim;

namespace {

scavenger::DomainCatalog& catalog() {
  static auto c = scavenger::load_catalog();
  return c;
}

scavenger::Scenario bundled(const std::string& id) {
  return scavenger::Scenario::load(scavenger::bundled_dir() + "/scenarios/" + id + ".json");
}

reconcile::Explanation explain(const std::vector<std::string>& changes) {
  return reconcile::mindset_adapt(catalog().human_mindset(), catalog().robot_mindset(changes), {}, 1).explanation;
}

TraceEntry entry(const std::string& action, Flag flag, std::vector<DeliveredStep> delivered = {}) {
  TraceEntry e;
  e.state = mdp::State(2);
  e.action = action;
  e.flag = flag;
  e.explanations = std::move(delivered);
  return e;
}

}  // namespace

TEST_CASE("expected action follows the nominal route and stops at the goal") {
  const auto& nominal = catalog().nominal;
  SimHuman h(catalog().human_mindset(), nominal);
  REQUIRE(h.expected_action());
  CHECK(*h.expected_action() == "move room1 room5");
  CHECK(h.observe("move room1 room5") == Flag::Expected);
  CHECK(h.observe("ride-elevator room5") == Flag::Expected);
  CHECK_FALSE(h.expected_action().has_value());
}

TEST_CASE("observe flags a mismatch and rejects inapplicable actions") {
  const auto robot = catalog().robot_task({"power-out"});
  SimHuman h(catalog().human_mindset(), robot);
  const auto plan = planner::plan_task(robot);
  REQUIRE(plan);
  CHECK(h.observe(plan->actions.front()) == Flag::Questionable);
  SimHuman fresh(catalog().human_mindset(), robot);
  CHECK_THROWS_AS(fresh.observe("ride-elevator room5"), InapplicableActionError);
  CHECK_THROWS_AS(fresh.observe("no such action"), InapplicableActionError);
}

TEST_CASE("absorbing explanations") {
  const auto robot = catalog().robot_task({"power-out"});
  SimHuman h(catalog().human_mindset(), robot);
  const auto before = *h.expected_plan();
  CHECK(h.absorb_explanation({}) == 0.0);
  CHECK(h.expected_plan()->actions == before.actions);

  const auto e = explain({"power-out"});
  REQUIRE(e.steps.size() == 1);
  CHECK(h.absorb_explanation(e.steps[0]) > 0.0);
  const auto& after = h.expected_plan()->actions;
  CHECK(std::find(after.begin(), after.end(), "ride-elevator room5") == after.end());
  CHECK(std::find(after.begin(), after.end(), "exit-door room2") == after.end());
  CHECK(after == planner::plan_task(robot)->actions);
}

TEST_CASE("property: a reconciled human raises no flags, and one flag per injection") {
  for (const auto& s : scavenger::load_scenarios(scavenger::bundled_dir() + "/scenarios")) {
    CAPTURE(s.id);
    const auto robot = catalog().robot_task(s.changes);
    const auto e = explain(s.changes);
    SimHuman h(catalog().human_mindset(), robot);
    h.absorb(e);
    CHECK(h.expected_plan()->actions == planner::plan_task(robot)->actions);
    auto clean = execute(robot, h, {}, {}, s.seed);
    CHECK(clean.questionable() == 0);
    CHECK(clean.size() == planner::plan_task(robot)->size());

    // off-route states can expose differences the plan-relevant filter dropped,
    // so injections are checked against a feature-identical human
    auto full = catalog().human_mindset();
    full.task = model::apply_changes(full.task, model::model_diff(full.task, robot));
    SimHuman g(full, robot);
    const std::vector<std::size_t> inject{0};
    auto noisy = execute(robot, g, {}, inject, s.seed);
    CHECK(noisy.questionable() == inject.size());
    for (const auto& entry : noisy.entries) CHECK(entry.injected == (entry.flag == Flag::Questionable));
  }
}

TEST_CASE("final mindset does not depend on the absorption order") {
  const auto s = bundled("P7");
  const auto robot = catalog().robot_task(s.changes);
  auto e = explain(s.changes);
  REQUIRE(e.steps.size() >= 3);
  std::vector<std::size_t> order(e.steps.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::optional<std::vector<std::string>> reference;
  std::size_t perms = 0;
  do {
    SimHuman h(catalog().human_mindset(), robot);
    for (auto i : order) h.absorb_explanation(e.steps[i]);
    if (!reference) reference = h.expected_plan()->actions;
    CHECK(h.expected_plan()->actions == *reference);
  } while (std::next_permutation(order.begin(), order.end()) && ++perms < 24);
}

TEST_CASE("execution trace text round trip") {
  const auto s = bundled("P2");
  const auto robot = catalog().robot_task(s.changes);
  SimHuman h(catalog().human_mindset(), robot);
  auto trace = execute(robot, h, explain(s.changes), s.inject, s.seed);
  const auto text = trace.to_text();
  CHECK(text.find(" | questionable | ") != std::string::npos);
  auto back = ExecutionTrace::from_text(text);
  for (auto& e : trace.entries) e.injected = false;  // not part of the text form
  CHECK(back == trace);
  CHECK_THROWS_AS(ExecutionTrace::from_text("01 | a | expected\n"), ParseError);
  CHECK_THROWS_AS(ExecutionTrace::from_text("0x | a | expected | -\n"), ParseError);
  CHECK_THROWS_AS(ExecutionTrace::from_text("01 | a | maybe | -\n"), ParseError);
  CHECK_THROWS_AS(ExecutionTrace::from_text("01 | a | expected | o:abc\n"), ParseError);
}

TEST_CASE("trace reward model") {
  SUBCASE("zero flags and zero replanning give a zero step reward") {
    ExecutionTrace t;
    t.entries = {entry("a", Flag::Expected, {{"o", 0.0}}), entry("b", Flag::Expected)};
    auto r = trace_reward_model({t}, {"o"});
    CHECK(r.step.at({0, "o"}) == 0.0);
    CHECK(r.terminal_bonus == 2.0);
  }
  SUBCASE("an option that prevents flags earns more") {
    // "good" first: no flags follow it; "bad" first: two flags follow it
    ExecutionTrace good, bad;
    good.entries = {entry("a", Flag::Expected, {{"good", 0.0}}), entry("b", Flag::Expected)};
    bad.entries = {entry("a", Flag::Questionable, {{"bad", 0.0}}), entry("b", Flag::Questionable)};
    auto r = trace_reward_model({good, bad}, {"good", "bad"});
    CHECK(r.step.at({0, "good"}) > r.step.at({0, "bad"}));
    CHECK(r.step.at({0, "bad"}) == -1.0);
  }
  SUBCASE("recovers a generating model on visited pairs") {
    // generator: per (state, option) penalty = flags + replan, normalised by the largest
    const std::vector<std::pair<double, int>> gen{{1.0, 0}, {0.5, 2}, {0.0, 1}};
    ExecutionTrace t;
    const std::vector<std::string> ids{"o1", "o2", "o3"};
    for (std::size_t i = 0; i < gen.size(); ++i) {
      t.entries.push_back(entry("x", Flag::Expected, {{ids[i], gen[i].first}}));
      for (int f = 0; f < gen[i].second; ++f) t.entries.push_back(entry("y", Flag::Questionable));
    }
    auto r = trace_reward_model({t, t}, ids);
    const double scale = 2.5;
    hrl::IntentState s = 0;
    for (std::size_t i = 0; i < gen.size(); ++i) {
      CHECK(r.step.at({s, ids[i]}) == doctest::Approx(-(gen[i].first + gen[i].second) / scale).epsilon(1e-6));
      s |= hrl::bit(i);
    }
    for (const auto& [key, v] : r.step) {
      CHECK(v <= 0.0);
      CHECK(v >= -1.0);
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(trace_reward_model({}, {"o"}), ModelError);
    ExecutionTrace t;
    t.entries = {entry("a", Flag::Expected, {{"stranger", 0.0}})};
    CHECK_THROWS_AS(trace_reward_model({t}, {"o"}), ModelError);
  }
}
