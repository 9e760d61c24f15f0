#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "explane/hrl/intent_mdp.hpp"
#include "explane/mdp/state.hpp"
#include "explane/planner/plan.hpp"
#include "explane/reconcile/reconcile.hpp"

namespace explane::sim {

enum class Flag { Expected, Questionable };

std::string_view to_string(Flag f);
Flag flag_from_string(std::string_view s);

/// Simulated teammate: an optimal planner over its own (possibly outdated)
/// model that watches the robot act in the real world.
class SimHuman {
 public:
  /// The human starts in the robot task's initial state.
  SimHuman(reconcile::Mindset mindset, const model::PlanningTask& robot, double gamma = 0.95);

  const reconcile::Mindset& mindset() const { return mindset_; }
  const mdp::State& current_state() const { return state_; }
  /// Optimal plan of the current mindset from the current state, nullopt when unsolvable.
  const std::optional<planner::Plan>& expected_plan() const { return expected_; }

  /// Head of the expected plan; nullopt when unsolvable or at the goal.
  std::optional<std::string> expected_action() const;

  /// Flags the robot action and advances through the robot model. Throws
  /// InapplicableActionError when the action is not applicable.
  Flag observe(const std::string& robot_action);

  /// Applies the step's changes and replans. Returns the edit distance between
  /// the expected plans before and after (infinite when solvability flips).
  double absorb_explanation(const reconcile::ExplanationStep& step);
  void absorb(const reconcile::Explanation& e);

 private:
  void replan();

  reconcile::Mindset mindset_;
  model::PlanningTask robot_;
  double gamma_;
  mdp::State state_;
  std::optional<planner::Plan> expected_;
};

struct DeliveredStep {
  std::string id;
  double replan = 0.0;

  bool operator==(const DeliveredStep&) const = default;
};

struct TraceEntry {
  mdp::State state;  // before the action
  std::string action;
  Flag flag = Flag::Expected;
  std::vector<DeliveredStep> explanations;  // delivered right before the action
  bool injected = false;

  bool operator==(const TraceEntry&) const = default;
};

struct ExecutionTrace {
  std::vector<TraceEntry> entries;

  std::size_t questionable() const;
  std::size_t size() const { return entries.size(); }
  bool operator==(const ExecutionTrace&) const = default;
  /// One line per entry: "state-bits | action | flag | id:replan,id:replan".
  /// An empty explanation list is written as "-". Injection is not recorded.
  std::string to_text() const;
  static ExecutionTrace from_text(const std::string& text);
};

/// Executes the robot's optimal plan from its initial state while the human
/// watches. Steps of `e` are delivered before plan step `deliver_before`
/// (up front when negative). At executed-action indices listed in `inject`
/// the robot performs a random applicable action other than the one either
/// side expects, then replans. Throws UnsolvableError when the robot gets
/// stuck.
ExecutionTrace execute(const model::PlanningTask& robot, SimHuman& human, const reconcile::Explanation& e,
                       const std::vector<std::size_t>& inject, std::uint64_t seed, double gamma = 0.95);

/// Step rewards -(flags until the next explanation) - replanning cost,
/// averaged per (intent state, option) and scaled into [-1, 0]; the terminal
/// bonus is 2 so completion dominates. Throws ModelError on an empty trace set
/// or an explanation id outside `option_ids`.
hrl::RewardModel trace_reward_model(const std::vector<ExecutionTrace>& traces,
                                    const std::vector<std::string>& option_ids);

}  // namespace explane::sim
