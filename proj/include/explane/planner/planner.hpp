#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "explane/mdp/goal_mdp.hpp"
#include "explane/mdp/value_iteration.hpp"
#include "explane/planner/plan.hpp"

namespace explane::planner {

/// Deterministic policy defined exactly on the states visited by a plan.
struct Policy {
  std::map<mdp::State, std::string> action_at;

  std::size_t size() const { return action_at.size(); }
  bool empty() const { return action_at.empty(); }
};

/// Minimum discounted-cost plausible plan from the MDP's start state, or
/// nullopt when G is unreachable. Among equal-cost plans, the one whose action
/// names are lexicographically smallest step by step wins.
std::optional<Plan> optimal_plan(const mdp::GoalMdp& mdp, const mdp::SolveOptions& options = {});
/// Same, reusing an already computed J* table of `mdp`.
std::optional<Plan> optimal_plan(const mdp::GoalMdp& mdp, const mdp::ValueTable& cost);
/// optimal_plan or UnsolvableError.
Plan require_plan(const mdp::GoalMdp& mdp);

/// Product of the step transition probabilities T(s_t, a_t, s_{t+1}) in {0, 1}
/// along the plan, times 1 if the final state is a goal and 0 otherwise.
int plan_probability(const mdp::GoalMdp& mdp, const Plan& plan);
bool is_plausible(const mdp::GoalMdp& mdp, const Plan& plan);

/// Throws ModelError for non-plausible plans.
Policy extract_policy(const mdp::GoalMdp& mdp, const Plan& plan);
/// Follows the policy from `start` until a goal or an undefined state.
std::vector<std::string> rollout(const mdp::GoalMdp& mdp, const Policy& policy, const mdp::State& start);
/// Product of T along the policy's rollout from `start`; 1 iff it reaches G.
int policy_probability(const mdp::GoalMdp& mdp, const Policy& policy, const mdp::State& start);

bool plans_equal(const Plan& a, const Plan& b);

/// One action per line: "t: (action obj...)", t counted from 0.
std::string write_plan(const Plan& plan);
/// Inverse of write_plan; returns the action names.
std::vector<std::string> read_plan(const std::string& text);

/// Convenience for callers holding only a task.
std::optional<Plan> plan_task(const model::PlanningTask& task, double gamma = mdp::kDefaultGamma);
std::optional<Plan> plan_task_from(const model::PlanningTask& task, const mdp::State& start,
                                   double gamma = mdp::kDefaultGamma);

/// Levenshtein distance between two action sequences.
std::size_t edit_distance(const std::vector<std::string>& a, const std::vector<std::string>& b);

}  // namespace explane::planner
