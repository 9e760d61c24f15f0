#pragma once

#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "explane/mdp/state.hpp"
#include "explane/model/task.hpp"

namespace explane::mdp {

inline constexpr double kDefaultGamma = 0.95;

/// Explicit reachable sub-graph of a goal-based MDP. Goal states are absorbing
/// and carry no stored edges; every other state lists one edge per applicable
/// action, in action-name order.
struct StateGraph {
  struct Edge {
    int action;
    int target;
  };

  std::vector<State> states;  // states[0] is the start state
  std::vector<char> goal;
  std::vector<std::size_t> offsets;  // CSR: edges of state s are [offsets[s], offsets[s+1])
  std::vector<Edge> edges;
  std::unordered_map<State, int, StateHash> index;

  std::size_t size() const { return states.size(); }
  std::span<const Edge> out(std::size_t s) const {
    return {edges.data() + offsets[s], offsets[s + 1] - offsets[s]};
  }
  std::optional<int> find(const State& s) const {
    auto it = index.find(s);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
};

/// Goal-based MDP <S, A, T, r, gamma, G> compiled from a planning task:
/// deterministic transitions S' = (S ∪ add) \ del, reward 1 on entering G,
/// goal states absorbing with zero reward.
class GoalMdp {
 public:
  /// Throws ModelError unless 0 < gamma < 1. The reachable graph is explored
  /// from `start` (the task's initial state when omitted).
  static GoalMdp compile(const model::PlanningTask& task, double gamma = kDefaultGamma);
  static GoalMdp compile(const model::PlanningTask& task, double gamma, const State& start);

  const model::PlanningTask& task() const { return *task_; }
  double gamma() const { return gamma_; }
  const StateGraph& graph() const { return *graph_; }
  std::shared_ptr<const StateGraph> shared_graph() const { return graph_; }
  const State& start() const { return graph_->states.front(); }

  State initial_state() const;
  bool is_goal(const State& s) const { return s.contains_all(task_->goal()); }
  bool applicable(const State& s, int action) const;
  /// Defined iff the action is applicable or `s` is a goal state (self-loop).
  std::optional<State> successor(const State& s, int action) const;
  /// R(s, a, s'): 1 when a non-goal state moves into G, 0 otherwise.
  double reward(const State& s, const State& next) const { return !is_goal(s) && is_goal(next) ? 1.0 : 0.0; }
  double cost(int action) const { return task_->actions()[static_cast<std::size_t>(action)].cost; }

 private:
  std::shared_ptr<const model::PlanningTask> task_;
  std::shared_ptr<const StateGraph> graph_;
  double gamma_ = kDefaultGamma;
};

}  // namespace explane::mdp
