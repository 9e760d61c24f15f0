#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "explane/model/features.hpp"
#include "explane/planner/plan.hpp"

namespace explane::hrl {

/// Bitset over a sorted option vocabulary: bit i set once option i has been explained.
using IntentState = std::uint32_t;

inline constexpr std::size_t kMaxOptions = 16;

inline IntentState bit(std::size_t option) { return IntentState{1} << option; }
/// Character i is '1' iff option i is set.
std::string to_bits(IntentState s, std::size_t width);
IntentState from_bits(const std::string& bits);

/// Intent-level action: explaining it applies a fixed, non-empty bundle of
/// model edits to the human's model.
struct Option {
  std::string id;
  std::string intent;            // human-readable intent label
  model::ChangeSet changes;      // its action-level feature changes
  std::vector<std::string> requires_explained;  // I_o: options that must precede this one
};

/// Human models reached by explaining every subset of options, and whether each
/// one already reproduces the robot's plan.
struct IntentLattice {
  struct Node {
    bool reachable = false;
    bool terminal = false;
    std::optional<model::PlanningTask> human;
    std::optional<planner::Plan> plan;  // human's optimal plan; nullopt if unsolvable
  };

  std::vector<Option> options;  // sorted by id
  std::vector<IntentState> prerequisites;  // per option
  model::PlanningTask robot;
  planner::Plan robot_plan;
  double gamma = 0.95;
  std::vector<Node> nodes;  // indexed by IntentState

  std::size_t width() const { return options.size(); }
  bool legal(IntentState s, std::size_t o) const {
    return !(s & bit(o)) && (s & prerequisites[o]) == prerequisites[o];
  }
};

/// Builds the lattice. Options must be non-empty, pairwise change-disjoint and
/// consist of edits from Δ(human, robot); otherwise ModelError. Throws
/// UnsolvableError when the robot model has no plan.
IntentLattice build_lattice(const model::PlanningTask& human, const model::PlanningTask& robot,
                            std::vector<Option> options, double gamma);

/// Per-transition rewards r_o plus a completion bonus paid on entering a
/// terminal intent state.
struct RewardModel {
  std::map<std::pair<IntentState, std::string>, double> step;
  double default_step = 0.0;
  double terminal_bonus = 1.0;

  double reward(IntentState s, const std::string& option) const;
};

/// Tabular intent-level MDP. States are option bitsets; explaining option o
/// from s leads to s | bit(o).
struct IntentMdp {
  std::vector<std::string> option_ids;  // sorted
  std::vector<char> reachable;          // per state
  std::vector<char> terminal;           // per state
  std::vector<IntentState> legal;       // per state: mask of legal options
  std::vector<double> step_reward;      // per state * width + option
  double terminal_bonus = 1.0;
  IntentState start = 0;

  std::size_t width() const { return option_ids.size(); }
  std::size_t state_count() const { return reachable.size(); }
  static IntentState next(IntentState s, std::size_t o) { return s | bit(o); }
  double reward(IntentState s, std::size_t o) const {
    const double r = step_reward[s * width() + o];
    return terminal[next(s, o)] ? r + terminal_bonus : r;
  }
  std::size_t reachable_count() const;
  std::optional<std::size_t> option_index(const std::string& id) const;
};

/// Intent MDP over an already built lattice. Throws ModelError when the reward
/// model violates completion dominance: every reward entering a terminal state
/// must exceed every reward of a non-terminal step.
IntentMdp make_intent_mdp(const IntentLattice& lattice, const RewardModel& rewards);

/// Builds the lattice and the intent MDP in one go. `target` is the change set
/// the options must cover jointly (Δ(human, robot) when omitted).
IntentMdp make_intent_mdp(const model::PlanningTask& human, const model::PlanningTask& robot,
                          const std::vector<Option>& options, const RewardModel& rewards, double gamma,
                          const std::optional<model::ChangeSet>& target = std::nullopt);

/// Recomputes reachability from `start` over the legal masks and checks dominance.
void finalize(IntentMdp& mdp);

}  // namespace explane::hrl
