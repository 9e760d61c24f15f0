#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "explane/hrl/intent_mdp.hpp"
#include "explane/model/task.hpp"
#include "explane/reconcile/reconcile.hpp"

namespace toy {

using Rational = boost::multiprecision::cpp_rational;
using Rng = std::mt19937_64;

struct TaskShape {
  std::size_t atoms = 8;     // at most 31
  std::size_t actions = 12;
  bool unit_cost = false;    // otherwise costs drawn from {1, 2}
};

/// Random STRIPS task over atoms "p0".."p<n-1>"; goal is one or two atoms.
explane::model::PlanningTask random_task(Rng& rng, const TaskShape& shape);

/// Oracles below explore the explicit state graph with their own successor
/// function; they never touch the library's MDP compiler.
std::size_t reachable_states(const explane::model::PlanningTask& task);

/// Minimum of sum_t gamma^t c_t over goal-reaching action sequences no longer
/// than the number of reachable states, by Dijkstra over (state, depth) in
/// exact arithmetic on the binary value of gamma. nullopt when G is unreachable.
std::optional<Rational> dijkstra_cost(const explane::model::PlanningTask& task, double gamma);

/// Fewest steps to the goal, by breadth-first search.
std::optional<std::size_t> bfs_steps(const explane::model::PlanningTask& task);

/// Every goal-reaching action sequence of at most `max_len` steps (goal states are
/// not extended), as action-name lists.
std::vector<std::vector<std::string>> enumerate_plans(const explane::model::PlanningTask& task,
                                                       std::size_t max_len);

/// Random intent MDP over `width` options with every state reachable, the
/// full set terminal and further random terminal states. Step rewards in
/// [-1, 0]; terminal bonus 10.
explane::hrl::IntentMdp random_intent_mdp(Rng& rng, std::size_t width);

/// Exact optimal discounted return from the start state by backward induction
/// over the bit lattice.
double dp_optimal_return(const explane::hrl::IntentMdp& mdp, double gamma);

/// A small room-graph evacuation world. The robot model adds false
/// "(blocked-k)" preconditions to a few actions; options group those edits.
struct ReconcileInstance {
  explane::reconcile::Mindset human;
  explane::reconcile::Mindset robot;
  std::size_t units = 0;
};

/// Instance with 1..max_units edits, a solvable robot model and a robot
/// plan different from the human's.
ReconcileInstance random_reconcile(Rng& rng, std::size_t max_units);

/// Chain I -> s1 -> ... -> goal of `steps` unit-cost actions "step0".."step<n-1>".
explane::model::PlanningTask chain_task(std::size_t steps);

}  // namespace toy
