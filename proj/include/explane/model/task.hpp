#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "explane/model/pddl.hpp"

namespace explane::model {

/// Grounded action with atom references resolved to indices of the owning task.
struct GroundAction {
  std::string name;  // "move room1 room2"
  std::vector<int> pre;
  std::vector<int> add;
  std::vector<int> del;
  double cost = 1.0;
};

/// Name-level description of a grounded action, used to build tasks.
struct ActionSpec {
  std::string name;
  std::vector<std::string> pre;
  std::vector<std::string> add;
  std::vector<std::string> del;
  double cost = 1.0;
};

/// A grounded STRIPS task <F, A, I, G>. Atoms and actions are stored in
/// lexicographic order of their names; indices are stable for the lifetime of
/// the value. Immutable after construction.
class PlanningTask {
 public:
  PlanningTask() = default;
  PlanningTask(std::vector<std::string> atoms, std::vector<ActionSpec> actions,
               const std::vector<std::string>& init, const std::vector<std::string>& goal);

  const std::vector<std::string>& atoms() const { return atoms_; }
  const std::vector<GroundAction>& actions() const { return actions_; }
  const std::vector<int>& init() const { return init_; }
  const std::vector<int>& goal() const { return goal_; }

  std::size_t atom_count() const { return atoms_.size(); }
  std::optional<int> atom_index(std::string_view name) const;
  std::optional<int> action_index(std::string_view name) const;
  const std::string& atom_name(int i) const { return atoms_[static_cast<std::size_t>(i)]; }

  std::vector<ActionSpec> action_specs() const;
  std::vector<std::string> init_names() const;
  std::vector<std::string> goal_names() const;

  /// Same task with a different initial state.
  PlanningTask with_init(const std::vector<int>& init) const;

 private:
  std::vector<std::string> atoms_;
  std::vector<GroundAction> actions_;
  std::vector<int> init_;
  std::vector<int> goal_;
  std::unordered_map<std::string, int> atom_lookup_;
  std::unordered_map<std::string, int> action_lookup_;
};

/// Wraps a name in parentheses: "at room1" -> "(at room1)".
std::string paren(std::string_view name);

/// Full type-consistent grounding. Every atom of the universe and every
/// grounded action respects the declared parameter types.
PlanningTask ground(const DomainModel& domain, const std::vector<TypedName>& objects,
                    const std::vector<AtomTemplate>& init, const std::vector<AtomTemplate>& goal);
PlanningTask ground(const DomainModel& domain, const ProblemModel& problem);

/// Convenience: parse and ground a domain/problem pair from files.
PlanningTask load_task(const std::string& domain_path, const std::string& problem_path);

}  // namespace explane::model
