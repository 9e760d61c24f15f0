#include "explane/mdp/goal_mdp.hpp"

#include <deque>

#include "explane/error.hpp"

namespace explane::mdp {

State GoalMdp::initial_state() const { return State(task_->atom_count(), task_->init()); }

bool GoalMdp::applicable(const State& s, int action) const {
  return s.contains_all(task_->actions()[static_cast<std::size_t>(action)].pre);
}

std::optional<State> GoalMdp::successor(const State& s, int action) const {
  if (is_goal(s)) return s;
  const auto& a = task_->actions()[static_cast<std::size_t>(action)];
  if (!s.contains_all(a.pre)) return std::nullopt;
  State next = s;
  for (int i : a.add) next.set(static_cast<std::size_t>(i));
  for (int i : a.del) next.reset(static_cast<std::size_t>(i));
  return next;
}

GoalMdp GoalMdp::compile(const model::PlanningTask& task, double gamma) {
  return compile(task, gamma, State(task.atom_count(), task.init()));
}

GoalMdp GoalMdp::compile(const model::PlanningTask& task, double gamma, const State& start) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ModelError("discount factor must lie in (0, 1)");
  if (start.width() != task.atom_count()) throw ModelError("start state width does not match the task");

  GoalMdp m;
  m.task_ = std::make_shared<const model::PlanningTask>(task);
  m.gamma_ = gamma;

  auto graph = std::make_shared<StateGraph>();
  std::deque<int> frontier;
  auto intern = [&](const State& s) {
    auto [it, inserted] = graph->index.emplace(s, static_cast<int>(graph->states.size()));
    if (inserted) {
      graph->states.push_back(s);
      graph->goal.push_back(m.is_goal(s) ? 1 : 0);
      frontier.push_back(it->second);
    }
    return it->second;
  };
  intern(start);

  // Breadth-first; edges are appended per state in discovery order so the CSR
  // arrays are filled in one pass.
  std::vector<std::vector<StateGraph::Edge>> adjacency;
  while (!frontier.empty()) {
    const int s = frontier.front();
    frontier.pop_front();
    if (adjacency.size() <= static_cast<std::size_t>(s)) adjacency.resize(static_cast<std::size_t>(s) + 1);
    if (graph->goal[static_cast<std::size_t>(s)]) continue;
    const State current = graph->states[static_cast<std::size_t>(s)];
    std::vector<StateGraph::Edge> out;
    for (int a = 0; a < static_cast<int>(task.actions().size()); ++a) {
      if (auto next = m.successor(current, a)) out.push_back({a, intern(*next)});
    }
    adjacency[static_cast<std::size_t>(s)] = std::move(out);
  }
  adjacency.resize(graph->states.size());
  graph->offsets.assign(1, 0);
  for (const auto& out : adjacency) {
    graph->edges.insert(graph->edges.end(), out.begin(), out.end());
    graph->offsets.push_back(graph->edges.size());
  }
  m.graph_ = std::move(graph);
  return m;
}

}  // namespace explane::mdp
