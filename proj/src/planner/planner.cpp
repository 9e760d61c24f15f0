#include "explane/planner/planner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "explane/error.hpp"

namespace explane::planner {

namespace {

bool same_cost(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

}  // namespace

std::optional<Plan> optimal_plan(const mdp::GoalMdp& mdp, const mdp::SolveOptions& options) {
  return optimal_plan(mdp, mdp::optimal_cost(mdp, options));
}

std::optional<Plan> optimal_plan(const mdp::GoalMdp& mdp, const mdp::ValueTable& cost) {
  const auto& g = mdp.graph();
  if (std::isinf(cost.at_index(0))) return std::nullopt;
  Plan plan;
  plan.start = g.states.front();
  std::size_t s = 0;
  for (std::size_t steps = 0; !g.goal[s]; ++steps) {
    if (steps > g.size()) throw Error("optimal policy does not reach the goal without revisiting states");
    const double target = cost.at_index(s);
    std::optional<mdp::StateGraph::Edge> chosen;
    // Edges are in action-name order, so the first edge matching the optimum is the
    // lexicographically smallest tied action.
    for (const auto& e : g.out(s)) {
      const double next = cost.at_index(static_cast<std::size_t>(e.target));
      if (std::isinf(next)) continue;
      if (same_cost(mdp.cost(e.action) + mdp.gamma() * next, target)) {
        chosen = e;
        break;
      }
    }
    if (!chosen) throw Error("cost table is not a fixed point at state " + g.states[s].to_bits());
    plan.actions.push_back(mdp.task().actions()[static_cast<std::size_t>(chosen->action)].name);
    s = static_cast<std::size_t>(chosen->target);
  }
  return plan;
}

Plan require_plan(const mdp::GoalMdp& mdp) {
  auto p = optimal_plan(mdp);
  if (!p) throw UnsolvableError("goal is unreachable from the initial state");
  return *std::move(p);
}

int plan_probability(const mdp::GoalMdp& mdp, const Plan& plan) {
  if (plan.start.width() != mdp.task().atom_count()) return 0;
  mdp::State s = plan.start;
  int product = 1;
  for (const auto& name : plan.actions) {
    auto idx = mdp.task().action_index(name);
    auto next = idx ? mdp.successor(s, *idx) : std::nullopt;
    if (!next) return 0;
    s = std::move(*next);
  }
  return mdp.is_goal(s) ? product : 0;
}

bool is_plausible(const mdp::GoalMdp& mdp, const Plan& plan) { return plan_probability(mdp, plan) == 1; }

Policy extract_policy(const mdp::GoalMdp& mdp, const Plan& plan) {
  if (!is_plausible(mdp, plan)) throw ModelError("cannot extract a policy from a non-plausible plan");
  Policy policy;
  mdp::State s = plan.start;
  for (const auto& name : plan.actions) {
    if (mdp.is_goal(s)) break;
    if (!policy.action_at.emplace(s, name).second)
      throw ModelError("plan revisits state " + s.to_bits() + "; it does not define a policy");
    s = *mdp.successor(s, *mdp.task().action_index(name));
  }
  return policy;
}

std::vector<std::string> rollout(const mdp::GoalMdp& mdp, const Policy& policy, const mdp::State& start) {
  std::vector<std::string> out;
  mdp::State s = start;
  while (!mdp.is_goal(s) && out.size() <= policy.size()) {
    auto it = policy.action_at.find(s);
    if (it == policy.action_at.end()) break;
    auto idx = mdp.task().action_index(it->second);
    auto next = idx ? mdp.successor(s, *idx) : std::nullopt;
    if (!next) break;
    out.push_back(it->second);
    s = std::move(*next);
  }
  return out;
}

int policy_probability(const mdp::GoalMdp& mdp, const Policy& policy, const mdp::State& start) {
  Plan p{rollout(mdp, policy, start), start};
  return plan_probability(mdp, p);
}

bool plans_equal(const Plan& a, const Plan& b) { return a.actions == b.actions; }

std::string write_plan(const Plan& plan) {
  std::ostringstream os;
  for (std::size_t t = 0; t < plan.actions.size(); ++t) os << t << ": (" << plan.actions[t] << ")\n";
  return os.str();
}

std::vector<std::string> read_plan(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto colon = line.find(':');
    const auto open = line.find('(', colon == std::string::npos ? 0 : colon);
    const auto close = line.rfind(')');
    if (colon == std::string::npos || open == std::string::npos || close == std::string::npos || close < open)
      throw ParseError("expected 't: (action ...)'", lineno, 1);
    const std::size_t t = std::stoul(line.substr(0, colon));
    if (t != out.size()) throw ParseError("plan steps out of order", lineno, 1);
    out.push_back(line.substr(open + 1, close - open - 1));
  }
  return out;
}

std::optional<Plan> plan_task(const model::PlanningTask& task, double gamma) {
  return optimal_plan(mdp::GoalMdp::compile(task, gamma));
}

std::optional<Plan> plan_task_from(const model::PlanningTask& task, const mdp::State& start, double gamma) {
  return optimal_plan(mdp::GoalMdp::compile(task, gamma, start));
}

std::size_t edit_distance(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

}  // namespace explane::planner
