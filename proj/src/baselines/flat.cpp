#include "explane/baselines/flat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "explane/error.hpp"
#include "explane/mdp/goal_mdp.hpp"
#include "explane/planner/planner.hpp"
#include "explane/reconcile/reconcile.hpp"

namespace explane::baselines {

namespace {

constexpr double kInvalid = std::numeric_limits<double>::infinity();
constexpr double kFlipPenalty = 1e6;

model::ChangeSet union_of(const std::vector<model::ChangeSet>& units, std::uint32_t mask) {
  model::ChangeSet out;
  for (std::size_t i = 0; i < units.size(); ++i)
    if (mask & (std::uint32_t{1} << i)) out = out.merged(units[i]);
  return out;
}

struct PlanCache {
  const model::PlanningTask& human;
  const std::vector<model::ChangeSet>& units;
  double gamma;
  std::map<std::uint32_t, std::pair<bool, std::optional<planner::Plan>>> memo;

  /// (valid, plan) for the human model with the units in `mask` applied.
  const std::pair<bool, std::optional<planner::Plan>>& get(std::uint32_t mask) {
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    std::pair<bool, std::optional<planner::Plan>> entry{false, std::nullopt};
    try {
      entry.second = planner::plan_task(model::apply_changes(human, union_of(units, mask)), gamma);
      entry.first = true;
    } catch (const ModelError&) {
    }
    return memo.emplace(mask, std::move(entry)).first->second;
  }

  double step(std::uint32_t from, std::uint32_t to) {
    const auto& a = get(from);
    const auto& b = get(to);
    if (!a.first || !b.first) return kInvalid;
    if (!a.second || !b.second) return !a.second && !b.second ? 0.0 : kFlipPenalty;
    return static_cast<double>(planner::edit_distance(a.second->actions, b.second->actions));
  }
};

std::vector<mdp::State> robot_states(const model::PlanningTask& robot, const planner::Plan& plan) {
  const auto rmdp = mdp::GoalMdp::compile(robot, 0.5);
  std::vector<mdp::State> states{plan.start};
  for (std::size_t t = 0; t < plan.size(); ++t) {
    auto a = robot.action_index(plan.actions[t]);
    auto next = a ? rmdp.successor(states.back(), *a) : std::nullopt;
    if (!next) throw InapplicableActionError(plan.actions[t], t);
    states.push_back(*next);
  }
  return states;
}

}  // namespace

model::ChangeSet FlatExplanation::all_changes() const {
  model::ChangeSet out;
  for (const auto& u : units) out = out.merged(u.change);
  return out;
}

reconcile::Explanation FlatExplanation::to_explanation(const model::PlanningTask& human,
                                                       const model::PlanningTask& robot, double gamma) const {
  reconcile::Explanation e;
  model::PlanningTask cur = human;
  double before = reconcile::adaptation_cost(cur, robot, gamma);
  for (const auto& u : units) {
    reconcile::ExplanationStep step;
    step.changes = u.change;
    step.level = reconcile::Disclosure::ActionUnit;
    step.deliver_before = u.deliver_before;
    step.gamma_before = before;
    try {
      cur = model::apply_changes(cur, u.change);
      before = reconcile::adaptation_cost(cur, robot, gamma);
    } catch (const ModelError&) {
      before = std::numeric_limits<double>::infinity();
    }
    step.gamma_after = before;
    e.steps.push_back(std::move(step));
  }
  return e;
}

FlatExplanation peg_order(const model::PlanningTask& human, const model::PlanningTask& robot, double gamma) {
  const auto units = reconcile::relevant_changes(human, robot, gamma).units();
  const std::size_t n = units.size();
  if (n > 31) throw ModelError("too many unit changes for ordering");
  PlanCache cache{human, units, gamma, {}};
  std::vector<std::size_t> order;

  if (n <= 8) {
    const std::uint32_t full = (std::uint32_t{1} << n) - 1;
    std::vector<double> best(full + 1, kInvalid);
    std::vector<int> choice(full + 1, -1);
    best[full] = 0.0;
    for (std::uint32_t mask = full; mask-- > 0;) {
      for (std::size_t u = 0; u < n; ++u) {
        const std::uint32_t b = std::uint32_t{1} << u;
        if (mask & b) continue;
        const double c = cache.step(mask, mask | b) + best[mask | b];
        if (c < best[mask]) {
          best[mask] = c;
          choice[mask] = static_cast<int>(u);
        }
      }
    }
    if (std::isinf(best[0])) {
      for (std::size_t u = 0; u < n; ++u) order.push_back(u);
    } else {
      for (std::uint32_t mask = 0; mask != full; mask |= std::uint32_t{1} << choice[mask])
        order.push_back(static_cast<std::size_t>(choice[mask]));
    }
  } else {
    std::uint32_t mask = 0;
    for (std::size_t k = 0; k < n; ++k) {
      double best = kInvalid;
      std::size_t pick = n;
      for (std::size_t u = 0; u < n; ++u) {
        const std::uint32_t b = std::uint32_t{1} << u;
        if (mask & b) continue;
        const double c = cache.step(mask, mask | b);
        if (pick == n || c < best) {
          best = c;
          pick = u;
        }
      }
      order.push_back(pick);
      mask |= std::uint32_t{1} << pick;
    }
  }

  FlatExplanation out;
  for (std::size_t u : order) out.units.push_back({units[u], -1});
  return out;
}

FlatExplanation oeg_interleave(const model::PlanningTask& human, const model::PlanningTask& robot, double gamma) {
  const auto robot_plan = planner::plan_task(robot, gamma);
  if (!robot_plan) throw UnsolvableError("robot model has no plausible plan");
  const auto states = robot_states(robot, *robot_plan);
  const auto units = reconcile::relevant_changes(human, robot, gamma).units();

  FlatExplanation out;
  std::vector<char> used(units.size(), 0);
  model::PlanningTask cur = human;

  auto apply = [&](const std::vector<std::size_t>& set) -> std::optional<model::PlanningTask> {
    model::ChangeSet cs;
    for (std::size_t u : set) cs = cs.merged(units[u]);
    try {
      return model::apply_changes(cur, cs);
    } catch (const ModelError&) {
      return std::nullopt;
    }
  };
  auto agrees = [&](const std::vector<std::size_t>& set, std::size_t k) {
    auto task = apply(set);
    if (!task) return false;
    auto p = planner::plan_task_from(*task, states[k], gamma);
    return p && !p->empty() && p->actions.front() == robot_plan->actions[k];
  };
  auto reconciled = [&](const std::vector<std::size_t>& set) {
    auto task = apply(set);
    if (!task) return false;
    auto p = planner::plan_task(*task, gamma);
    return p && planner::plans_equal(*p, *robot_plan);
  };
  auto smallest = [&](auto&& ok) -> std::vector<std::size_t> {
    std::vector<std::size_t> free;
    for (std::size_t u = 0; u < units.size(); ++u)
      if (!used[u]) free.push_back(u);
    if (free.size() <= 14) {
      // smallest first, lexicographic within a size
      for (std::size_t k = 1; k <= free.size(); ++k) {
        std::vector<char> pick(free.size(), 0);
        std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), 1);
        do {
          std::vector<std::size_t> set;
          for (std::size_t i = 0; i < free.size(); ++i)
            if (pick[i]) set.push_back(free[i]);
          if (ok(set)) return set;
        } while (std::prev_permutation(pick.begin(), pick.end()));
      }
      return {};
    }
    if (!ok(free)) return {};
    std::vector<std::size_t> set = free;
    for (bool shrunk = true; shrunk;) {
      shrunk = false;
      for (std::size_t i : std::vector<std::size_t>(set)) {
        std::vector<std::size_t> trial;
        std::copy_if(set.begin(), set.end(), std::back_inserter(trial), [&](std::size_t u) { return u != i; });
        if (ok(trial)) set = std::move(trial), shrunk = true;
      }
    }
    return set;
  };
  auto emit = [&](const std::vector<std::size_t>& set, int step) {
    auto at = std::find_if(out.units.begin(), out.units.end(), [&](const FlatUnit& u) { return u.deliver_before > step; });
    for (std::size_t u : set) {
      used[u] = 1;
      at = std::next(out.units.insert(at, FlatUnit{units[u], step}));
    }
    model::ChangeSet cs;
    for (std::size_t u : set) cs = cs.merged(units[u]);
    cur = model::apply_changes(cur, cs);
  };

  for (std::size_t k = 0; k < robot_plan->size(); ++k) {
    if (agrees({}, k)) continue;
    auto set = smallest([&](const std::vector<std::size_t>& s) { return agrees(s, k); });
    if (set.empty())
      throw IrreconcilableError("no unit changes repair the divergence at step " + std::to_string(k) + " (" +
                                robot_plan->actions[k] + ")");
    emit(set, static_cast<int>(k));
  }
  if (!reconciled({})) {
    auto set = smallest(reconciled);
    if (set.empty()) throw IrreconcilableError("unit changes cannot reproduce the robot plan");
    emit(set, static_cast<int>(robot_plan->size()));
  }
  return out;
}

}  // namespace explane::baselines
