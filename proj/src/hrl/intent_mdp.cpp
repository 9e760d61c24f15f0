#include "explane/hrl/intent_mdp.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "explane/error.hpp"
#include "explane/planner/planner.hpp"

namespace explane::hrl {

std::string to_bits(IntentState s, std::size_t width) {
  std::string out(width, '0');
  for (std::size_t i = 0; i < width; ++i)
    if (s & bit(i)) out[i] = '1';
  return out;
}

IntentState from_bits(const std::string& bits) {
  if (bits.size() > kMaxOptions) throw ModelError("intent state wider than " + std::to_string(kMaxOptions));
  IntentState s = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      s |= bit(i);
    } else if (bits[i] != '0') {
      throw ModelError("invalid intent bitstring '" + bits + "'");
    }
  }
  return s;
}

double RewardModel::reward(IntentState s, const std::string& option) const {
  auto it = step.find({s, option});
  return it == step.end() ? default_step : it->second;
}

std::size_t IntentMdp::reachable_count() const {
  return static_cast<std::size_t>(std::count(reachable.begin(), reachable.end(), 1));
}

std::optional<std::size_t> IntentMdp::option_index(const std::string& id) const {
  auto it = std::lower_bound(option_ids.begin(), option_ids.end(), id);
  if (it == option_ids.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - option_ids.begin());
}

IntentLattice build_lattice(const model::PlanningTask& human, const model::PlanningTask& robot,
                            std::vector<Option> options, double gamma) {
  if (options.size() > kMaxOptions) throw ModelError("too many options for an intent bitset");
  std::sort(options.begin(), options.end(), [](const Option& a, const Option& b) { return a.id < b.id; });
  const model::ChangeSet delta = model::model_diff(human, robot);
  for (std::size_t i = 0; i < options.size(); ++i) {
    if (options[i].changes.empty()) throw ModelError("option '" + options[i].id + "' has no changes");
    if (i > 0 && options[i].id == options[i - 1].id) throw ModelError("duplicate option id '" + options[i].id + "'");
    if (!delta.contains(options[i].changes))
      throw ModelError("option '" + options[i].id + "' edits features outside the model difference");
    for (std::size_t j = 0; j < i; ++j)
      if (!options[i].changes.disjoint(options[j].changes))
        throw ModelError("options '" + options[j].id + "' and '" + options[i].id + "' overlap");
  }

  IntentLattice lat;
  lat.options = std::move(options);
  lat.robot = robot;
  lat.gamma = gamma;
  auto robot_plan = planner::plan_task(robot, gamma);
  if (!robot_plan) throw UnsolvableError("robot model has no plausible plan");
  lat.robot_plan = *std::move(robot_plan);

  const std::size_t n = lat.options.size();
  lat.prerequisites.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& req : lat.options[i].requires_explained) {
      auto it = std::find_if(lat.options.begin(), lat.options.end(), [&](const Option& o) { return o.id == req; });
      if (it == lat.options.end()) throw ModelError("option '" + lat.options[i].id + "' requires unknown '" + req + "'");
      lat.prerequisites[i] |= bit(static_cast<std::size_t>(it - lat.options.begin()));
    }
  }

  lat.nodes.assign(std::size_t{1} << n, {});
  std::deque<IntentState> frontier{0};
  lat.nodes[0].reachable = true;
  lat.nodes[0].human = human;
  while (!frontier.empty()) {
    const IntentState s = frontier.front();
    frontier.pop_front();
    auto& node = lat.nodes[s];
    node.plan = planner::plan_task(*node.human, gamma);
    node.terminal = node.plan && planner::plans_equal(*node.plan, lat.robot_plan);
    if (node.terminal) continue;
    for (std::size_t o = 0; o < n; ++o) {
      if (!lat.legal(s, o)) continue;
      const IntentState t = s | bit(o);
      auto& next = lat.nodes[t];
      if (next.reachable) continue;
      next.reachable = true;
      next.human = model::apply_changes(*lat.nodes[s].human, lat.options[o].changes);
      frontier.push_back(t);
    }
  }
  return lat;
}

void finalize(IntentMdp& mdp) {
  const std::size_t n = mdp.width();
  const std::size_t states = std::size_t{1} << n;
  if (mdp.terminal.size() != states || mdp.legal.size() != states || mdp.step_reward.size() != states * n)
    throw ModelError("intent MDP tables have inconsistent sizes");
  mdp.reachable.assign(states, 0);
  std::deque<IntentState> frontier{mdp.start};
  mdp.reachable[mdp.start] = 1;
  while (!frontier.empty()) {
    const IntentState s = frontier.front();
    frontier.pop_front();
    if (mdp.terminal[s]) continue;
    for (std::size_t o = 0; o < n; ++o) {
      if (!(mdp.legal[s] & bit(o))) continue;
      if (s & bit(o)) throw ModelError("option marked legal after it was explained");
      const IntentState t = IntentMdp::next(s, o);
      if (!mdp.reachable[t]) {
        mdp.reachable[t] = 1;
        frontier.push_back(t);
      }
    }
  }

  double worst_entering = std::numeric_limits<double>::infinity();
  double best_inner = -std::numeric_limits<double>::infinity();
  for (IntentState s = 0; s < states; ++s) {
    if (!mdp.reachable[s] || mdp.terminal[s]) continue;
    for (std::size_t o = 0; o < n; ++o) {
      if (!(mdp.legal[s] & bit(o))) continue;
      if (mdp.terminal[IntentMdp::next(s, o)]) {
        worst_entering = std::min(worst_entering, mdp.reward(s, o));
      } else {
        best_inner = std::max(best_inner, mdp.reward(s, o));
      }
    }
  }
  if (worst_entering <= best_inner)
    throw ModelError("completion reward does not dominate the per-step rewards");
}

IntentMdp make_intent_mdp(const IntentLattice& lattice, const RewardModel& rewards) {
  const std::size_t n = lattice.width();
  const std::size_t states = std::size_t{1} << n;
  IntentMdp mdp;
  for (const auto& o : lattice.options) mdp.option_ids.push_back(o.id);
  mdp.terminal.assign(states, 0);
  mdp.legal.assign(states, 0);
  mdp.step_reward.assign(states * n, 0.0);
  mdp.terminal_bonus = rewards.terminal_bonus;
  for (IntentState s = 0; s < states; ++s) {
    const auto& node = lattice.nodes[s];
    if (!node.reachable) continue;
    mdp.terminal[s] = node.terminal ? 1 : 0;
    if (node.terminal) continue;
    for (std::size_t o = 0; o < n; ++o) {
      if (!lattice.legal(s, o)) continue;
      mdp.legal[s] |= bit(o);
      mdp.step_reward[s * n + o] = rewards.reward(s, lattice.options[o].id);
    }
  }
  finalize(mdp);
  return mdp;
}

IntentMdp make_intent_mdp(const model::PlanningTask& human, const model::PlanningTask& robot,
                          const std::vector<Option>& options, const RewardModel& rewards, double gamma,
                          const std::optional<model::ChangeSet>& target) {
  const model::ChangeSet goal = target ? *target : model::model_diff(human, robot);
  model::ChangeSet covered;
  for (const auto& o : options) covered = covered.merged(o.changes);
  if (!covered.contains(goal)) throw ModelError("options do not cover the model difference");
  return make_intent_mdp(build_lattice(human, robot, options, gamma), rewards);
}

}  // namespace explane::hrl
