#include "explane/reconcile/reconcile.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

#include "explane/error.hpp"
#include "explane/mdp/goal_mdp.hpp"
#include "explane/mdp/value_iteration.hpp"
#include "explane/planner/planner.hpp"

namespace explane::reconcile {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double initial_cost(const model::PlanningTask& task, double gamma) {
  const auto mdp = mdp::GoalMdp::compile(task, gamma);
  return mdp::optimal_cost(mdp).at_index(0);
}

double cost_gap(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return kInf;
  return std::abs(a - b);
}

bool same_plan(const std::optional<planner::Plan>& a, const std::optional<planner::Plan>& b) {
  if (!a || !b) return !a && !b;
  return planner::plans_equal(*a, *b);
}

double plan_distance(const std::optional<planner::Plan>& a, const std::optional<planner::Plan>& b) {
  if (!a || !b) return !a && !b ? 0.0 : kInf;
  return static_cast<double>(planner::edit_distance(a->actions, b->actions));
}

model::ChangeSet without(const model::ChangeSet& set, const model::ChangeSet& drop) {
  model::ChangeSet out;
  for (const auto& f : set.adds)
    if (!drop.adds.contains(f)) out.adds.insert(f);
  for (const auto& f : set.removes)
    if (!drop.removes.contains(f)) out.removes.insert(f);
  return out;
}

model::ChangeSet intersect(const model::ChangeSet& a, const model::ChangeSet& b) {
  model::ChangeSet out;
  for (const auto& f : a.adds)
    if (b.adds.contains(f)) out.adds.insert(f);
  for (const auto& f : a.removes)
    if (b.removes.contains(f)) out.removes.insert(f);
  return out;
}

std::optional<planner::Plan> plan_after(const model::PlanningTask& task, const model::ChangeSet& changes,
                                        double gamma) {
  return planner::plan_task(model::apply_changes(task, changes), gamma);
}

/// The robot-model state before step k of the robot plan, expressed over the
/// human task's atoms.
mdp::State robot_state_at(const model::PlanningTask& robot, const planner::Plan& plan, std::size_t k,
                          const model::PlanningTask& human) {
  const auto rmdp = mdp::GoalMdp::compile(robot, 0.5);
  mdp::State s = plan.start;
  for (std::size_t t = 0; t < k; ++t) {
    auto a = robot.action_index(plan.actions[t]);
    auto next = a ? rmdp.successor(s, *a) : std::nullopt;
    if (!next) throw InapplicableActionError(plan.actions[t], t);
    s = *next;
  }
  mdp::State out(human.atom_count());
  for (int i : s.true_atoms()) {
    auto j = human.atom_index(robot.atom_name(i));
    if (!j) throw ModelError("atom '" + robot.atom_name(i) + "' missing from the human model");
    out.set(*j);
  }
  return out;
}

Disclosure level_for(const std::optional<planner::Plan>& human_plan, const model::PlanningTask& human_after,
                     std::size_t option_size, const model::PlanningTask& robot, const planner::Plan& robot_plan,
                     double gamma) {
  if (option_size <= 1) return Disclosure::IntentOnly;
  std::size_t k = 0;
  if (human_plan) {
    const auto& h = human_plan->actions;
    while (k < h.size() && k < robot_plan.size() && h[k] == robot_plan.actions[k]) ++k;
  }
  if (k >= robot_plan.size()) return Disclosure::IntentOnly;
  const mdp::State s_k = robot_state_at(robot, robot_plan, k, human_after);
  const auto expected = planner::plan_task_from(human_after, s_k, gamma);
  if (expected && !expected->empty() && expected->actions.front() == robot_plan.actions[k])
    return Disclosure::IntentOnly;
  return Disclosure::IntentAndDetails;
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

double adaptation_cost(const model::PlanningTask& human, const model::PlanningTask& robot, double gamma) {
  return cost_gap(initial_cost(human, gamma), initial_cost(robot, gamma));
}

double replanning_cost(const model::PlanningTask& before, const model::PlanningTask& after, double gamma) {
  return plan_distance(planner::plan_task(before, gamma), planner::plan_task(after, gamma));
}

model::ChangeSet relevant_changes(const model::PlanningTask& human, const model::PlanningTask& robot,
                                  double gamma) {
  const model::ChangeSet delta = model::model_diff(human, robot);
  const auto human_plan = planner::plan_task(human, gamma);
  const auto robot_plan = planner::plan_task(robot, gamma);
  model::ChangeSet keep = delta;
  for (const auto& unit : delta.units()) {
    const model::ChangeSet rest = without(keep, unit);
    try {
      if (!same_plan(plan_after(human, unit, gamma), human_plan)) continue;
      if (!same_plan(plan_after(human, rest, gamma), robot_plan)) continue;
    } catch (const ModelError&) {
      continue;
    }
    keep = rest;
  }
  return keep;
}

std::vector<hrl::Option> restrict_options(const std::vector<hrl::Option>& options, const model::ChangeSet& keep) {
  std::vector<hrl::Option> out;
  for (const auto& o : options) {
    hrl::Option clipped = o;
    clipped.changes = intersect(o.changes, keep);
    if (!clipped.changes.empty()) out.push_back(std::move(clipped));
  }
  for (auto& o : out) {
    std::erase_if(o.requires_explained, [&](const std::string& id) {
      return std::none_of(out.begin(), out.end(), [&](const hrl::Option& p) { return p.id == id; });
    });
  }
  return out;
}

Disclosure disclosure_level(const model::PlanningTask& human, const hrl::Option& option,
                            const model::PlanningTask& robot, double gamma) {
  const auto robot_plan = planner::plan_task(robot, gamma);
  if (!robot_plan) throw UnsolvableError("robot model has no plausible plan");
  return level_for(planner::plan_task(human, gamma), model::apply_changes(human, option.changes),
                   option.changes.size(), robot, *robot_plan, gamma);
}

AdaptationProblem::AdaptationProblem(const Mindset& human, const Mindset& robot, const AdaptParams& params)
    : plan_gamma_(params.plan_gamma) {
  delta_ = model::model_diff(human.task, robot.task);
  relevant_ = params.filter_relevant ? relevant_changes(human.task, robot.task, plan_gamma_) : delta_;
  auto options = restrict_options(robot.options, relevant_);
  model::ChangeSet covered;
  for (const auto& o : options) covered = covered.merged(o.changes);
  const model::ChangeSet missing = without(relevant_, covered);
  if (!missing.empty()) {
    std::string msg = "options cannot explain the divergence; uncovered:";
    for (const auto& e : causal_order(missing)) msg += " " + to_string(e);
    throw IrreconcilableError(msg);
  }
  lattice_ = hrl::build_lattice(human.task, robot.task, std::move(options), plan_gamma_);

  const std::size_t n = lattice_.width();
  const std::size_t states = std::size_t{1} << n;
  transitions_.assign(states * n, {});
  double max_replan = 0.0;
  for (hrl::IntentState s = 0; s < states; ++s) {
    const auto& node = lattice_.nodes[s];
    if (!node.reachable || node.terminal) continue;
    for (std::size_t o = 0; o < n; ++o) {
      if (!lattice_.legal(s, o)) continue;
      const auto& next = lattice_.nodes[s | hrl::bit(o)];
      auto& t = transitions_[s * n + o];
      t.level = level_for(node.plan, *next.human, lattice_.options[o].changes.size(), lattice_.robot,
                          lattice_.robot_plan, plan_gamma_);
      t.size = t.level == Disclosure::IntentOnly ? 1 : 1 + lattice_.options[o].changes.size();
      t.replan = plan_distance(node.plan, next.plan);
      if (std::isfinite(t.replan)) max_replan = std::max(max_replan, t.replan);
    }
  }

  double largest = 0.0;
  for (hrl::IntentState s = 0; s < states; ++s) {
    for (std::size_t o = 0; o < n; ++o) {
      if (!lattice_.nodes[s].reachable || lattice_.nodes[s].terminal || !lattice_.legal(s, o)) continue;
      const auto& t = transitions_[s * n + o];
      const double load = std::isfinite(t.replan) ? t.replan / (max_replan + 1.0) : 1.0;
      const double r = -(static_cast<double>(t.size) + load);
      rewards_.step[{s, lattice_.options[o].id}] = r;
      largest = std::max(largest, -r);
    }
  }
  rewards_.default_step = -largest;
  rewards_.terminal_bonus = 10.0 * std::max(largest, 1.0);
  mdp_ = hrl::make_intent_mdp(lattice_, rewards_);
}

double AdaptationProblem::gamma_at(hrl::IntentState s) const {
  const auto& node = lattice_.nodes.at(s);
  if (!node.reachable) throw ModelError("intent state " + hrl::to_bits(s, lattice_.width()) + " is not reachable");
  return adaptation_cost(*node.human, lattice_.robot, plan_gamma_);
}

ExplanationStep AdaptationProblem::make_step(hrl::IntentState s, std::size_t o) const {
  if (!lattice_.legal(s, o)) throw ModelError("option '" + lattice_.options.at(o).id + "' is not legal here");
  const auto& opt = lattice_.options[o];
  ExplanationStep step;
  step.option = opt.id;
  step.intent = opt.intent;
  step.changes = opt.changes;
  step.level = transition(s, o).level;
  step.gamma_before = gamma_at(s);
  step.gamma_after = gamma_at(s | hrl::bit(o));
  return step;
}

Explanation AdaptationProblem::explanation_for(const std::vector<std::size_t>& order) const {
  Explanation e;
  hrl::IntentState s = 0;
  for (std::size_t o : order) {
    e.steps.push_back(make_step(s, o));
    s |= hrl::bit(o);
  }
  return e;
}

AdaptationReport mindset_adapt(const AdaptationProblem& problem, const AdaptParams& params, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& lattice = problem.lattice();
  const auto& mdp = problem.intent_mdp();
  AdaptationReport report;
  hrl::IntentState cur = 0;
  report.gamma_trace.push_back(problem.gamma_at(cur));
  std::size_t iterations = 0;
  while (!lattice.nodes[cur].terminal) {
    if (iterations >= lattice.width() || mdp.legal[cur] == 0)
      throw IrreconcilableError("options cannot explain the divergence: human plan still differs after " +
                                std::to_string(iterations) + " steps");
    hrl::SarsaParams sp = params.sarsa;
    sp.start = cur;
    const hrl::QTable q = hrl::sarsa(mdp, sp, mix(seed, iterations));
    report.episodes += sp.episodes;

    std::ostringstream trace;
    trace << "state=" << hrl::to_bits(cur, lattice.width());
    for (std::size_t o = 0; o < lattice.width(); ++o)
      if (mdp.legal[cur] & hrl::bit(o)) trace << " q[" << mdp.option_ids[o] << "]=" << q.at(cur, o);
    report.q_trace.push_back(trace.str());

    const std::size_t o = hrl::greedy_option(q, mdp, cur);
    report.explanation.steps.push_back(problem.make_step(cur, o));
    cur |= hrl::bit(o);
    report.gamma_trace.push_back(report.explanation.steps.back().gamma_after);
    ++iterations;
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

AdaptationReport mindset_adapt(const Mindset& human, const Mindset& robot, const AdaptParams& params,
                               std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  const AdaptationProblem problem(human, robot, params);
  AdaptationReport report = mindset_adapt(problem, params, seed);
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

Explanation concise_oracle(const AdaptationProblem& problem) {
  const auto& lattice = problem.lattice();
  if (problem.relevant().size() > 20) throw ModelError("concise oracle limited to 20 relevant differences");
  if (lattice.width() > 9) throw ModelError("concise oracle limited to 9 options");

  using Key = std::tuple<std::size_t, double, std::vector<std::string>>;
  std::optional<Key> best;
  std::vector<std::size_t> best_order;
  std::vector<std::size_t> order;
  std::vector<std::string> ids;

  auto dfs = [&](auto&& self, hrl::IntentState s, std::size_t size, double replan) -> void {
    if (best && size > std::get<0>(*best)) return;
    if (lattice.nodes[s].terminal) {
      Key key{size, replan, ids};
      if (!best || key < *best) {
        best = std::move(key);
        best_order = order;
      }
      return;
    }
    for (std::size_t o = 0; o < lattice.width(); ++o) {
      if (!lattice.legal(s, o)) continue;
      const auto& t = problem.transition(s, o);
      order.push_back(o);
      ids.push_back(lattice.options[o].id);
      self(self, s | hrl::bit(o), size + t.size, replan + t.replan);
      order.pop_back();
      ids.pop_back();
    }
  };
  dfs(dfs, 0, 0, 0.0);
  if (!best) throw IrreconcilableError("no option sequence reproduces the robot plan");
  return problem.explanation_for(best_order);
}

Explanation concise_oracle(const Mindset& human, const Mindset& robot, const AdaptParams& params) {
  return concise_oracle(AdaptationProblem(human, robot, params));
}

}  // namespace explane::reconcile
