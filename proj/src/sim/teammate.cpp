#include "explane/sim/teammate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "explane/error.hpp"
#include "explane/mdp/goal_mdp.hpp"
#include "explane/planner/planner.hpp"

namespace explane::sim {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

mdp::State translate(const mdp::State& s, const model::PlanningTask& from, const model::PlanningTask& to) {
  if (from.atoms() == to.atoms()) return s;
  mdp::State out(to.atom_count());
  for (int i : s.true_atoms()) {
    auto j = to.atom_index(from.atom_name(i));
    if (!j) throw ModelError("atom '" + from.atom_name(i) + "' is not part of the human model");
    out.set(static_cast<std::size_t>(*j));
  }
  return out;
}

double edit_cost(const std::optional<planner::Plan>& a, const std::optional<planner::Plan>& b) {
  if (!a || !b) return !a && !b ? 0.0 : std::numeric_limits<double>::infinity();
  return static_cast<double>(planner::edit_distance(a->actions, b->actions));
}

}  // namespace

std::string_view to_string(Flag f) { return f == Flag::Expected ? "expected" : "questionable"; }

Flag flag_from_string(std::string_view s) {
  if (s == "expected") return Flag::Expected;
  if (s == "questionable") return Flag::Questionable;
  throw ParseError("unknown flag '" + std::string(s) + "'", 0, 0);
}

SimHuman::SimHuman(reconcile::Mindset mindset, const model::PlanningTask& robot, double gamma)
    : mindset_(std::move(mindset)), robot_(robot), gamma_(gamma) {
  state_ = mdp::State(robot_.atom_count(), robot_.init());
  replan();
}

void SimHuman::replan() {
  expected_ = planner::plan_task_from(mindset_.task, translate(state_, robot_, mindset_.task), gamma_);
}

std::optional<std::string> SimHuman::expected_action() const {
  if (!expected_ || expected_->empty()) return std::nullopt;
  return expected_->actions.front();
}

Flag SimHuman::observe(const std::string& robot_action) {
  const auto a = robot_.action_index(robot_action);
  const auto rmdp = mdp::GoalMdp::compile(robot_.with_init(state_.true_atoms()), gamma_);
  if (!a || !rmdp.applicable(state_, *a)) throw InapplicableActionError(robot_action, 0);
  const Flag flag = expected_action() == robot_action ? Flag::Expected : Flag::Questionable;
  state_ = *rmdp.successor(state_, *a);
  replan();
  return flag;
}

double SimHuman::absorb_explanation(const reconcile::ExplanationStep& step) {
  if (step.changes.empty()) return 0.0;
  const auto before = expected_;
  mindset_.task = model::apply_changes(mindset_.task, step.changes);
  replan();
  return edit_cost(before, expected_);
}

void SimHuman::absorb(const reconcile::Explanation& e) {
  for (const auto& s : e.steps) absorb_explanation(s);
}

std::size_t ExecutionTrace::questionable() const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [](const TraceEntry& e) { return e.flag == Flag::Questionable; }));
}

std::string ExecutionTrace::to_text() const {
  std::ostringstream out;
  out.precision(17);
  for (const auto& e : entries) {
    out << e.state.to_bits() << " | " << e.action << " | " << to_string(e.flag) << " | ";
    if (e.explanations.empty()) out << "-";
    for (std::size_t i = 0; i < e.explanations.size(); ++i) {
      if (i) out << ",";
      out << e.explanations[i].id << ":" << e.explanations[i].replan;
    }
    out << "\n";
  }
  return out.str();
}

ExecutionTrace ExecutionTrace::from_text(const std::string& text) {
  ExecutionTrace trace;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cols = split(line, '|');
    if (cols.size() != 4) throw ParseError("trace line needs 4 columns", lineno, 1);
    TraceEntry e;
    const std::string bits = trim(cols[0]);
    if (bits.find_first_not_of("01") != std::string::npos) throw ParseError("bad state bits", lineno, 1);
    e.state = mdp::State::from_bits(bits);
    e.action = trim(cols[1]);
    if (e.action.empty()) throw ParseError("missing action", lineno, 1);
    e.flag = flag_from_string(trim(cols[2]));
    const std::string ids = trim(cols[3]);
    if (ids != "-") {
      for (const auto& item : split(ids, ',')) {
        const auto colon = item.rfind(':');
        if (colon == std::string::npos) throw ParseError("explanation entry needs id:replan", lineno, 1);
        DeliveredStep d;
        d.id = trim(item.substr(0, colon));
        const std::string num = trim(item.substr(colon + 1));
        try {
          std::size_t used = 0;
          d.replan = std::stod(num, &used);
          if (used != num.size()) throw std::invalid_argument(num);
        } catch (const std::exception&) {
          throw ParseError("bad replanning cost '" + num + "'", lineno, 1);
        }
        e.explanations.push_back(std::move(d));
      }
    }
    trace.entries.push_back(std::move(e));
  }
  return trace;
}

ExecutionTrace execute(const model::PlanningTask& robot, SimHuman& human, const reconcile::Explanation& e,
                       const std::vector<std::size_t>& inject, std::uint64_t seed, double gamma) {
  std::mt19937_64 rng(seed);
  ExecutionTrace trace;
  mdp::State state(robot.atom_count(), robot.init());
  auto plan_from = [&](const mdp::State& s) {
    auto p = planner::plan_task_from(robot, s, gamma);
    if (!p) throw UnsolvableError("robot cannot reach the goal from state " + s.to_bits());
    return p->actions;
  };
  std::vector<std::string> plan = plan_from(state);
  std::size_t cursor = 0;       // next step of `plan`
  std::size_t planned = 0;      // plan steps executed so far (delivery clock)
  std::size_t next_step = 0;    // next undelivered explanation step
  const std::size_t limit = 4 * (plan.size() + inject.size()) + 16;

  const auto full = mdp::GoalMdp::compile(robot, gamma);
  auto deliver = [&](TraceEntry& entry) {
    while (next_step < e.steps.size() && e.steps[next_step].deliver_before <= static_cast<int>(planned)) {
      const auto& st = e.steps[next_step];
      const double replan = human.absorb_explanation(st);
      entry.explanations.push_back({st.option.empty() ? "u" + std::to_string(next_step) : st.option, replan});
      ++next_step;
    }
  };

  for (std::size_t t = 0; !full.is_goal(state); ++t) {
    if (t > limit) throw UnsolvableError("execution does not terminate");
    TraceEntry entry;
    entry.state = state;
    deliver(entry);
    std::string action;
    if (std::find(inject.begin(), inject.end(), t) != inject.end()) {
      const auto expected = human.expected_action();
      std::vector<std::string> candidates;
      for (std::size_t a = 0; a < robot.actions().size(); ++a) {
        const auto& name = robot.actions()[a].name;
        if (!full.applicable(state, static_cast<int>(a)) || name == plan[cursor] || name == expected) continue;
        auto next = full.successor(state, static_cast<int>(a));
        if (full.is_goal(*next) || !planner::plan_task_from(robot, *next, gamma)) continue;
        candidates.push_back(name);
      }
      if (candidates.empty()) throw ModelError("no random action available at step " + std::to_string(t));
      action = candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)];
      entry.injected = true;
    } else {
      action = plan[cursor];
    }
    const auto a = robot.action_index(action);
    entry.action = action;
    entry.flag = human.observe(action);
    state = *full.successor(state, *a);
    if (entry.injected) {
      plan = plan_from(state);
      cursor = 0;
    } else {
      ++cursor;
      ++planned;
    }
    trace.entries.push_back(std::move(entry));
  }
  if (next_step < e.steps.size()) {
    TraceEntry tail;
    deliver(tail);
    for (; next_step < e.steps.size(); ++next_step) {
      const auto& st = e.steps[next_step];
      const double replan = human.absorb_explanation(st);
      tail.explanations.push_back({st.option.empty() ? "u" + std::to_string(next_step) : st.option, replan});
    }
  }
  return trace;
}

hrl::RewardModel trace_reward_model(const std::vector<ExecutionTrace>& traces,
                                    const std::vector<std::string>& option_ids) {
  if (traces.empty()) throw ModelError("trace reward model needs at least one trace");
  std::vector<std::string> ids = option_ids;
  std::sort(ids.begin(), ids.end());
  auto index = [&](const std::string& id) {
    auto it = std::lower_bound(ids.begin(), ids.end(), id);
    if (it == ids.end() || *it != id) throw ModelError("explanation '" + id + "' is not in the option vocabulary");
    return static_cast<std::size_t>(it - ids.begin());
  };

  std::map<std::pair<hrl::IntentState, std::string>, std::pair<double, std::size_t>> sums;
  for (const auto& trace : traces) {
    hrl::IntentState s = 0;
    std::optional<std::pair<hrl::IntentState, std::string>> open;
    double open_value = 0.0;
    auto close = [&]() {
      if (!open) return;
      auto& [sum, n] = sums[*open];
      sum += open_value;
      ++n;
      open.reset();
    };
    for (const auto& entry : trace.entries) {
      for (const auto& d : entry.explanations) {
        close();
        const std::size_t o = index(d.id);
        open = std::make_pair(s, d.id);
        open_value = std::isfinite(d.replan) ? -d.replan : -1e6;
        s |= hrl::bit(o);
      }
      if (entry.flag == Flag::Questionable && open) open_value -= 1.0;
    }
    close();
  }

  double scale = 0.0;
  for (const auto& [key, acc] : sums) scale = std::max(scale, -acc.first / static_cast<double>(acc.second));
  hrl::RewardModel model;
  for (const auto& [key, acc] : sums) {
    const double mean = acc.first / static_cast<double>(acc.second);
    model.step[key] = scale > 0.0 ? mean / scale : 0.0;
  }
  model.default_step = -1.0;
  model.terminal_bonus = 2.0;
  return model;
}

}  // namespace explane::sim
