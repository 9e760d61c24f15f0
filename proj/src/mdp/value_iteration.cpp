#include "explane/mdp/value_iteration.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <omp.h>

#include "explane/error.hpp"

namespace explane::mdp {

namespace {

double gap(double a, double b) {
  if (std::isinf(a) && std::isinf(b)) return 0.0;
  return std::abs(a - b);
}

double cost_backup(const StateGraph& g, std::size_t s, const std::vector<double>& step_cost, double gamma,
                   const std::vector<double>& v) {
  if (g.goal[s]) return 0.0;
  double best = kInfinity;
  for (const auto& e : g.out(s)) {
    const double next = v[static_cast<std::size_t>(e.target)];
    if (std::isinf(next)) continue;
    best = std::min(best, step_cost[static_cast<std::size_t>(e.action)] + gamma * next);
  }
  return best;
}

double value_backup(const StateGraph& g, std::size_t s, double gamma, const std::vector<double>& v) {
  if (g.goal[s]) return 0.0;
  double best = 0.0;
  for (const auto& e : g.out(s)) {
    const auto t = static_cast<std::size_t>(e.target);
    const double r = g.goal[t] ? 1.0 : 0.0;
    best = std::max(best, r + gamma * v[t]);
  }
  return best;
}

std::vector<double> action_costs(const GoalMdp& mdp) {
  std::vector<double> c;
  c.reserve(mdp.task().actions().size());
  for (const auto& a : mdp.task().actions()) c.push_back(a.cost);
  return c;
}

Rational exact(double x) { return Rational(x); }

}  // namespace

namespace kernels {

SolveStats cost_sweeps_serial(const StateGraph& g, const std::vector<double>& step_cost, double gamma,
                              std::vector<double>& values, const SolveOptions& options) {
  SolveStats stats;
  for (stats.sweeps = 1; stats.sweeps <= options.max_sweeps; ++stats.sweeps) {
    double residual = 0.0;
    for (std::size_t s = 0; s < g.size(); ++s) {
      const double updated = cost_backup(g, s, step_cost, gamma, values);
      residual = std::max(residual, gap(updated, values[s]));
      values[s] = updated;
    }
    stats.residual = residual;
    if (residual <= options.tolerance) break;
  }
  stats.sweeps = std::min(stats.sweeps, options.max_sweeps);
  return stats;
}

SolveStats cost_sweeps_parallel(const StateGraph& g, const std::vector<double>& step_cost, double gamma,
                                std::vector<double>& values, const SolveOptions& options) {
  SolveStats stats;
  std::vector<double> next(values.size());
  const auto n = static_cast<std::int64_t>(g.size());
  for (stats.sweeps = 1; stats.sweeps <= options.max_sweeps; ++stats.sweeps) {
    double residual = 0.0;
#pragma omp parallel for reduction(max : residual) schedule(static)
    for (std::int64_t s = 0; s < n; ++s) {
      const auto i = static_cast<std::size_t>(s);
      next[i] = cost_backup(g, i, step_cost, gamma, values);
      residual = std::max(residual, gap(next[i], values[i]));
    }
    values.swap(next);
    stats.residual = residual;
    if (residual <= options.tolerance) break;
  }
  stats.sweeps = std::min(stats.sweeps, options.max_sweeps);
  return stats;
}

SolveStats value_sweeps_serial(const StateGraph& g, double gamma, std::vector<double>& values,
                               const SolveOptions& options) {
  SolveStats stats;
  for (stats.sweeps = 1; stats.sweeps <= options.max_sweeps; ++stats.sweeps) {
    double residual = 0.0;
    for (std::size_t s = 0; s < g.size(); ++s) {
      const double updated = value_backup(g, s, gamma, values);
      residual = std::max(residual, std::abs(updated - values[s]));
      values[s] = updated;
    }
    stats.residual = residual;
    if (residual <= options.tolerance) break;
  }
  stats.sweeps = std::min(stats.sweeps, options.max_sweeps);
  return stats;
}

SolveStats value_sweeps_parallel(const StateGraph& g, double gamma, std::vector<double>& values,
                                 const SolveOptions& options) {
  SolveStats stats;
  std::vector<double> next(values.size());
  const auto n = static_cast<std::int64_t>(g.size());
  for (stats.sweeps = 1; stats.sweeps <= options.max_sweeps; ++stats.sweeps) {
    double residual = 0.0;
#pragma omp parallel for reduction(max : residual) schedule(static)
    for (std::int64_t s = 0; s < n; ++s) {
      const auto i = static_cast<std::size_t>(s);
      next[i] = value_backup(g, i, gamma, values);
      residual = std::max(residual, std::abs(next[i] - values[i]));
    }
    values.swap(next);
    stats.residual = residual;
    if (residual <= options.tolerance) break;
  }
  stats.sweeps = std::min(stats.sweeps, options.max_sweeps);
  return stats;
}

}  // namespace kernels

double ValueTable::at(const State& s) const {
  auto idx = graph_->find(s);
  if (!idx) throw ModelError("state " + s.to_bits() + " is not reachable in this table");
  return values_[static_cast<std::size_t>(*idx)];
}

std::string ValueTable::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "state,value\n";
  for (std::size_t i = 0; i < values_.size(); ++i) {
    os << graph_->states[i].to_bits() << ',';
    if (std::isinf(values_[i])) {
      os << "inf";
    } else {
      os << values_[i];
    }
    os << '\n';
  }
  return os.str();
}

ValueTable optimal_cost(const GoalMdp& mdp, const SolveOptions& options) {
  const StateGraph& g = mdp.graph();
  std::vector<double> v(g.size(), kInfinity);
  for (std::size_t s = 0; s < g.size(); ++s)
    if (g.goal[s]) v[s] = 0.0;
  const auto costs = action_costs(mdp);
  const SolveStats stats = options.kernel == Kernel::Serial
                               ? kernels::cost_sweeps_serial(g, costs, mdp.gamma(), v, options)
                               : kernels::cost_sweeps_parallel(g, costs, mdp.gamma(), v, options);
  return ValueTable(Quantity::Cost, mdp.shared_graph(), std::move(v), stats);
}

ValueTable optimal_value(const GoalMdp& mdp, const SolveOptions& options) {
  const StateGraph& g = mdp.graph();
  std::vector<double> v(g.size(), 0.0);
  const SolveStats stats = options.kernel == Kernel::Serial
                               ? kernels::value_sweeps_serial(g, mdp.gamma(), v, options)
                               : kernels::value_sweeps_parallel(g, mdp.gamma(), v, options);
  return ValueTable(Quantity::Value, mdp.shared_graph(), std::move(v), stats);
}

double bellman_residual(const GoalMdp& mdp, const ValueTable& table) {
  const StateGraph& g = table.graph();
  const auto costs = action_costs(mdp);
  double worst = 0.0;
  for (std::size_t s = 0; s < g.size(); ++s) {
    const double backed = table.quantity() == Quantity::Cost ? cost_backup(g, s, costs, mdp.gamma(), table.values())
                                                             : value_backup(g, s, mdp.gamma(), table.values());
    worst = std::max(worst, gap(backed, table.at_index(s)));
  }
  return worst;
}

namespace {

template <typename Acc, typename Fn>
Acc accumulate_plan(const GoalMdp& mdp, const planner::Plan& plan, Acc total, Fn&& add_step) {
  State s = plan.start;
  for (std::size_t t = 0; t < plan.actions.size(); ++t) {
    auto idx = mdp.task().action_index(plan.actions[t]);
    if (!idx) throw InapplicableActionError(plan.actions[t], t);
    auto next = mdp.successor(s, *idx);
    if (!next) throw InapplicableActionError(plan.actions[t], t);
    add_step(total, t, mdp.cost(*idx));
    s = std::move(*next);
  }
  return total;
}

}  // namespace

double plan_cost(const GoalMdp& mdp, const planner::Plan& plan) {
  double discount = 1.0;
  return accumulate_plan(mdp, plan, 0.0, [&](double& total, std::size_t, double c) {
    total += discount * c;
    discount *= mdp.gamma();
  });
}

Rational exact_plan_cost(const GoalMdp& mdp, const planner::Plan& plan) {
  const Rational gamma = exact(mdp.gamma());
  Rational discount = 1;
  return accumulate_plan(mdp, plan, Rational(0), [&](Rational& total, std::size_t, double c) {
    total += discount * exact(c);
    discount *= gamma;
  });
}

}  // namespace explane::mdp
