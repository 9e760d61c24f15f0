#pragma once

#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "explane/mdp/goal_mdp.hpp"
#include "explane/planner/plan.hpp"

namespace explane::mdp {

using Rational = boost::multiprecision::cpp_rational;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Quantity { Cost, Value };

/// Which sweep implementation runs the Bellman backups.
enum class Kernel {
  Serial,    ///< in-place Gauss-Seidel sweeps; the reference implementation
  Parallel,  ///< synchronous Jacobi sweeps split across OpenMP threads
};

struct SolveOptions {
  double tolerance = 1e-9;
  std::size_t max_sweeps = 100000;
  Kernel kernel = Kernel::Parallel;
};

struct SolveStats {
  std::size_t sweeps = 0;
  double residual = 0.0;
};

/// Per-state result of a solve over the reachable graph. Cost tables hold J*
/// (kInfinity where G is unreachable); value tables hold V* in [0, 1].
class ValueTable {
 public:
  ValueTable(Quantity quantity, std::shared_ptr<const StateGraph> graph, std::vector<double> values,
             SolveStats stats)
      : quantity_(quantity), graph_(std::move(graph)), values_(std::move(values)), stats_(stats) {}

  Quantity quantity() const { return quantity_; }
  const StateGraph& graph() const { return *graph_; }
  const std::vector<double>& values() const { return values_; }
  SolveStats stats() const { return stats_; }
  std::size_t size() const { return values_.size(); }

  double at_index(std::size_t i) const { return values_[i]; }
  /// Throws ModelError for states outside the reachable graph.
  double at(const State& s) const;
  bool contains(const State& s) const { return graph_->find(s).has_value(); }

  /// "state,value" rows, one per reachable state, in discovery order.
  std::string to_csv() const;

 private:
  Quantity quantity_;
  std::shared_ptr<const StateGraph> graph_;
  std::vector<double> values_;
  SolveStats stats_;
};

/// J*(s) = min_a [c_a + gamma J*(s')], J*(g) = 0.
ValueTable optimal_cost(const GoalMdp& mdp, const SolveOptions& options = {});
/// V*(s) = max_a [R(s,a,s') + gamma V*(s')], V*(g) = 0.
ValueTable optimal_value(const GoalMdp& mdp, const SolveOptions& options = {});

/// Largest |T(v)(s) - v(s)| over reachable states, with inf - inf counted as 0.
double bellman_residual(const GoalMdp& mdp, const ValueTable& table);

/// Discounted cost sum_t gamma^t c_{a_t} of a plan applied from plan.start.
/// Throws InapplicableActionError naming the first illegal step.
double plan_cost(const GoalMdp& mdp, const planner::Plan& plan);
/// Same sum evaluated exactly; gamma and costs are taken as the exact binary
/// values of their doubles.
Rational exact_plan_cost(const GoalMdp& mdp, const planner::Plan& plan);

namespace kernels {

/// Low-level sweeps over a graph. `values` holds the starting estimate and is
/// overwritten in place. `step_cost` is indexed by action.
SolveStats cost_sweeps_serial(const StateGraph& g, const std::vector<double>& step_cost, double gamma,
                              std::vector<double>& values, const SolveOptions& options);
SolveStats cost_sweeps_parallel(const StateGraph& g, const std::vector<double>& step_cost, double gamma,
                                std::vector<double>& values, const SolveOptions& options);
SolveStats value_sweeps_serial(const StateGraph& g, double gamma, std::vector<double>& values,
                               const SolveOptions& options);
SolveStats value_sweeps_parallel(const StateGraph& g, double gamma, std::vector<double>& values,
                                 const SolveOptions& options);

}  // namespace kernels

}  // namespace explane::mdp
