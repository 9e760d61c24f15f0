#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "explane/hrl/intent_mdp.hpp"
#include "explane/hrl/sarsa.hpp"
#include "explane/model/features.hpp"
#include "explane/reconcile/explanation.hpp"

namespace explane::reconcile {

/// A planning model together with the intent-level options available to it.
struct Mindset {
  model::PlanningTask task;
  std::vector<hrl::Option> options;
};

struct AdaptParams {
  double plan_gamma = 0.95;
  hrl::SarsaParams sarsa;
  /// Drop model differences that never influence the human's expectations.
  bool filter_relevant = true;
};

struct AdaptationReport {
  Explanation explanation;
  std::vector<double> gamma_trace;  // Γ before the first step, then after every step
  double wall_seconds = 0.0;
  std::size_t episodes = 0;
  /// Per iteration: "state=<bits> q[id]=value ..." for diagnostics.
  std::vector<std::string> q_trace;
};

/// Γ = |J*_human(I) - J*_robot(I)|; infinite when either side is unsolvable.
double adaptation_cost(const model::PlanningTask& human, const model::PlanningTask& robot, double gamma);

/// Edit distance between the optimal plans of two models; infinite when
/// exactly one of them is unsolvable, 0 when both are.
double replanning_cost(const model::PlanningTask& before, const model::PlanningTask& after, double gamma);

/// Δ(human, robot) minus the edits that neither change the human's plan on
/// their own nor are needed for the human to arrive at the robot's plan.
/// Edits are dropped greedily in canonical order.
model::ChangeSet relevant_changes(const model::PlanningTask& human, const model::PlanningTask& robot, double gamma);

/// Options clipped to `keep`; options left empty are discarded.
std::vector<hrl::Option> restrict_options(const std::vector<hrl::Option>& options, const model::ChangeSet& keep);

/// Intent-only when explaining `option` makes the human's next expected action
/// match the robot's at the first point where their plans diverge, or when the
/// option carries a single change; otherwise intent plus details.
Disclosure disclosure_level(const model::PlanningTask& human, const hrl::Option& option,
                            const model::PlanningTask& robot, double gamma);

/// Everything the reconciliation search needs about one (human, robot) pair:
/// the intent lattice plus the disclosure level, size and replanning cost of
/// every legal (intent state, option) transition.
class AdaptationProblem {
 public:
  struct Transition {
    Disclosure level = Disclosure::IntentOnly;
    std::size_t size = 1;
    double replan = 0.0;
  };

  /// Throws IrreconcilableError when the options cannot cover the relevant
  /// differences, UnsolvableError when the robot model has no plan.
  AdaptationProblem(const Mindset& human, const Mindset& robot, const AdaptParams& params);

  const hrl::IntentLattice& lattice() const { return lattice_; }
  const model::ChangeSet& relevant() const { return relevant_; }
  const model::ChangeSet& delta() const { return delta_; }
  const Transition& transition(hrl::IntentState s, std::size_t o) const {
    return transitions_[s * lattice_.width() + o];
  }
  /// Default reward model: r = -(size + replan / (max_replan + 1)), completion
  /// bonus 10 x the largest step magnitude.
  const hrl::RewardModel& rewards() const { return rewards_; }
  const hrl::IntentMdp& intent_mdp() const { return mdp_; }
  double gamma_at(hrl::IntentState s) const;
  ExplanationStep make_step(hrl::IntentState s, std::size_t o) const;
  /// Explanation built by explaining `order` from the empty intent state.
  Explanation explanation_for(const std::vector<std::size_t>& order) const;

 private:
  hrl::IntentLattice lattice_;
  model::ChangeSet delta_;
  model::ChangeSet relevant_;
  std::vector<Transition> transitions_;
  hrl::RewardModel rewards_;
  hrl::IntentMdp mdp_;
  double plan_gamma_;
};

/// Mindset adaptation: repeatedly trains SARSA from the current intent state,
/// explains the greedy option and replans the human model until the human's
/// optimal plan equals the robot's.
AdaptationReport mindset_adapt(const Mindset& human, const Mindset& robot, const AdaptParams& params,
                               std::uint64_t seed);
AdaptationReport mindset_adapt(const AdaptationProblem& problem, const AdaptParams& params, std::uint64_t seed);

/// Exhaustive minimum-|E| explanation; ties broken by cumulative replanning
/// cost, then by option ids. Throws ModelError when more than 20 relevant
/// differences or more than 9 options are involved.
Explanation concise_oracle(const Mindset& human, const Mindset& robot, const AdaptParams& params = {});
Explanation concise_oracle(const AdaptationProblem& problem);

}  // namespace explane::reconcile
