#pragma once

#include <vector>

#include "explane/model/features.hpp"
#include "explane/reconcile/explanation.hpp"

/// Flat (single-tier) explanation strategies used as comparison points for
/// the hierarchical method. Both are reconstructions from short verbal
/// descriptions of the plan-explanation-generation (PEG) and online
/// explanation-generation (OEG) approaches, not ports of those systems.
/// They disclose unit changes only, one feature edit per unit.
namespace explane::baselines {

struct FlatUnit {
  model::ChangeSet change;  // exactly one edit
  int deliver_before = -1;  // plan step; -1 means up front
};

struct FlatExplanation {
  std::vector<FlatUnit> units;

  std::size_t size() const { return units.size(); }
  model::ChangeSet all_changes() const;
  /// Explanation with one action-level step per unit; Γ before/after each
  /// unit is evaluated against `robot`.
  reconcile::Explanation to_explanation(const model::PlanningTask& human, const model::PlanningTask& robot,
                                        double gamma = 0.95) const;
};

/// Every plan-relevant unit change, ordered to minimise the summed replanning
/// cost over the prefix sequence. Exact over all orders for up to 8 units,
/// greedy beyond. Ties go to the canonical unit order.
FlatExplanation peg_order(const model::PlanningTask& human, const model::PlanningTask& robot, double gamma = 0.95);

/// Walks the robot plan and, before every step where the human's next
/// expected action diverges, emits a smallest set of unit changes restoring
/// agreement. Units still needed for the full plans to match are delivered
/// after the last step. Throws IrreconcilableError when no set of the plan-relevant
/// units repairs a divergence.
FlatExplanation oeg_interleave(const model::PlanningTask& human, const model::PlanningTask& robot,
                               double gamma = 0.95);

}  // namespace explane::baselines
