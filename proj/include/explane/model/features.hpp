#pragma once

#include <compare>
#include <set>
#include <string>

#include "explane/model/task.hpp"

namespace explane::model {

enum class FeatureKind { InitLiteral, Precondition, AddEffect, DeleteEffect, ActionPresence };

std::string_view to_string(FeatureKind kind);
FeatureKind feature_kind_from_string(std::string_view s);

/// One element of the feature decomposition of a planning model. `action` is
/// empty exactly for init literals; `literal` is empty exactly for presence.
struct ModelFeature {
  FeatureKind kind = FeatureKind::InitLiteral;
  std::string action;
  std::string literal;

  static ModelFeature init(std::string literal) { return {FeatureKind::InitLiteral, {}, std::move(literal)}; }
  static ModelFeature precondition(std::string action, std::string literal) {
    return {FeatureKind::Precondition, std::move(action), std::move(literal)};
  }
  static ModelFeature add_effect(std::string action, std::string literal) {
    return {FeatureKind::AddEffect, std::move(action), std::move(literal)};
  }
  static ModelFeature delete_effect(std::string action, std::string literal) {
    return {FeatureKind::DeleteEffect, std::move(action), std::move(literal)};
  }
  static ModelFeature presence(std::string action) { return {FeatureKind::ActionPresence, std::move(action), {}}; }

  auto operator<=>(const ModelFeature&) const = default;
  bool operator==(const ModelFeature&) const = default;
};

/// "pre (move room2 room3) (pin-entered)", "init (at room1)", "action (wait)".
std::string to_string(const ModelFeature& f);

using FeatureSet = std::set<ModelFeature>;

/// Edit script between two models. adds and removes are disjoint.
struct ChangeSet {
  FeatureSet adds;
  FeatureSet removes;

  std::size_t size() const { return adds.size() + removes.size(); }
  bool empty() const { return adds.empty() && removes.empty(); }
  ChangeSet inverted() const { return {removes, adds}; }
  /// Set union; throws ModelError when the result would both add and remove a feature.
  ChangeSet merged(const ChangeSet& other) const;
  /// One single-feature ChangeSet per edit, in canonical order.
  std::vector<ChangeSet> units() const;
  bool contains(const ChangeSet& other) const;
  bool disjoint(const ChangeSet& other) const;

  bool operator==(const ChangeSet&) const = default;
};

FeatureSet model_features(const PlanningTask& task);
ChangeSet model_diff(const PlanningTask& from, const PlanningTask& to);
/// Number of feature changes between two models, |Δ|.
inline std::size_t distance(const PlanningTask& a, const PlanningTask& b) { return model_diff(a, b).size(); }

/// Returns a new task with the edits applied. Removing an absent feature,
/// adding a present one, or leaving pre/effect features on an absent action
/// throws ModelError. New literals must belong to the task's atom universe.
PlanningTask apply_changes(const PlanningTask& task, const ChangeSet& changes);

}  // namespace explane::model
