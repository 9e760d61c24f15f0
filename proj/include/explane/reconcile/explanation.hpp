#pragma once

#include <map>
#include <string>
#include <vector>

#include "explane/model/features.hpp"

namespace explane::reconcile {

enum class Disclosure {
  IntentOnly,        ///< the intent label alone is delivered
  IntentAndDetails,  ///< intent label plus every action-level change
  ActionUnit,        ///< flat explanations: a single action-level change, no intent
};

std::string_view to_string(Disclosure d);

/// A signed feature edit: `added` is true for features the listener must add.
struct FeatureEdit {
  model::ModelFeature feature;
  bool added = true;

  auto operator<=>(const FeatureEdit&) const = default;
  bool operator==(const FeatureEdit&) const = default;
};

/// Edits of a change set ordered causally: init literals, then preconditions,
/// then effects, then action presence; canonical order within a kind.
std::vector<FeatureEdit> causal_order(const model::ChangeSet& changes);
/// "+pre (move room2 room3) (pin-entered)"
std::string to_string(const FeatureEdit& e);
/// Inverse of to_string; throws ParseError on malformed text.
FeatureEdit parse_feature_edit(std::string_view text);

struct ExplanationStep {
  std::string option;  // option id; empty for flat units
  std::string intent;
  model::ChangeSet changes;
  Disclosure level = Disclosure::IntentOnly;
  /// Plan step before which the step is delivered (online delivery); -1 means up front.
  int deliver_before = -1;
  double gamma_before = 0.0;
  double gamma_after = 0.0;

  /// Disclosed units: 1 for intent-only, 1 + |changes| for detailed, 1 per flat unit.
  std::size_t size() const;
};

struct Explanation {
  std::vector<ExplanationStep> steps;

  std::size_t total_size() const;
  bool empty() const { return steps.empty(); }
  model::ChangeSet all_changes() const;
};

/// [{step, option, intent, level, changes[], gammaBefore, gammaAfter}] with
/// infinite costs written as null.
std::string to_json(const Explanation& e);

/// Plain-English rendering templates. Placeholders: {intent}, {changes},
/// {action}, {literal}.
struct Templates {
  std::string intent_only = "Because of {intent}, I am not doing what you expected.";
  std::string detailed = "Because of {intent}, {changes}.";
  std::string unit = "Note that {changes}.";
  std::string joiner = "; ";
  std::map<std::string, std::string> feature;  // key: "+pre", "-init", ...
  std::map<std::string, std::string> phrases;  // atom or action name -> words

  static Templates defaults();
  static Templates from_json(const std::string& text);
  static Templates load(const std::string& path);
};

std::vector<std::string> render_english(const Explanation& e, const Templates& templates);

}  // namespace explane::reconcile
