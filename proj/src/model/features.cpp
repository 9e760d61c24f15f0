#include "explane/model/features.hpp"

#include <algorithm>
#include <map>

#include "explane/error.hpp"

namespace explane::model {

std::string_view to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::InitLiteral: return "init";
    case FeatureKind::Precondition: return "pre";
    case FeatureKind::AddEffect: return "add";
    case FeatureKind::DeleteEffect: return "del";
    case FeatureKind::ActionPresence: return "action";
  }
  return "?";
}

FeatureKind feature_kind_from_string(std::string_view s) {
  if (s == "init") return FeatureKind::InitLiteral;
  if (s == "pre") return FeatureKind::Precondition;
  if (s == "add") return FeatureKind::AddEffect;
  if (s == "del") return FeatureKind::DeleteEffect;
  if (s == "action") return FeatureKind::ActionPresence;
  throw ModelError("unknown feature kind '" + std::string(s) + "'");
}

std::string to_string(const ModelFeature& f) {
  std::string s(to_string(f.kind));
  if (!f.action.empty()) s += " " + paren(f.action);
  if (!f.literal.empty()) s += " " + paren(f.literal);
  return s;
}

ChangeSet ChangeSet::merged(const ChangeSet& other) const {
  ChangeSet out = *this;
  out.adds.insert(other.adds.begin(), other.adds.end());
  out.removes.insert(other.removes.begin(), other.removes.end());
  for (const auto& f : out.adds)
    if (out.removes.contains(f)) throw ModelError("change set both adds and removes " + to_string(f));
  return out;
}

std::vector<ChangeSet> ChangeSet::units() const {
  std::vector<ChangeSet> out;
  for (const auto& f : adds) out.push_back({{f}, {}});
  for (const auto& f : removes) out.push_back({{}, {f}});
  return out;
}

bool ChangeSet::contains(const ChangeSet& other) const {
  return std::includes(adds.begin(), adds.end(), other.adds.begin(), other.adds.end()) &&
         std::includes(removes.begin(), removes.end(), other.removes.begin(), other.removes.end());
}

bool ChangeSet::disjoint(const ChangeSet& other) const {
  for (const auto& f : other.adds)
    if (adds.contains(f)) return false;
  for (const auto& f : other.removes)
    if (removes.contains(f)) return false;
  return true;
}

FeatureSet model_features(const PlanningTask& task) {
  FeatureSet out;
  for (int i : task.init()) out.insert(ModelFeature::init(task.atom_name(i)));
  for (const auto& a : task.actions()) {
    out.insert(ModelFeature::presence(a.name));
    for (int i : a.pre) out.insert(ModelFeature::precondition(a.name, task.atom_name(i)));
    for (int i : a.add) out.insert(ModelFeature::add_effect(a.name, task.atom_name(i)));
    for (int i : a.del) out.insert(ModelFeature::delete_effect(a.name, task.atom_name(i)));
  }
  return out;
}

ChangeSet model_diff(const PlanningTask& from, const PlanningTask& to) {
  const FeatureSet a = model_features(from);
  const FeatureSet b = model_features(to);
  ChangeSet out;
  std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::inserter(out.adds, out.adds.end()));
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out.removes, out.removes.end()));
  return out;
}

PlanningTask apply_changes(const PlanningTask& task, const ChangeSet& changes) {
  if (changes.empty()) return task;
  for (const auto& f : changes.adds)
    if (changes.removes.contains(f)) throw ModelError("change set both adds and removes " + to_string(f));

  FeatureSet features = model_features(task);
  for (const auto& f : changes.removes) {
    if (features.erase(f) == 0) throw ModelError("cannot remove absent feature " + to_string(f));
  }
  for (const auto& f : changes.adds) {
    if (!f.literal.empty() && !task.atom_index(f.literal))
      throw ModelError("feature " + to_string(f) + " uses an atom outside the predicate universe");
    if (!features.insert(f).second) throw ModelError("cannot add present feature " + to_string(f));
  }

  std::map<std::string, ActionSpec> actions;
  std::vector<std::string> init;
  for (const auto& f : features) {
    if (f.kind == FeatureKind::ActionPresence) {
      ActionSpec spec;
      spec.name = f.action;
      if (auto idx = task.action_index(f.action)) spec.cost = task.actions()[static_cast<std::size_t>(*idx)].cost;
      actions.emplace(f.action, std::move(spec));
    }
  }
  for (const auto& f : features) {
    if (f.kind == FeatureKind::InitLiteral) {
      init.push_back(f.literal);
      continue;
    }
    if (f.kind == FeatureKind::ActionPresence) continue;
    auto it = actions.find(f.action);
    if (it == actions.end())
      throw ModelError("feature " + to_string(f) + " refers to an action that is not present");
    switch (f.kind) {
      case FeatureKind::Precondition: it->second.pre.push_back(f.literal); break;
      case FeatureKind::AddEffect: it->second.add.push_back(f.literal); break;
      case FeatureKind::DeleteEffect: it->second.del.push_back(f.literal); break;
      default: break;
    }
  }
  std::vector<ActionSpec> specs;
  specs.reserve(actions.size());
  for (auto& [name, spec] : actions) specs.push_back(std::move(spec));
  return PlanningTask(task.atoms(), std::move(specs), init, task.goal_names());
}

}  // namespace explane::model
