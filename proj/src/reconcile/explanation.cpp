#include "explane/reconcile/explanation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "explane/error.hpp"

namespace explane::reconcile {

using nlohmann::json;

std::string_view to_string(Disclosure d) {
  switch (d) {
    case Disclosure::IntentOnly:
      return "intent-only";
    case Disclosure::IntentAndDetails:
      return "intent+details";
    case Disclosure::ActionUnit:
      return "action";
  }
  return "?";
}

namespace {

int causal_rank(model::FeatureKind k) {
  switch (k) {
    case model::FeatureKind::InitLiteral:
      return 0;
    case model::FeatureKind::Precondition:
      return 1;
    case model::FeatureKind::AddEffect:
      return 2;
    case model::FeatureKind::DeleteEffect:
      return 3;
    case model::FeatureKind::ActionPresence:
      return 4;
  }
  return 5;
}

std::string replace_all(std::string text, const std::string& key, const std::string& value) {
  for (std::size_t pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + value.size()))
    text.replace(pos, key.size(), value);
  return text;
}

}  // namespace

std::vector<FeatureEdit> causal_order(const model::ChangeSet& changes) {
  std::vector<FeatureEdit> out;
  for (const auto& f : changes.adds) out.push_back({f, true});
  for (const auto& f : changes.removes) out.push_back({f, false});
  std::stable_sort(out.begin(), out.end(), [](const FeatureEdit& a, const FeatureEdit& b) {
    const int ra = causal_rank(a.feature.kind), rb = causal_rank(b.feature.kind);
    if (ra != rb) return ra < rb;
    return a.feature < b.feature;
  });
  return out;
}

std::string to_string(const FeatureEdit& e) { return (e.added ? "+" : "-") + model::to_string(e.feature); }

FeatureEdit parse_feature_edit(std::string_view text) {
  auto fail = [&](const std::string& why) {
    return ParseError("feature edit '" + std::string(text) + "': " + why, 0, 0);
  };
  std::size_t i = 0;
  while (i < text.size() && text[i] == ' ') ++i;
  if (i >= text.size() || (text[i] != '+' && text[i] != '-')) throw fail("expected a leading + or -");
  FeatureEdit edit;
  edit.added = text[i++] == '+';
  const std::size_t kind_end = text.find_first_of(" (", i);
  model::FeatureKind kind;
  try {
    kind = model::feature_kind_from_string(text.substr(i, kind_end - i));
  } catch (const ModelError&) {
    throw fail("unknown feature kind");
  }
  std::vector<std::string> groups;
  for (i = kind_end; i < text.size(); ++i) {
    if (text[i] == ' ') continue;
    if (text[i] != '(') throw fail("expected '('");
    const std::size_t close = text.find(')', i);
    if (close == std::string_view::npos) throw fail("unbalanced parentheses");
    std::string inner(text.substr(i + 1, close - i - 1));
    std::istringstream words(inner);
    std::string w, joined;
    while (words >> w) joined += (joined.empty() ? "" : " ") + w;
    if (joined.empty()) throw fail("empty name");
    groups.push_back(joined);
    i = close;
  }
  const bool one = kind == model::FeatureKind::InitLiteral || kind == model::FeatureKind::ActionPresence;
  if (groups.size() != (one ? 1U : 2U)) throw fail("wrong number of names");
  switch (kind) {
    case model::FeatureKind::InitLiteral:
      edit.feature = model::ModelFeature::init(groups[0]);
      break;
    case model::FeatureKind::ActionPresence:
      edit.feature = model::ModelFeature::presence(groups[0]);
      break;
    default:
      edit.feature = {kind, groups[0], groups[1]};
  }
  return edit;
}

std::size_t ExplanationStep::size() const {
  switch (level) {
    case Disclosure::IntentOnly:
      return 1;
    case Disclosure::IntentAndDetails:
      return 1 + changes.size();
    case Disclosure::ActionUnit:
      return changes.size();
  }
  return 0;
}

std::size_t Explanation::total_size() const {
  std::size_t n = 0;
  for (const auto& s : steps) n += s.size();
  return n;
}

model::ChangeSet Explanation::all_changes() const {
  model::ChangeSet out;
  for (const auto& s : steps) out = out.merged(s.changes);
  return out;
}

std::string to_json(const Explanation& e) {
  json arr = json::array();
  auto number = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  for (std::size_t i = 0; i < e.steps.size(); ++i) {
    const auto& s = e.steps[i];
    json changes = json::array();
    for (const auto& edit : causal_order(s.changes)) changes.push_back(to_string(edit));
    json step = {{"step", i},
                 {"option", s.option},
                 {"intent", s.intent},
                 {"level", std::string(to_string(s.level))},
                 {"changes", changes},
                 {"gammaBefore", number(s.gamma_before)},
                 {"gammaAfter", number(s.gamma_after)}};
    if (s.deliver_before >= 0) step["deliverBefore"] = s.deliver_before;
    arr.push_back(std::move(step));
  }
  return arr.dump(2);
}

Templates Templates::defaults() {
  Templates t;
  t.feature = {
      {"+init", "{literal} holds from the start"},
      {"-init", "{literal} does not hold at the start"},
      {"+pre", "{action} requires {literal}"},
      {"-pre", "{action} no longer requires {literal}"},
      {"+add", "{action} results in {literal}"},
      {"-add", "{action} no longer results in {literal}"},
      {"+del", "{action} undoes {literal}"},
      {"-del", "{action} no longer undoes {literal}"},
      {"+action", "{action} is possible"},
      {"-action", "{action} is not possible"},
  };
  return t;
}

Templates Templates::from_json(const std::string& text) {
  Templates t = defaults();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("templates: ") + e.what(), 0, 0);
  }
  if (!j.is_object()) throw ParseError("templates: expected an object", 0, 0);
  if (j.contains("intent_only")) t.intent_only = j.at("intent_only").get<std::string>();
  if (j.contains("detailed")) t.detailed = j.at("detailed").get<std::string>();
  if (j.contains("unit")) t.unit = j.at("unit").get<std::string>();
  if (j.contains("joiner")) t.joiner = j.at("joiner").get<std::string>();
  if (j.contains("feature"))
    for (const auto& [k, v] : j.at("feature").items()) t.feature[k] = v.get<std::string>();
  if (j.contains("phrases"))
    for (const auto& [k, v] : j.at("phrases").items()) t.phrases[k] = v.get<std::string>();
  return t;
}

Templates Templates::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open templates file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

namespace {

std::string phrase(const Templates& t, const std::string& name) {
  auto it = t.phrases.find(name);
  return it == t.phrases.end() ? model::paren(name) : it->second;
}

std::string sentence(const Templates& t, const FeatureEdit& e) {
  const std::string key = (e.added ? "+" : "-") + std::string(model::to_string(e.feature.kind));
  auto it = t.feature.find(key);
  std::string s = it == t.feature.end() ? to_string(e) : it->second;
  s = replace_all(s, "{action}", phrase(t, e.feature.action));
  s = replace_all(s, "{literal}", phrase(t, e.feature.literal));
  return s;
}

}  // namespace

std::vector<std::string> render_english(const Explanation& e, const Templates& t) {
  std::vector<std::string> lines;
  for (const auto& step : e.steps) {
    std::string changes;
    for (const auto& edit : causal_order(step.changes)) {
      if (!changes.empty()) changes += t.joiner;
      changes += sentence(t, edit);
    }
    const std::string& form = step.level == Disclosure::IntentOnly         ? t.intent_only
                              : step.level == Disclosure::IntentAndDetails ? t.detailed
                                                                           : t.unit;
    std::string line = replace_all(form, "{intent}", step.intent);
    lines.push_back(replace_all(line, "{changes}", changes));
  }
  return lines;
}

}  // namespace explane::reconcile
