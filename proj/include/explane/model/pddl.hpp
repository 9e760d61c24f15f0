#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace explane::model {

/// A predicate occurrence inside a schema or a problem. Arguments are either
/// variables (leading '?') or object names.
struct AtomTemplate {
  std::string predicate;
  std::vector<std::string> args;

  auto operator<=>(const AtomTemplate&) const = default;
  bool operator==(const AtomTemplate&) const = default;
};

struct TypedName {
  std::string name;
  std::string type;

  auto operator<=>(const TypedName&) const = default;
  bool operator==(const TypedName&) const = default;
};

struct PredicateDecl {
  std::string name;
  std::vector<TypedName> params;

  bool operator==(const PredicateDecl&) const = default;
};

struct ActionSchema {
  std::string name;
  std::vector<TypedName> params;
  std::vector<AtomTemplate> pre;
  std::vector<AtomTemplate> add;
  std::vector<AtomTemplate> del;
  double cost = 1.0;

  bool operator==(const ActionSchema&) const = default;
};

struct DomainModel {
  std::string name;
  /// type -> parent type; "object" is the implicit root and is never listed.
  std::map<std::string, std::string> types;
  std::vector<PredicateDecl> predicates;
  std::vector<ActionSchema> actions;

  const PredicateDecl* find_predicate(std::string_view name) const;
  /// True when `type` equals `ancestor` or derives from it.
  bool is_subtype(const std::string& type, const std::string& ancestor) const;
  bool has_type(const std::string& type) const;

  bool operator==(const DomainModel&) const = default;
};

struct ProblemModel {
  std::string name;
  std::string domain;
  std::vector<TypedName> objects;
  std::vector<AtomTemplate> init;
  std::vector<AtomTemplate> goal;

  bool operator==(const ProblemModel&) const = default;
};

/// Parses a domain definition. Accepts the standard `:precondition`/`:effect`
/// keywords and the `:pre`/`:eff+`/`:eff-` shorthand, plus an optional `:cost`.
/// Throws ParseError on malformed text and on negative preconditions.
DomainModel parse_domain(std::string_view text);
ProblemModel parse_problem(std::string_view text);

/// Canonical PDDL rendering; parse_domain(to_pddl(d)) == d.
std::string to_pddl(const DomainModel& domain);
std::string to_pddl(const ProblemModel& problem);

std::string read_file(const std::string& path);

}  // namespace explane::model
