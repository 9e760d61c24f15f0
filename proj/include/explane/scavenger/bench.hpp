#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "explane/reconcile/reconcile.hpp"
#include "explane/sim/teammate.hpp"

namespace explane::scavenger {

/// One of the catalog's environment changes and the unit edits it causes in
/// the robot's model relative to the human's nominal model.
struct Change {
  std::string name;
  std::string option;
  model::ChangeSet units;
  std::map<std::string, std::string> labels;  // unit edit text -> label
};

struct OptionInfo {
  std::string id;
  std::string intent;
  std::vector<std::string> requires_explained;
};

struct DomainCatalog {
  model::PlanningTask nominal;
  std::vector<Change> changes;      // catalog order
  std::vector<OptionInfo> options;  // sorted by id
  reconcile::Templates templates;

  std::size_t unit_count() const;
  const Change& change(const std::string& name) const;
  /// Nominal model with the units of every active change applied.
  model::PlanningTask robot_task(const std::vector<std::string>& active) const;
  reconcile::Mindset human_mindset() const;
  /// Robot mindset whose options carry the units of the active changes only.
  reconcile::Mindset robot_mindset(const std::vector<std::string>& active) const;
};

struct CatalogCounts {
  std::size_t changes = 10;
  std::size_t units = 13;
  std::size_t options = 5;
};

/// Reads catalog.json (and the domain, problem and templates files it names)
/// from `dir`. Throws ModelError when the counts differ from `expected`.
DomainCatalog load_catalog(const std::string& dir, const CatalogCounts& expected = {});
/// The bundled catalog.
DomainCatalog load_catalog();
std::string bundled_dir();

struct Scenario {
  std::string id;
  std::vector<std::string> changes;
  std::vector<std::size_t> inject;  // executed-action indices
  std::uint64_t seed = 0;  // drives the choice of injected actions

  /// {"id", "changes": [...], "inject": [...], "seed"}
  std::string to_json() const;
  static Scenario from_json(const std::string& text);
  static Scenario load(const std::string& path);
};

/// Checks change names against the catalog and that the robot model is solvable.
void validate(const DomainCatalog& catalog, const Scenario& s);
/// Every *.json file of `dir`, ordered by id with embedded numbers compared numerically.
std::vector<Scenario> load_scenarios(const std::string& dir);

/// Seeded random scenarios with 2 to 5 active changes each, all solvable in
/// the robot model, ids "G1".. "G<count>". Throws ModelError when count is 0.
std::vector<Scenario> generate_scenarios(const DomainCatalog& catalog, std::size_t count, std::uint64_t seed);

enum class Method { Hrl, Oeg, Peg };

std::string_view to_string(Method m);
Method method_from_string(std::string_view s);
inline constexpr Method kMethods[] = {Method::Hrl, Method::Oeg, Method::Peg};

struct RunParams {
  reconcile::AdaptParams adapt;
};

struct ReportRow {
  std::string scenario;
  Method method = Method::Hrl;
  std::size_t size = 0;      // |E|
  std::size_t size_all = 0;  // |E| plus one unit per difference the relevance filter dropped
  double seconds = 0.0;
  std::size_t flags = 0;
  bool sound = false;
  std::size_t actions = 0;  // executed robot actions, injected ones included
  reconcile::Explanation explanation;
  sim::ExecutionTrace trace;
};

/// Generates the explanation with `method`, delivers it to a fresh simulated
/// human while the robot executes its plan with the scenario's injected
/// actions, and records size, time, flags and soundness. `seed` drives the
/// learner; injections draw from the scenario's own seed.
ReportRow run_scenario(const DomainCatalog& catalog, const Scenario& s, Method method, const RunParams& params,
                       std::uint64_t seed);

/// Stream seed for one cell.
std::uint64_t cell_seed(std::uint64_t seed, const std::string& scenario, Method method);

/// Every scenario x method cell, computed in parallel; rows ordered by
/// scenario then method.
std::vector<ReportRow> run_bench(const DomainCatalog& catalog, const std::vector<Scenario>& scenarios,
                                 const RunParams& params, std::uint64_t seed);

/// CSV "scenario,method,E,seconds,flags,sound,E_all" followed by one "mean" line
/// per method in the order hrl, oeg, peg. Throws ModelError on no rows.
std::string write_report(const std::vector<ReportRow>& rows);

}  // namespace explane::scavenger
