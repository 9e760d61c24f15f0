#include "explane/scavenger/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cctype>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "explane/baselines/flat.hpp"
#include "explane/error.hpp"
#include "explane/model/pddl.hpp"
#include "explane/planner/planner.hpp"

namespace explane::scavenger {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(what + ": " + e.what(), 0, 0);
  }
}

/// Natural ordering: digit runs compare by value.
bool natural_less(const std::string& a, const std::string& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (std::isdigit(static_cast<unsigned char>(a[i])) && std::isdigit(static_cast<unsigned char>(b[j]))) {
      std::size_t ei = i, ej = j;
      while (ei < a.size() && std::isdigit(static_cast<unsigned char>(a[ei]))) ++ei;
      while (ej < b.size() && std::isdigit(static_cast<unsigned char>(b[ej]))) ++ej;
      const auto na = std::stoull(a.substr(i, ei - i)), nb = std::stoull(b.substr(j, ej - j));
      if (na != nb) return na < nb;
      i = ei;
      j = ej;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  return a.size() - i < b.size() - j;
}

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::size_t DomainCatalog::unit_count() const {
  std::size_t n = 0;
  for (const auto& c : changes) n += c.units.size();
  return n;
}

const Change& DomainCatalog::change(const std::string& name) const {
  for (const auto& c : changes)
    if (c.name == name) return c;
  throw ModelError("unknown change '" + name + "'");
}

model::PlanningTask DomainCatalog::robot_task(const std::vector<std::string>& active) const {
  model::ChangeSet all;
  for (const auto& name : active) all = all.merged(change(name).units);
  return model::apply_changes(nominal, all);
}

reconcile::Mindset DomainCatalog::human_mindset() const { return {nominal, {}}; }

reconcile::Mindset DomainCatalog::robot_mindset(const std::vector<std::string>& active) const {
  reconcile::Mindset m{robot_task(active), {}};
  for (const auto& info : options) {
    hrl::Option o{info.id, info.intent, {}, info.requires_explained};
    for (const auto& name : active) {
      const auto& c = change(name);
      if (c.option == info.id) o.changes = o.changes.merged(c.units);
    }
    if (!o.changes.empty()) m.options.push_back(std::move(o));
  }
  for (auto& o : m.options) {
    std::erase_if(o.requires_explained, [&](const std::string& id) {
      return std::none_of(m.options.begin(), m.options.end(), [&](const hrl::Option& p) { return p.id == id; });
    });
  }
  return m;
}

DomainCatalog load_catalog(const std::string& dir, const CatalogCounts& expected) {
  const fs::path root(dir);
  const json j = parse_json(slurp(root / "catalog.json"), "catalog.json");
  DomainCatalog cat;
  const auto domain = model::parse_domain(slurp(root / j.at("domain").get<std::string>()));
  const auto problem = model::parse_problem(slurp(root / j.at("problem").get<std::string>()));
  cat.nominal = model::ground(domain, problem);
  cat.templates = j.contains("templates") ? reconcile::Templates::load((root / j.at("templates").get<std::string>()).string())
                                          : reconcile::Templates::defaults();

  std::set<std::string> option_ids;
  for (const auto& o : j.at("options")) {
    OptionInfo info{lower(o.at("id").get<std::string>()), o.at("intent").get<std::string>(), {}};
    if (o.contains("requires"))
      for (const auto& r : o.at("requires")) info.requires_explained.push_back(lower(r.get<std::string>()));
    if (!option_ids.insert(info.id).second) throw ModelError("duplicate option '" + info.id + "' in catalog");
    cat.options.push_back(std::move(info));
  }
  std::sort(cat.options.begin(), cat.options.end(), [](const OptionInfo& a, const OptionInfo& b) { return a.id < b.id; });

  std::set<std::string> names;
  model::ChangeSet seen;
  for (const auto& c : j.at("changes")) {
    Change ch{lower(c.at("name").get<std::string>()), lower(c.at("option").get<std::string>()), {}, {}};
    if (!names.insert(ch.name).second) throw ModelError("duplicate change '" + ch.name + "' in catalog");
    if (!option_ids.contains(ch.option)) throw ModelError("change '" + ch.name + "' names unknown option '" + ch.option + "'");
    for (const auto& u : c.at("units")) {
      const bool labelled = u.is_object();
      const auto edit = reconcile::parse_feature_edit(lower((labelled ? u.at("edit") : u).get<std::string>()));
      (edit.added ? ch.units.adds : ch.units.removes).insert(edit.feature);
      if (labelled && u.contains("label")) ch.labels[reconcile::to_string(edit)] = u.at("label").get<std::string>();
    }
    if (ch.units.empty()) throw ModelError("change '" + ch.name + "' has no units");
    if (!seen.disjoint(ch.units)) throw ModelError("change '" + ch.name + "' repeats a unit of another change");
    seen = seen.merged(ch.units);
    cat.changes.push_back(std::move(ch));
  }
  model::apply_changes(cat.nominal, seen);

  if (cat.changes.size() != expected.changes || cat.unit_count() != expected.units ||
      cat.options.size() != expected.options) {
    throw ModelError("catalog has " + std::to_string(cat.changes.size()) + " changes, " +
                     std::to_string(cat.unit_count()) + " units and " + std::to_string(cat.options.size()) +
                     " options; expected " + std::to_string(expected.changes) + ", " +
                     std::to_string(expected.units) + " and " + std::to_string(expected.options));
  }
  return cat;
}

std::string bundled_dir() { return (fs::path(EXPLANE_DATA_DIR) / "scavenger").string(); }

DomainCatalog load_catalog() { return load_catalog(bundled_dir()); }

std::string Scenario::to_json() const {
  json j = {{"id", id}, {"changes", changes}, {"inject", inject}, {"seed", seed}};
  return j.dump(2);
}

Scenario Scenario::from_json(const std::string& text) {
  const json j = parse_json(text, "scenario");
  Scenario s;
  try {
    s.id = j.at("id").get<std::string>();
    for (const auto& c : j.at("changes")) s.changes.push_back(lower(c.get<std::string>()));
    if (j.contains("inject")) s.inject = j.at("inject").get<std::vector<std::size_t>>();
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("scenario: ") + e.what(), 0, 0);
  }
  return s;
}

Scenario Scenario::load(const std::string& path) { return from_json(slurp(path)); }

void validate(const DomainCatalog& catalog, const Scenario& s) {
  std::set<std::string> unique(s.changes.begin(), s.changes.end());
  if (unique.size() != s.changes.size()) throw ModelError("scenario '" + s.id + "' repeats a change");
  const auto robot = catalog.robot_task(s.changes);
  const auto plan = planner::plan_task(robot);
  if (!plan) throw UnsolvableError("scenario '" + s.id + "' is unsolvable in the robot model");
  for (std::size_t k : s.inject)
    if (k > plan->size()) throw ModelError("scenario '" + s.id + "' injects beyond the plan");
}

std::vector<Scenario> load_scenarios(const std::string& dir) {
  std::vector<Scenario> out;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") out.push_back(Scenario::load(entry.path().string()));
  std::sort(out.begin(), out.end(), [](const Scenario& a, const Scenario& b) { return natural_less(a.id, b.id); });
  return out;
}

std::vector<Scenario> generate_scenarios(const DomainCatalog& catalog, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw ModelError("scenario count must be at least 1");
  const std::size_t pool = catalog.changes.size();
  if (pool < 2) throw ModelError("catalog too small for scenario generation");
  std::mt19937_64 rng(seed);
  std::vector<Scenario> out;
  std::size_t attempts = 0;
  while (out.size() < count) {
    if (++attempts > 1000 * count) throw ModelError("could not generate solvable scenarios");
    std::vector<std::size_t> idx(pool);
    for (std::size_t i = 0; i < pool; ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(2, std::min<std::size_t>(5, pool))(rng);
    std::sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k));
    Scenario s;
    s.id = "G" + std::to_string(out.size() + 1);
    for (std::size_t i = 0; i < k; ++i) s.changes.push_back(catalog.changes[idx[i]].name);
    s.seed = rng();
    if (!planner::plan_task(catalog.robot_task(s.changes))) continue;
    out.push_back(std::move(s));
  }
  return out;
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Hrl:
      return "hrl";
    case Method::Oeg:
      return "oeg";
    case Method::Peg:
      return "peg";
  }
  return "?";
}

Method method_from_string(std::string_view s) {
  if (s == "hrl") return Method::Hrl;
  if (s == "oeg") return Method::Oeg;
  if (s == "peg") return Method::Peg;
  throw ModelError("unknown method '" + std::string(s) + "'");
}

ReportRow run_scenario(const DomainCatalog& catalog, const Scenario& s, Method method, const RunParams& params,
                       std::uint64_t seed) {
  validate(catalog, s);
  const auto human = catalog.human_mindset();
  const auto robot = catalog.robot_mindset(s.changes);
  const double gamma = params.adapt.plan_gamma;

  ReportRow row;
  row.scenario = s.id;
  row.method = method;
  const auto t0 = std::chrono::steady_clock::now();
  switch (method) {
    case Method::Hrl:
      row.explanation = reconcile::mindset_adapt(human, robot, params.adapt, seed).explanation;
      break;
    case Method::Oeg:
      row.explanation = baselines::oeg_interleave(human.task, robot.task, gamma).to_explanation(human.task, robot.task, gamma);
      break;
    case Method::Peg:
      row.explanation = baselines::peg_order(human.task, robot.task, gamma).to_explanation(human.task, robot.task, gamma);
      break;
  }
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  row.size = row.explanation.total_size();
  const std::size_t dropped = model::model_diff(human.task, robot.task).size() -
                              reconcile::relevant_changes(human.task, robot.task, gamma).size();
  row.size_all = row.size + dropped;

  sim::SimHuman teammate(human, robot.task, gamma);
  row.trace = sim::execute(robot.task, teammate, row.explanation, s.inject, s.seed, gamma);
  row.flags = row.trace.questionable();
  row.actions = row.trace.size();
  const auto robot_plan = planner::plan_task(robot.task, gamma);
  const auto human_plan = planner::plan_task(teammate.mindset().task, gamma);
  row.sound = robot_plan && human_plan && planner::plans_equal(*human_plan, *robot_plan);
  return row;
}

std::uint64_t cell_seed(std::uint64_t seed, const std::string& scenario, Method method) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : scenario) h = (h ^ c) * 0x100000001b3ULL;
  return splitmix(splitmix(seed ^ h) + static_cast<std::uint64_t>(method));
}

std::vector<ReportRow> run_bench(const DomainCatalog& catalog, const std::vector<Scenario>& scenarios,
                                 const RunParams& params, std::uint64_t seed) {
  const std::size_t methods = std::size(kMethods);
  const std::size_t cells = scenarios.size() * methods;
  std::vector<ReportRow> rows(cells);
  std::vector<std::exception_ptr> errors(cells);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(cells); ++i) {
    const auto& s = scenarios[static_cast<std::size_t>(i) / methods];
    const Method m = kMethods[static_cast<std::size_t>(i) % methods];
    try {
      rows[static_cast<std::size_t>(i)] = run_scenario(catalog, s, m, params, cell_seed(seed, s.id, m));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

std::string write_report(const std::vector<ReportRow>& rows) {
  if (rows.empty()) throw ModelError("report needs at least one row");
  std::ostringstream out;
  out << "scenario,method,E,seconds,flags,sound,E_all\n";
  out << std::fixed;
  for (const auto& r : rows)
    out << r.scenario << "," << to_string(r.method) << "," << r.size << "," << std::setprecision(6) << r.seconds
        << "," << r.flags << "," << (r.sound ? 1 : 0) << "," << r.size_all << "\n";
  for (Method m : kMethods) {
    double e = 0, secs = 0, flags = 0, sound = 0, all = 0;
    std::size_t n = 0;
    for (const auto& r : rows) {
      if (r.method != m) continue;
      e += static_cast<double>(r.size);
      secs += r.seconds;
      flags += static_cast<double>(r.flags);
      sound += r.sound ? 1.0 : 0.0;
      all += static_cast<double>(r.size_all);
      ++n;
    }
    if (n == 0) continue;
    const double d = static_cast<double>(n);
    out << "mean," << to_string(m) << "," << std::setprecision(3) << e / d << "," << std::setprecision(6)
        << secs / d << "," << std::setprecision(3) << flags / d << "," << sound / d << "," << all / d << "\n";
  }
  return out.str();
}

}  // namespace explane::scavenger
