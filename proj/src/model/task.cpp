#include "explane/model/task.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "explane/error.hpp"

namespace explane::model {

namespace {

std::vector<int> resolve(const std::vector<std::string>& names,
                         const std::unordered_map<std::string, int>& lookup, const std::string& context) {
  std::vector<int> out;
  out.reserve(names.size());
  for (const auto& n : names) {
    auto it = lookup.find(n);
    if (it == lookup.end()) throw ModelError("unknown atom " + paren(n) + " in " + context);
    out.push_back(it->second);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::string> names_of(const std::vector<int>& ids, const std::vector<std::string>& atoms) {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (int i : ids) out.push_back(atoms[static_cast<std::size_t>(i)]);
  return out;
}

std::string atom_name(const std::string& predicate, const std::vector<std::string>& args) {
  std::string s = predicate;
  for (const auto& a : args) {
    s += ' ';
    s += a;
  }
  return s;
}

// Calls fn(assignment) for every tuple in the cartesian product of `domains`.
template <typename Fn>
void for_each_tuple(const std::vector<std::vector<std::string>>& domains, Fn&& fn) {
  for (const auto& d : domains)
    if (d.empty()) return;
  std::vector<std::size_t> idx(domains.size(), 0);
  std::vector<std::string> tuple(domains.size());
  while (true) {
    for (std::size_t i = 0; i < domains.size(); ++i) tuple[i] = domains[i][idx[i]];
    fn(tuple);
    std::size_t k = domains.size();
    while (k > 0) {
      --k;
      if (++idx[k] < domains[k].size()) break;
      idx[k] = 0;
      if (k == 0) return;
    }
    if (domains.empty()) return;
  }
}

}  // namespace

std::string paren(std::string_view name) {
  std::string s;
  s.reserve(name.size() + 2);
  s += '(';
  s += name;
  s += ')';
  return s;
}

PlanningTask::PlanningTask(std::vector<std::string> atoms, std::vector<ActionSpec> actions,
                           const std::vector<std::string>& init, const std::vector<std::string>& goal)
    : atoms_(std::move(atoms)) {
  std::sort(atoms_.begin(), atoms_.end());
  if (std::adjacent_find(atoms_.begin(), atoms_.end()) != atoms_.end())
    throw ModelError("duplicate atom in predicate universe");
  for (std::size_t i = 0; i < atoms_.size(); ++i) atom_lookup_.emplace(atoms_[i], static_cast<int>(i));

  std::sort(actions.begin(), actions.end(),
            [](const ActionSpec& a, const ActionSpec& b) { return a.name < b.name; });
  actions_.reserve(actions.size());
  for (auto& spec : actions) {
    if (!action_lookup_.emplace(spec.name, static_cast<int>(actions_.size())).second)
      throw ModelError("duplicate grounded action " + paren(spec.name));
    if (spec.cost < 0) throw ModelError("negative cost for " + paren(spec.name));
    GroundAction ga;
    ga.name = std::move(spec.name);
    ga.pre = resolve(spec.pre, atom_lookup_, paren(ga.name));
    ga.add = resolve(spec.add, atom_lookup_, paren(ga.name));
    ga.del = resolve(spec.del, atom_lookup_, paren(ga.name));
    ga.cost = spec.cost;
    actions_.push_back(std::move(ga));
  }
  init_ = resolve(init, atom_lookup_, "init");
  goal_ = resolve(goal, atom_lookup_, "goal");
}

std::optional<int> PlanningTask::atom_index(std::string_view name) const {
  auto it = atom_lookup_.find(std::string(name));
  if (it == atom_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> PlanningTask::action_index(std::string_view name) const {
  auto it = action_lookup_.find(std::string(name));
  if (it == action_lookup_.end()) return std::nullopt;
  return it->second;
}

std::vector<ActionSpec> PlanningTask::action_specs() const {
  std::vector<ActionSpec> out;
  out.reserve(actions_.size());
  for (const auto& a : actions_)
    out.push_back({a.name, names_of(a.pre, atoms_), names_of(a.add, atoms_), names_of(a.del, atoms_), a.cost});
  return out;
}

std::vector<std::string> PlanningTask::init_names() const { return names_of(init_, atoms_); }
std::vector<std::string> PlanningTask::goal_names() const { return names_of(goal_, atoms_); }

PlanningTask PlanningTask::with_init(const std::vector<int>& init) const {
  PlanningTask copy = *this;
  copy.init_ = init;
  std::sort(copy.init_.begin(), copy.init_.end());
  copy.init_.erase(std::unique(copy.init_.begin(), copy.init_.end()), copy.init_.end());
  for (int i : copy.init_)
    if (i < 0 || static_cast<std::size_t>(i) >= atoms_.size()) throw ModelError("init atom out of range");
  return copy;
}

PlanningTask ground(const DomainModel& domain, const std::vector<TypedName>& objects,
                    const std::vector<AtomTemplate>& init, const std::vector<AtomTemplate>& goal) {
  std::map<std::string, std::string> object_type;
  for (const auto& o : objects) {
    if (!domain.has_type(o.type)) throw ModelError("object '" + o.name + "' has unknown type '" + o.type + "'");
    if (!object_type.emplace(o.name, o.type).second) throw ModelError("duplicate object '" + o.name + "'");
  }
  auto objects_of = [&](const std::string& type) {
    std::vector<std::string> out;
    for (const auto& [name, t] : object_type)
      if (domain.is_subtype(t, type)) out.push_back(name);
    return out;
  };

  std::vector<std::string> atoms;
  for (const auto& p : domain.predicates) {
    std::vector<std::vector<std::string>> domains;
    for (const auto& param : p.params) domains.push_back(objects_of(param.type));
    if (domains.empty()) {
      atoms.push_back(p.name);
      continue;
    }
    for_each_tuple(domains, [&](const std::vector<std::string>& t) { atoms.push_back(atom_name(p.name, t)); });
  }
  const std::set<std::string> universe(atoms.begin(), atoms.end());

  std::vector<ActionSpec> actions;
  for (const auto& schema : domain.actions) {
    std::vector<std::vector<std::string>> domains;
    for (const auto& param : schema.params) domains.push_back(objects_of(param.type));
    auto instantiate = [&](const std::vector<std::string>& binding) {
      std::map<std::string, std::string> sub;
      for (std::size_t i = 0; i < schema.params.size(); ++i) sub[schema.params[i].name] = binding[i];
      bool well_typed = true;
      auto lower = [&](const std::vector<AtomTemplate>& list) {
        std::vector<std::string> out;
        for (const auto& a : list) {
          std::vector<std::string> args;
          for (const auto& v : a.args) args.push_back(sub.at(v));
          std::string n = atom_name(a.predicate, args);
          if (!universe.contains(n)) well_typed = false;
          out.push_back(std::move(n));
        }
        return out;
      };
      ActionSpec spec;
      spec.name = atom_name(schema.name, binding);
      spec.pre = lower(schema.pre);
      spec.add = lower(schema.add);
      spec.del = lower(schema.del);
      spec.cost = schema.cost;
      if (well_typed) actions.push_back(std::move(spec));
    };
    if (domains.empty()) {
      instantiate({});
    } else {
      for_each_tuple(domains, instantiate);
    }
  }

  auto lower_literals = [&](const std::vector<AtomTemplate>& list, const char* where) {
    std::vector<std::string> out;
    for (const auto& a : list) {
      const PredicateDecl* decl = domain.find_predicate(a.predicate);
      if (decl == nullptr) throw ModelError(std::string(where) + " literal over undeclared predicate '" + a.predicate + "'");
      if (decl->params.size() != a.args.size())
        throw ModelError(std::string(where) + " literal '" + a.predicate + "' has wrong arity");
      for (const auto& arg : a.args)
        if (!object_type.contains(arg)) throw ModelError(std::string(where) + " literal uses unknown object '" + arg + "'");
      std::string n = atom_name(a.predicate, a.args);
      if (!universe.contains(n)) throw ModelError(std::string(where) + " literal " + paren(n) + " is ill-typed");
      out.push_back(std::move(n));
    }
    return out;
  };
  const auto init_names = lower_literals(init, "init");
  const auto goal_names = lower_literals(goal, "goal");
  return PlanningTask(std::move(atoms), std::move(actions), init_names, goal_names);
}

PlanningTask ground(const DomainModel& domain, const ProblemModel& problem) {
  if (!problem.domain.empty() && problem.domain != domain.name)
    throw ModelError("problem '" + problem.name + "' targets domain '" + problem.domain + "', not '" + domain.name + "'");
  return ground(domain, problem.objects, problem.init, problem.goal);
}

PlanningTask load_task(const std::string& domain_path, const std::string& problem_path) {
  return ground(parse_domain(read_file(domain_path)), parse_problem(read_file(problem_path)));
}

}  // namespace explane::model
