#include "explane/model/pddl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "explane/error.hpp"

namespace explane::model {

namespace {

struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  std::size_t line = 0;
  std::size_t column = 0;
};

[[noreturn]] void fail(const std::string& what, const SExpr& at) {
  throw ParseError(what, at.line, at.column);
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  SExpr read_document() {
    skip_blank();
    if (pos_ >= text_.size()) throw ParseError("empty input", line_, column_);
    SExpr root = read();
    skip_blank();
    if (pos_ < text_.size()) throw ParseError("trailing text after definition", line_, column_);
    return root;
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_blank() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  SExpr read() {
    skip_blank();
    SExpr node;
    node.line = line_;
    node.column = column_;
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", line_, column_);
    if (text_[pos_] == ')') throw ParseError("unexpected ')'", line_, column_);
    if (text_[pos_] == '(') {
      node.is_list = true;
      advance();
      while (true) {
        skip_blank();
        if (pos_ >= text_.size()) throw ParseError("unterminated list", node.line, node.column);
        if (text_[pos_] == ')') {
          advance();
          return node;
        }
        node.items.push_back(read());
      }
    }
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '(' || c == ')' || c == ';' || std::isspace(static_cast<unsigned char>(c))) break;
      node.atom.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      advance();
    }
    return node;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

bool is_symbol(const SExpr& e) { return !e.is_list && !e.atom.empty(); }

const std::string& symbol(const SExpr& e, const char* what) {
  if (!is_symbol(e)) fail(std::string("expected ") + what, e);
  return e.atom;
}

bool is_variable(const std::string& s) { return !s.empty() && s.front() == '?'; }

void expect_head(const SExpr& e, const char* head) {
  if (!e.is_list || e.items.empty() || !is_symbol(e.items[0]) || e.items[0].atom != head)
    fail(std::string("expected (") + head + " ...)", e);
}

// `a b - t c` -> [(a,t), (b,t), (c,object)]
std::vector<TypedName> typed_list(const SExpr& list, std::size_t first) {
  std::vector<TypedName> out;
  std::size_t pending = 0;
  for (std::size_t i = first; i < list.items.size(); ++i) {
    const SExpr& item = list.items[i];
    const std::string& tok = symbol(item, "name");
    if (tok == "-") {
      if (i + 1 >= list.items.size()) fail("missing type after '-'", item);
      const std::string& type = symbol(list.items[++i], "type name");
      if (pending == 0) fail("type without names", item);
      for (std::size_t k = out.size() - pending; k < out.size(); ++k) out[k].type = type;
      pending = 0;
      continue;
    }
    // Tolerate the glued form `-type`.
    if (tok.size() > 1 && tok.front() == '-' && pending > 0) {
      for (std::size_t k = out.size() - pending; k < out.size(); ++k) out[k].type = tok.substr(1);
      pending = 0;
      continue;
    }
    out.push_back({tok, "object"});
    ++pending;
  }
  return out;
}

AtomTemplate atom_of(const SExpr& e) {
  if (!e.is_list || e.items.empty()) fail("expected atom", e);
  AtomTemplate a;
  a.predicate = symbol(e.items[0], "predicate name");
  if (a.predicate == "and" || a.predicate == "not") fail("expected atom, found " + a.predicate, e);
  for (std::size_t i = 1; i < e.items.size(); ++i) a.args.push_back(symbol(e.items[i], "argument"));
  return a;
}

// Flattens (and ...) nests. Negated literals are routed to `negated` when given,
// otherwise rejected as negative preconditions.
void collect_literals(const SExpr& e, std::vector<AtomTemplate>& positive,
                      std::vector<AtomTemplate>* negated, const char* context) {
  if (!e.is_list) fail(std::string("expected formula in ") + context, e);
  if (e.items.empty()) return;
  const SExpr& head = e.items[0];
  if (is_symbol(head) && head.atom == "and") {
    for (std::size_t i = 1; i < e.items.size(); ++i) collect_literals(e.items[i], positive, negated, context);
    return;
  }
  if (is_symbol(head) && head.atom == "not") {
    if (negated == nullptr) fail(std::string("negative literal not supported in ") + context, e);
    if (e.items.size() != 2) fail("malformed (not ...)", e);
    negated->push_back(atom_of(e.items[1]));
    return;
  }
  if (is_symbol(head) && (head.atom == "or" || head.atom == "imply" || head.atom == "forall" ||
                          head.atom == "exists" || head.atom == "when")) {
    fail("unsupported connective '" + head.atom + "' in " + context, e);
  }
  positive.push_back(atom_of(e));
}

void sort_unique(std::vector<AtomTemplate>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

double parse_number(const SExpr& e) {
  const std::string& s = symbol(e, "number");
  double value = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end) fail("invalid number '" + s + "'", e);
  return value;
}

void check_type(const DomainModel& d, const std::string& type, const SExpr& at) {
  if (!d.has_type(type)) fail("unknown type '" + type + "'", at);
}

void check_atom(const DomainModel& d, const AtomTemplate& a, const std::set<std::string>& vars,
                const SExpr& at) {
  const PredicateDecl* decl = d.find_predicate(a.predicate);
  if (decl == nullptr) fail("undeclared predicate '" + a.predicate + "'", at);
  if (decl->params.size() != a.args.size())
    fail("predicate '" + a.predicate + "' expects " + std::to_string(decl->params.size()) + " arguments", at);
  for (const auto& arg : a.args) {
    if (!is_variable(arg)) fail("constant '" + arg + "' in schema; only parameters are supported", at);
    if (!vars.contains(arg)) fail("unbound variable '" + arg + "'", at);
  }
}

ActionSchema parse_action(const DomainModel& d, const SExpr& e) {
  ActionSchema act;
  if (e.items.size() < 2) fail("action without name", e);
  act.name = symbol(e.items[1], "action name");
  std::vector<AtomTemplate> eff_neg;
  for (std::size_t i = 2; i < e.items.size(); ++i) {
    const SExpr& key = e.items[i];
    const std::string& k = symbol(key, "action keyword");
    if (i + 1 >= e.items.size()) fail("missing value for " + k, key);
    const SExpr& value = e.items[++i];
    if (k == ":parameters") {
      if (!value.is_list) fail("expected parameter list", value);
      act.params = typed_list(value, 0);
      for (const auto& p : act.params) {
        if (!is_variable(p.name)) fail("parameter '" + p.name + "' must start with '?'", value);
        check_type(d, p.type, value);
      }
    } else if (k == ":precondition" || k == ":pre") {
      collect_literals(value, act.pre, nullptr, "precondition");
    } else if (k == ":effect") {
      collect_literals(value, act.add, &eff_neg, "effect");
    } else if (k == ":eff+") {
      collect_literals(value, act.add, nullptr, "add effect");
    } else if (k == ":eff-" || k == ":eff\xe2\x88\x92") {
      // Both `(and p q)` and `(and (not p) (not q))` mean "delete p, q" here.
      std::vector<AtomTemplate> plain;
      collect_literals(value, plain, &eff_neg, "delete effect");
      eff_neg.insert(eff_neg.end(), plain.begin(), plain.end());
    } else if (k == ":cost") {
      act.cost = parse_number(value);
      if (act.cost < 0) fail("negative action cost", value);
    } else {
      fail("unknown action keyword '" + k + "'", key);
    }
  }
  act.del = std::move(eff_neg);
  sort_unique(act.pre);
  sort_unique(act.add);
  sort_unique(act.del);

  std::set<std::string> vars;
  for (const auto& p : act.params) {
    if (!vars.insert(p.name).second) fail("duplicate parameter '" + p.name + "'", e);
  }
  for (const auto* list : {&act.pre, &act.add, &act.del})
    for (const auto& a : *list) check_atom(d, a, vars, e);
  for (const auto& a : act.add) {
    if (std::binary_search(act.del.begin(), act.del.end(), a))
      fail("atom (" + a.predicate + ") is both added and deleted by '" + act.name + "'", e);
  }
  return act;
}

void render_atom(std::ostream& os, const AtomTemplate& a) {
  os << '(' << a.predicate;
  for (const auto& arg : a.args) os << ' ' << arg;
  os << ')';
}

void render_typed(std::ostream& os, const std::vector<TypedName>& names) {
  bool first = true;
  for (const auto& n : names) {
    if (!first) os << ' ';
    first = false;
    os << n.name << " - " << n.type;
  }
}

void render_conjunction(std::ostream& os, const std::vector<AtomTemplate>& pos,
                        const std::vector<AtomTemplate>& neg) {
  os << "(and";
  for (const auto& a : pos) {
    os << ' ';
    render_atom(os, a);
  }
  for (const auto& a : neg) {
    os << " (not ";
    render_atom(os, a);
    os << ')';
  }
  os << ')';
}

}  // namespace

const PredicateDecl* DomainModel::find_predicate(std::string_view n) const {
  for (const auto& p : predicates)
    if (p.name == n) return &p;
  return nullptr;
}

bool DomainModel::has_type(const std::string& type) const {
  return type == "object" || types.contains(type);
}

bool DomainModel::is_subtype(const std::string& type, const std::string& ancestor) const {
  std::string cur = type;
  for (std::size_t guard = 0; guard <= types.size() + 1; ++guard) {
    if (cur == ancestor) return true;
    if (cur == "object") return false;
    auto it = types.find(cur);
    if (it == types.end()) return false;
    cur = it->second;
  }
  return false;
}

DomainModel parse_domain(std::string_view text) {
  const SExpr root = Reader(text).read_document();
  expect_head(root, "define");
  if (root.items.size() < 2) fail("missing (domain <name>)", root);
  const SExpr& header = root.items[1];
  expect_head(header, "domain");
  if (header.items.size() != 2) fail("expected (domain <name>)", header);

  DomainModel d;
  d.name = symbol(header.items[1], "domain name");
  for (std::size_t i = 2; i < root.items.size(); ++i) {
    const SExpr& sec = root.items[i];
    if (!sec.is_list || sec.items.empty()) fail("expected section", sec);
    const std::string& key = symbol(sec.items[0], "section keyword");
    if (key == ":requirements") continue;
    if (key == ":types") {
      for (const auto& t : typed_list(sec, 1)) {
        if (t.name == "object") continue;
        d.types[t.name] = t.type;
      }
      // Parents that are never declared themselves hang off the root.
      std::vector<std::string> parents;
      for (const auto& [name, parent] : d.types) parents.push_back(parent);
      for (const auto& p : parents)
        if (p != "object" && !d.types.contains(p)) d.types[p] = "object";
    } else if (key == ":predicates") {
      for (std::size_t k = 1; k < sec.items.size(); ++k) {
        const SExpr& pe = sec.items[k];
        if (!pe.is_list || pe.items.empty()) fail("expected predicate declaration", pe);
        PredicateDecl decl;
        decl.name = symbol(pe.items[0], "predicate name");
        decl.params = typed_list(pe, 1);
        for (const auto& p : decl.params) check_type(d, p.type, pe);
        if (d.find_predicate(decl.name) != nullptr) fail("duplicate predicate '" + decl.name + "'", pe);
        d.predicates.push_back(std::move(decl));
      }
    } else if (key == ":action") {
      ActionSchema act = parse_action(d, sec);
      for (const auto& other : d.actions)
        if (other.name == act.name) fail("duplicate action '" + act.name + "'", sec);
      d.actions.push_back(std::move(act));
    } else {
      fail("unsupported section '" + key + "'", sec);
    }
  }
  std::sort(d.predicates.begin(), d.predicates.end(),
            [](const PredicateDecl& a, const PredicateDecl& b) { return a.name < b.name; });
  std::sort(d.actions.begin(), d.actions.end(),
            [](const ActionSchema& a, const ActionSchema& b) { return a.name < b.name; });
  return d;
}

ProblemModel parse_problem(std::string_view text) {
  const SExpr root = Reader(text).read_document();
  expect_head(root, "define");
  if (root.items.size() < 2) fail("missing (problem <name>)", root);
  const SExpr& header = root.items[1];
  expect_head(header, "problem");
  if (header.items.size() != 2) fail("expected (problem <name>)", header);

  ProblemModel p;
  p.name = symbol(header.items[1], "problem name");
  for (std::size_t i = 2; i < root.items.size(); ++i) {
    const SExpr& sec = root.items[i];
    if (!sec.is_list || sec.items.empty()) fail("expected section", sec);
    const std::string& key = symbol(sec.items[0], "section keyword");
    if (key == ":domain") {
      if (sec.items.size() != 2) fail("expected (:domain <name>)", sec);
      p.domain = symbol(sec.items[1], "domain name");
    } else if (key == ":objects") {
      p.objects = typed_list(sec, 1);
    } else if (key == ":init") {
      for (std::size_t k = 1; k < sec.items.size(); ++k) p.init.push_back(atom_of(sec.items[k]));
    } else if (key == ":goal") {
      if (sec.items.size() != 2) fail("expected a single goal formula", sec);
      collect_literals(sec.items[1], p.goal, nullptr, "goal");
    } else if (key == ":requirements") {
      continue;
    } else {
      fail("unsupported section '" + key + "'", sec);
    }
  }
  sort_unique(p.init);
  sort_unique(p.goal);
  std::sort(p.objects.begin(), p.objects.end());
  return p;
}

std::string to_pddl(const DomainModel& d) {
  std::ostringstream os;
  os.precision(17);
  os << "(define (domain " << d.name << ")\n";
  if (!d.types.empty()) {
    os << "  (:types";
    for (const auto& [name, parent] : d.types) os << ' ' << name << " - " << parent;
    os << ")\n";
  }
  os << "  (:predicates";
  for (const auto& p : d.predicates) {
    os << "\n    (" << p.name;
    if (!p.params.empty()) {
      os << ' ';
      render_typed(os, p.params);
    }
    os << ')';
  }
  os << ")\n";
  for (const auto& a : d.actions) {
    os << "  (:action " << a.name << "\n    :parameters (";
    render_typed(os, a.params);
    os << ")\n    :precondition ";
    render_conjunction(os, a.pre, {});
    os << "\n    :effect ";
    render_conjunction(os, a.add, a.del);
    if (a.cost != 1.0) os << "\n    :cost " << a.cost;
    os << ")\n";
  }
  os << ")\n";
  return os.str();
}

std::string to_pddl(const ProblemModel& p) {
  std::ostringstream os;
  os << "(define (problem " << p.name << ")\n  (:domain " << p.domain << ")\n  (:objects ";
  render_typed(os, p.objects);
  os << ")\n  (:init";
  for (const auto& a : p.init) {
    os << "\n    ";
    render_atom(os, a);
  }
  os << ")\n  (:goal ";
  render_conjunction(os, p.goal, {});
  os << "))\n";
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace explane::model
