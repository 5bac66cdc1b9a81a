#include "fop/smt_model.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include "fop/error.hpp"
#include "fop/smtlib.hpp"

namespace fop {

namespace {

constexpr int kMaxDepth = 256;

bool truthy(const std::string& v) { return v == "true"; }
std::string boolean(bool b) { return b ? "true" : "false"; }

void collect_declarations(const SExpr& e, std::map<std::string, std::vector<std::string>>& universes,
                          std::vector<const SExpr*>& defs) {
  if (!e.is_list()) return;
  if (e.is_call("declare-fun") && e.size() == 4 && e[1].is_atom() && e[2].is_list() && e[2].size() == 0 &&
      e[3].is_atom()) {
    auto& u = universes[e[3].atom];
    if (std::find(u.begin(), u.end(), e[1].atom) == u.end()) u.push_back(e[1].atom);
    return;
  }
  if (e.is_call("define-fun")) {
    defs.push_back(&e);
    return;
  }
  if (e.is_call("model") || (!e.items.empty() && e[0].is_list())) {
    for (const auto& c : e.items) collect_declarations(c, universes, defs);
    return;
  }
  if (e.items.empty()) return;
  if (!e[0].is_atom()) return;
  // Other top-level forms (forall cardinality constraints, sat) are ignored.
}

}  // namespace

ModelStructure ModelStructure::parse(std::string_view model_text, const Signature& sig) {
  std::vector<SExpr> forms = parse_sexprs(model_text);
  ModelStructure m;
  std::vector<const SExpr*> defs;
  bool saw_model = false;
  for (const auto& f : forms) {
    if (f.is_atom()) continue;  // sat/unsat/unknown lines
    if (f.is_call("error")) throw ParseError("solver error in model: " + to_string(f), f.line, f.column);
    saw_model = true;
    collect_declarations(f, m.universes_, defs);
  }
  if (!saw_model) throw ParseError("no model in solver output", 1, 1);
  // Element constants that only occur inside bodies, e.g. Proc!val!3.
  static const std::regex elem(R"(([A-Za-z_][A-Za-z0-9_]*)!val!([0-9]+))");
  std::string text(model_text);
  std::map<std::string, std::set<int>> seen;
  for (std::sregex_iterator it(text.begin(), text.end(), elem), end; it != end; ++it)
    seen[(*it)[1].str()].insert(std::stoi((*it)[2].str()));
  for (const auto& [sort, ids] : seen) {
    auto& u = m.universes_[sort];
    for (int i : ids) {
      std::string name = sort + "!val!" + std::to_string(i);
      if (std::find(u.begin(), u.end(), name) == u.end()) u.push_back(name);
    }
  }
  for (auto& [sort, u] : m.universes_) {
    std::sort(u.begin(), u.end(), [](const std::string& a, const std::string& b) {
      return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
  }
  for (const SExpr* d : defs) {
    const SExpr& e = *d;
    if (e.size() != 5 || !e[1].is_atom() || !e[2].is_list() || !e[3].is_atom())
      throw ParseError("malformed define-fun", e.line, e.column);
    Definition def;
    for (const auto& prm : e[2].items) {
      if (!prm.is_list() || prm.size() != 2 || !prm[0].is_atom() || !prm[1].is_atom())
        throw ParseError("malformed define-fun parameter", prm.line, prm.column);
      def.params.push_back(prm[0].atom);
      def.param_sorts.push_back(prm[1].atom);
    }
    def.result_sort = e[3].atom;
    def.body = e[4];
    m.defs_[e[1].atom] = std::move(def);
  }
  // Sorts the model leaves unpopulated still have one element.
  for (const auto& s : sig.sorts()) {
    if (s.is_bool()) continue;
    auto& u = m.universes_[s.name()];
    if (u.empty()) u.push_back(s.name() + "!val!0");
  }
  return m;
}

const std::vector<std::string>& ModelStructure::universe(const Sort& s) const {
  static const std::vector<std::string> kBool{"false", "true"};
  if (s.is_bool()) return kBool;
  auto it = universes_.find(s.name());
  if (it == universes_.end()) throw Error("model has no universe for sort " + s.name());
  return it->second;
}

int ModelStructure::domain_size(const Sort& s) const { return static_cast<int>(universe(s).size()); }

std::string ModelStructure::element(const std::string& sort, int i) const {
  if (sort == kBoolSortName) return boolean(i != 0);
  return universes_.at(sort).at(static_cast<std::size_t>(i));
}

int ModelStructure::index_of(const std::string& sort, const std::string& value) const {
  if (sort == kBoolSortName) return truthy(value) ? 1 : 0;
  const auto& u = universes_.at(sort);
  auto it = std::find(u.begin(), u.end(), value);
  if (it == u.end()) throw Error("value " + value + " is not an element of " + sort);
  return static_cast<int>(it - u.begin());
}

std::string ModelStructure::call(const std::string& name, const std::vector<std::string>& args, int depth) const {
  auto it = defs_.find(name);
  if (it == defs_.end()) throw Error("model does not define " + name);
  const Definition& d = it->second;
  if (d.params.size() != args.size()) throw Error("arity mismatch calling " + name);
  std::map<std::string, std::string> env;
  for (std::size_t i = 0; i < args.size(); ++i) env[d.params[i]] = args[i];
  return eval(d.body, env, depth + 1);
}

std::string ModelStructure::eval(const SExpr& e, std::map<std::string, std::string>& env, int depth) const {
  if (depth > kMaxDepth) throw Error("model evaluation too deep");
  if (e.is_atom()) {
    if (auto it = env.find(e.atom); it != env.end()) return it->second;
    if (e.atom == "true" || e.atom == "false") return e.atom;
    if (auto it = defs_.find(e.atom); it != defs_.end() && it->second.params.empty()) return call(e.atom, {}, depth);
    return e.atom;  // an element constant
  }
  if (e.items.empty() || !e[0].is_atom()) throw Error("cannot evaluate " + to_string(e));
  const std::string& head = e[0].atom;
  auto arg = [&](std::size_t i) { return eval(e[i], env, depth + 1); };
  if (head == "ite") return truthy(arg(1)) ? arg(2) : arg(3);
  if (head == "not") return boolean(!truthy(arg(1)));
  if (head == "and") {
    for (std::size_t i = 1; i < e.size(); ++i)
      if (!truthy(arg(i))) return "false";
    return "true";
  }
  if (head == "or") {
    for (std::size_t i = 1; i < e.size(); ++i)
      if (truthy(arg(i))) return "true";
    return "false";
  }
  if (head == "=>") return boolean(!truthy(arg(1)) || truthy(arg(2)));
  if (head == "=") {
    std::string first = arg(1);
    for (std::size_t i = 2; i < e.size(); ++i)
      if (arg(i) != first) return "false";
    return "true";
  }
  if (head == "distinct") {
    std::set<std::string> vals;
    for (std::size_t i = 1; i < e.size(); ++i)
      if (!vals.insert(arg(i)).second) return "false";
    return "true";
  }
  if (head == "let") {
    if (e.size() != 3 || !e[1].is_list()) throw Error("malformed let");
    std::vector<std::pair<std::string, std::string>> binds;
    for (const auto& b : e[1].items) {
      if (!b.is_list() || b.size() != 2 || !b[0].is_atom()) throw Error("malformed let binding");
      binds.emplace_back(b[0].atom, eval(b[1], env, depth + 1));
    }
    auto saved = env;
    for (auto& [k, v] : binds) env[k] = v;
    std::string r = eval(e[2], env, depth + 1);
    env = std::move(saved);
    return r;
  }
  std::vector<std::string> args;
  for (std::size_t i = 1; i < e.size(); ++i) args.push_back(arg(i));
  return call(head, args, depth);
}

int ModelStructure::apply(const Symbol& f, std::span<const int> args) const {
  std::vector<std::string> vals;
  for (std::size_t i = 0; i < args.size(); ++i) vals.push_back(element(f.arg_sorts()[i].name(), args[i]));
  const std::string& name = f.full_name();
  if (!defs_.contains(name)) return 0;  // unconstrained by the solver: any value works
  return index_of(f.result_sort().name(), call(name, vals, 0));
}

std::vector<std::string> ModelStructure::defined_symbols() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : defs_) out.push_back(k);
  return out;
}

SExpr ModelStructure::to_sexpr(const Signature& sig) const {
  std::vector<SExpr> items{SExpr::make_atom("model")};
  for (const auto& s : sig.sorts()) {
    std::vector<SExpr> u{SExpr::make_atom("universe"), SExpr::make_atom(s.name())};
    for (const auto& el : universe(s)) u.push_back(SExpr::make_atom(el));
    items.push_back(SExpr::make_list(std::move(u)));
  }
  std::vector<Symbol> syms = sig.symbols();
  auto primed = sig.primed_symbols();
  syms.insert(syms.end(), primed.begin(), primed.end());
  for (const auto& f : syms) {
    std::vector<SExpr> table{SExpr::make_atom("interp"), SExpr::make_atom(f.full_name())};
    std::size_t total = 1;
    for (const auto& a : f.arg_sorts()) total *= static_cast<std::size_t>(domain_size(a));
    if (total > 4096) continue;
    std::vector<int> tuple(f.arity(), 0);
    for (std::size_t n = 0; n < total; ++n) {
      std::size_t rest = n;
      for (std::size_t i = f.arity(); i-- > 0;) {
        auto d = static_cast<std::size_t>(domain_size(f.arg_sorts()[i]));
        tuple[i] = static_cast<int>(rest % d);
        rest /= d;
      }
      std::vector<SExpr> row;
      for (std::size_t i = 0; i < f.arity(); ++i) row.push_back(SExpr::make_atom(element(f.arg_sorts()[i].name(), tuple[i])));
      int v = apply(f, tuple);
      row.push_back(SExpr::make_atom(element(f.result_sort().name(), v)));
      table.push_back(SExpr::make_list(std::move(row)));
    }
    items.push_back(SExpr::make_list(std::move(table)));
  }
  return SExpr::make_list(std::move(items));
}

}  // namespace fop
