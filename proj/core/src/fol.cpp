#include "fop/fol.hpp"

#include <algorithm>
#include <mutex>
#include <unordered_map>

#include "fop/error.hpp"

namespace fop {

std::uint32_t intern(std::string_view name) {
  static std::mutex mu;
  static std::unordered_map<std::string, std::uint32_t> table;
  std::lock_guard lock(mu);
  auto [it, inserted] = table.try_emplace(std::string(name), static_cast<std::uint32_t>(table.size()));
  return it->second;
}

std::string_view to_string(Section s) {
  switch (s) {
    case Section::kTopoEdge: return "topo-edge";
    case Section::kTopoClass: return "topo-class";
    case Section::kState: return "state";
    case Section::kBackground: return "background";
  }
  return "?";
}

// ---- Symbol ----------------------------------------------------------------

struct Symbol::Data {
  std::string name;
  std::string full_name;
  SymbolKind kind;
  std::vector<Sort> args;
  Sort result;
  Section section;
  bool primed;
  std::uint32_t id;
};

Symbol Symbol::make(std::string name, SymbolKind kind, std::vector<Sort> arg_sorts, Sort result,
                    Section section) {
  Symbol s;
  auto d = std::make_shared<Data>();
  d->full_name = name;
  d->name = std::move(name);
  d->kind = kind;
  d->args = std::move(arg_sorts);
  d->result = kind == SymbolKind::kPredicate ? Sort::boolean() : std::move(result);
  d->section = section;
  d->primed = false;
  d->id = intern(d->full_name);
  s.id_ = d->id;
  s.d_ = std::move(d);
  return s;
}

Symbol Symbol::function(std::string name, std::vector<Sort> args, Sort result, Section section) {
  return make(std::move(name), SymbolKind::kFunction, std::move(args), std::move(result), section);
}

Symbol Symbol::predicate(std::string name, std::vector<Sort> args, Section section) {
  return make(std::move(name), SymbolKind::kPredicate, std::move(args), Sort::boolean(), section);
}

Symbol Symbol::constant(std::string name, Sort result, Section section) {
  return make(std::move(name), SymbolKind::kConstant, {}, std::move(result), section);
}

Symbol Symbol::primed_copy() const {
  Symbol s;
  auto d = std::make_shared<Data>(*d_);
  d->primed = true;
  d->full_name = d->name + kPrimeMarker;
  d->id = intern(d->full_name);
  s.id_ = d->id;
  s.d_ = std::move(d);
  return s;
}

const std::string& Symbol::name() const { return d_->name; }
const std::string& Symbol::full_name() const { return d_->full_name; }
bool Symbol::primed() const { return d_->primed; }
SymbolKind Symbol::kind() const { return d_->kind; }
Section Symbol::section() const { return d_->section; }
const std::vector<Sort>& Symbol::arg_sorts() const { return d_->args; }
const Sort& Symbol::result_sort() const { return d_->result; }

bool Symbol::same_declaration(const Symbol& o) const {
  return full_name() == o.full_name() && kind() == o.kind() && arg_sorts() == o.arg_sorts() &&
         result_sort() == o.result_sort() && section() == o.section();
}

void check_section_rule(const Symbol& s) {
  auto fail = [&](const std::string& why) {
    throw SectionError(std::string(to_string(s.section())) + " symbol '" + s.full_name() + "' " + why);
  };
  const auto& args = s.arg_sorts();
  if (s.kind() == SymbolKind::kConstant && !args.empty()) fail("is a constant with arguments");
  if (s.kind() == SymbolKind::kFunction && args.empty()) fail("is a function without arguments");
  switch (s.section()) {
    case Section::kTopoEdge:
      if (s.kind() != SymbolKind::kFunction || args.size() != 1 || !args[0].is_proc() ||
          !s.result_sort().is_proc())
        fail("must be a unary Proc -> Proc function");
      break;
    case Section::kTopoClass:
      if (s.kind() != SymbolKind::kPredicate || args.empty() ||
          !std::all_of(args.begin(), args.end(), [](const Sort& x) { return x.is_proc(); }))
        fail("must be a predicate over Proc");
      break;
    case Section::kState:
      if (args.empty() || !args[0].is_proc()) fail("must take Proc as its first argument");
      if (std::any_of(args.begin() + 1, args.end(), [](const Sort& x) { return x.is_proc(); }))
        fail("may take Proc only as its first argument");
      if (s.kind() == SymbolKind::kFunction && s.result_sort().is_proc()) fail("may not return Proc");
      break;
    case Section::kBackground:
      if (std::any_of(args.begin(), args.end(), [](const Sort& x) { return x.is_proc(); }))
        fail("may not take Proc arguments");
      if (s.kind() != SymbolKind::kPredicate && s.result_sort().is_proc()) fail("may not return Proc");
      break;
  }
}

// ---- Term ------------------------------------------------------------------

struct Term::Node {
  Kind kind;
  std::string name;
  std::uint32_t var_id = 0;
  Sort sort;
  Symbol sym;
  std::vector<Term> args;
  int proc_depth = 0;
};

Term Term::var(std::string name, Sort sort) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kVar;
  n->var_id = intern(name);
  n->name = std::move(name);
  n->sort = std::move(sort);
  Term t;
  t.d_ = std::move(n);
  return t;
}

Term Term::app(Symbol f, std::vector<Term> args) {
  if (f.is_predicate()) throw SortError("predicate '" + f.full_name() + "' used as a term", "");
  if (args.size() != f.arity())
    throw SortError("'" + f.full_name() + "' expects " + std::to_string(f.arity()) + " arguments, got " +
                        std::to_string(args.size()),
                    "");
  auto n = std::make_shared<Node>();
  n->kind = Kind::kApp;
  n->sort = f.result_sort();
  int deepest = 0;
  for (const auto& a : args) deepest = std::max(deepest, a.proc_depth());
  n->proc_depth = deepest + (n->sort.is_proc() && !args.empty() ? 1 : 0);
  n->sym = std::move(f);
  n->args = std::move(args);
  Term t;
  t.d_ = std::move(n);
  return t;
}

Term::Kind Term::kind() const { return d_->kind; }
const std::string& Term::var_name() const { return d_->name; }
std::uint32_t Term::var_id() const { return d_->var_id; }
const Sort& Term::sort() const { return d_->sort; }
const Symbol& Term::symbol() const { return d_->sym; }
const std::vector<Term>& Term::args() const { return d_->args; }
int Term::proc_depth() const { return d_->proc_depth; }

bool operator==(const Term& a, const Term& b) {
  if (a.d_ == b.d_) return true;
  if (!a.d_ || !b.d_) return false;
  if (a.kind() != b.kind()) return false;
  if (a.is_var()) return a.var_id() == b.var_id() && a.sort() == b.sort();
  return a.symbol() == b.symbol() && a.args() == b.args();
}

// ---- Formula ---------------------------------------------------------------

struct Formula::Node {
  Kind kind;
  Symbol pred;
  std::vector<Term> terms;
  std::vector<Formula> kids;
  std::vector<Var> bound;
};

Formula Formula::top() {
  static const Formula t = [] {
    Formula f;
    f.d_ = std::make_shared<Node>(Node{Kind::kTrue, {}, {}, {}, {}});
    return f;
  }();
  return t;
}

Formula Formula::bottom() {
  static const Formula t = [] {
    Formula f;
    f.d_ = std::make_shared<Node>(Node{Kind::kFalse, {}, {}, {}, {}});
    return f;
  }();
  return t;
}

Formula Formula::atom(Symbol pred, std::vector<Term> args) {
  if (!pred.is_predicate()) throw SortError("'" + pred.full_name() + "' is not a predicate", "");
  if (args.size() != pred.arity())
    throw SortError("'" + pred.full_name() + "' expects " + std::to_string(pred.arity()) + " arguments", "");
  Formula f;
  f.d_ = std::make_shared<Node>(Node{Kind::kAtom, std::move(pred), std::move(args), {}, {}});
  return f;
}

Formula Formula::eq(Term lhs, Term rhs) {
  Formula f;
  f.d_ = std::make_shared<Node>(Node{Kind::kEq, {}, {std::move(lhs), std::move(rhs)}, {}, {}});
  return f;
}

Formula Formula::negation(Formula g) {
  Formula f;
  f.d_ = std::make_shared<Node>(Node{Kind::kNot, {}, {}, {std::move(g)}, {}});
  return f;
}

Formula Formula::conjunction(std::vector<Formula> kids) {
  Formula f;
  f.d_ = std::make_shared<Node>(Node{Kind::kAnd, {}, {}, std::move(kids), {}});
  return f;
}

Formula Formula::disjunction(std::vector<Formula> kids) {
  Formula f;
  f.d_ = std::make_shared<Node>(Node{Kind::kOr, {}, {}, std::move(kids), {}});
  return f;
}

Formula Formula::implication(Formula lhs, Formula rhs) {
  Formula f;
  f.d_ = std::make_shared<Node>(Node{Kind::kImplies, {}, {}, {std::move(lhs), std::move(rhs)}, {}});
  return f;
}

Formula Formula::equivalence(Formula lhs, Formula rhs) {
  Formula f;
  f.d_ = std::make_shared<Node>(Node{Kind::kIff, {}, {}, {std::move(lhs), std::move(rhs)}, {}});
  return f;
}

Formula Formula::forall(std::vector<Var> bound, Formula body) {
  Formula f;
  f.d_ = std::make_shared<Node>(Node{Kind::kForall, {}, {}, {std::move(body)}, std::move(bound)});
  return f;
}

Formula Formula::exists(std::vector<Var> bound, Formula body) {
  Formula f;
  f.d_ = std::make_shared<Node>(Node{Kind::kExists, {}, {}, {std::move(body)}, std::move(bound)});
  return f;
}

Formula::Kind Formula::kind() const { return d_->kind; }
const Symbol& Formula::predicate() const { return d_->pred; }
const std::vector<Term>& Formula::terms() const { return d_->terms; }
const std::vector<Formula>& Formula::children() const { return d_->kids; }
const std::vector<Var>& Formula::bound() const { return d_->bound; }
const Formula& Formula::body() const { return d_->kids.front(); }

bool Formula::is_literal() const {
  switch (kind()) {
    case Kind::kAtom:
    case Kind::kEq: return true;
    case Kind::kNot: return body().is(Kind::kAtom) || body().is(Kind::kEq);
    default: return false;
  }
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.d_ == b.d_) return true;
  if (!a.d_ || !b.d_) return false;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Formula::Kind::kTrue:
    case Formula::Kind::kFalse: return true;
    case Formula::Kind::kAtom: return a.predicate() == b.predicate() && a.terms() == b.terms();
    case Formula::Kind::kEq: return a.terms() == b.terms();
    case Formula::Kind::kForall:
    case Formula::Kind::kExists: return a.bound() == b.bound() && a.body() == b.body();
    default: return a.children() == b.children();
  }
}

// ---- builders --------------------------------------------------------------

Formula conj(std::vector<Formula> kids) {
  std::vector<Formula> kept;
  kept.reserve(kids.size());
  for (auto& k : kids) {
    if (k.is(Formula::Kind::kTrue)) continue;
    if (k.is(Formula::Kind::kFalse)) return Formula::bottom();
    kept.push_back(std::move(k));
  }
  if (kept.empty()) return Formula::top();
  if (kept.size() == 1) return kept.front();
  return Formula::conjunction(std::move(kept));
}

Formula disj(std::vector<Formula> kids) {
  std::vector<Formula> kept;
  kept.reserve(kids.size());
  for (auto& k : kids) {
    if (k.is(Formula::Kind::kFalse)) continue;
    if (k.is(Formula::Kind::kTrue)) return Formula::top();
    kept.push_back(std::move(k));
  }
  if (kept.empty()) return Formula::bottom();
  if (kept.size() == 1) return kept.front();
  return Formula::disjunction(std::move(kept));
}

Formula neg(Formula f) {
  if (f.is(Formula::Kind::kTrue)) return Formula::bottom();
  if (f.is(Formula::Kind::kFalse)) return Formula::top();
  return Formula::negation(std::move(f));
}

Formula implies(Formula lhs, Formula rhs) {
  if (lhs.is(Formula::Kind::kTrue)) return rhs;
  if (lhs.is(Formula::Kind::kFalse) || rhs.is(Formula::Kind::kTrue)) return Formula::top();
  return Formula::implication(std::move(lhs), std::move(rhs));
}

Formula neq(Term a, Term b) { return Formula::negation(Formula::eq(std::move(a), std::move(b))); }

Formula distinct(const std::vector<Term>& ts) {
  std::vector<Formula> lits;
  for (std::size_t i = 0; i < ts.size(); ++i)
    for (std::size_t j = i + 1; j < ts.size(); ++j) lits.push_back(neq(ts[i], ts[j]));
  return conj(std::move(lits));
}

Formula forall(std::vector<Var> bound, Formula body) {
  if (bound.empty() || body.is(Formula::Kind::kTrue) || body.is(Formula::Kind::kFalse)) return body;
  return Formula::forall(std::move(bound), std::move(body));
}

Formula exists(std::vector<Var> bound, Formula body) {
  if (bound.empty() || body.is(Formula::Kind::kTrue) || body.is(Formula::Kind::kFalse)) return body;
  return Formula::exists(std::move(bound), std::move(body));
}

// ---- Signature -------------------------------------------------------------

Signature::Signature() { sorts_.push_back(Sort::proc()); }

void Signature::add_sort(const Sort& s) {
  if (s.is_bool()) throw SortError("Bool is reserved", "");
  if (!has_sort(s)) sorts_.push_back(s);
}

bool Signature::has_sort(const Sort& s) const {
  return s.is_bool() || std::find(sorts_.begin(), sorts_.end(), s) != sorts_.end();
}

const Symbol& Signature::declare(const Symbol& s) {
  if (s.primed()) throw SectionError("cannot declare primed symbol '" + s.full_name() + "'");
  if (!s.name().empty() && s.name().back() == kPrimeMarker)
    throw SectionError("symbol name '" + s.name() + "' ends with the prime marker");
  check_section_rule(s);
  for (const auto& a : s.arg_sorts())
    if (!has_sort(a) || a.is_bool())
      throw SortError("undeclared argument sort '" + a.name() + "' in '" + s.name() + "'", "");
  if (!has_sort(s.result_sort()))
    throw SortError("undeclared result sort '" + s.result_sort().name() + "' in '" + s.name() + "'", "");
  if (by_name_.contains(s.name())) throw SectionError("duplicate symbol '" + s.name() + "'");
  symbols_.push_back(s);
  by_name_.emplace(s.name(), s);
  if (s.section() == Section::kState || s.section() == Section::kBackground) {
    Symbol p = s.primed_copy();
    primed_.emplace(p.full_name(), p);
  }
  return symbols_.back();
}

const Symbol* Signature::find(std::string_view full_name) const {
  if (auto it = by_name_.find(full_name); it != by_name_.end()) return &it->second;
  if (auto it = primed_.find(full_name); it != primed_.end()) return &it->second;
  return nullptr;
}

const Symbol& Signature::get(std::string_view full_name) const {
  const Symbol* s = find(full_name);
  if (!s) throw SortError("undeclared symbol '" + std::string(full_name) + "'", "");
  return *s;
}

std::optional<Symbol> Signature::primed_of(const Symbol& base) const {
  if (auto it = primed_.find(base.name() + kPrimeMarker); it != primed_.end()) return it->second;
  return std::nullopt;
}

std::vector<Symbol> Signature::symbols_in(Section s) const {
  std::vector<Symbol> out;
  for (const auto& x : symbols_)
    if (x.section() == s) out.push_back(x);
  return out;
}

std::vector<Symbol> Signature::primed_symbols() const {
  std::vector<Symbol> out;
  for (const auto& x : symbols_)
    if (auto p = primed_of(x)) out.push_back(*p);
  return out;
}

// ---- well-sortedness -------------------------------------------------------

namespace {

std::string join_path(const std::string& path, const std::string& step) {
  return path.empty() ? step : path + "/" + step;
}

void check_symbol(const Symbol& s, const Signature& sig, const std::string& path) {
  check_section_rule(s);
  const Symbol* decl = sig.find(s.full_name());
  if (!decl || !decl->same_declaration(s))
    throw SortError("undeclared symbol '" + s.full_name() + "'", path);
}

void check_args(const Symbol& s, const std::vector<Term>& args, const Signature& sig,
                const std::string& path);

void check_term(const Term& t, const Signature& sig, const std::string& path) {
  if (t.is_var()) {
    if (!sig.has_sort(t.sort()) || t.sort().is_bool())
      throw SortError("variable '" + t.var_name() + "' has undeclared sort '" + t.sort().name() + "'", path);
    return;
  }
  const std::string here = join_path(path, t.symbol().full_name());
  check_symbol(t.symbol(), sig, here);
  check_args(t.symbol(), t.args(), sig, here);
}

void check_args(const Symbol& s, const std::vector<Term>& args, const Signature& sig,
                const std::string& path) {
  if (args.size() != s.arity())
    throw SortError("'" + s.full_name() + "' expects " + std::to_string(s.arity()) + " arguments", path);
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string child = path + "[" + std::to_string(i) + "]";
    check_term(args[i], sig, child);
    if (args[i].sort() != s.arg_sorts()[i])
      throw SortError("argument " + std::to_string(i) + " of '" + s.full_name() + "' has sort " +
                          args[i].sort().name() + ", expected " + s.arg_sorts()[i].name(),
                      child);
  }
}

void check_formula(const Formula& f, const Signature& sig, const std::string& path) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::kTrue:
    case K::kFalse: return;
    case K::kAtom: {
      const std::string here = join_path(path, f.predicate().full_name());
      check_symbol(f.predicate(), sig, here);
      check_args(f.predicate(), f.terms(), sig, here);
      return;
    }
    case K::kEq: {
      const std::string here = join_path(path, "=");
      check_term(f.terms()[0], sig, here + "[0]");
      check_term(f.terms()[1], sig, here + "[1]");
      if (f.terms()[0].sort() != f.terms()[1].sort())
        throw SortError("equality between sorts " + f.terms()[0].sort().name() + " and " +
                            f.terms()[1].sort().name(),
                        here);
      return;
    }
    case K::kForall:
    case K::kExists: {
      const std::string here = join_path(path, f.is(K::kForall) ? "forall" : "exists");
      for (const auto& v : f.bound())
        if (!sig.has_sort(v.sort) || v.sort.is_bool())
          throw SortError("bound variable '" + v.name + "' has undeclared sort '" + v.sort.name() + "'", here);
      check_formula(f.body(), sig, here);
      return;
    }
    default: {
      static const char* names[] = {"", "", "", "", "not", "and", "or", "=>", "iff"};
      const std::string op = names[static_cast<int>(f.kind())];
      for (std::size_t i = 0; i < f.children().size(); ++i)
        check_formula(f.children()[i], sig, join_path(path, op + "[" + std::to_string(i) + "]"));
      return;
    }
  }
}

}  // namespace

void check_well_sorted(const Term& t, const Signature& sig) { check_term(t, sig, ""); }
void check_well_sorted(const Formula& f, const Signature& sig) { check_formula(f, sig, ""); }

// ---- free variables / substitution ----------------------------------------

namespace {

void collect_free(const Term& t, std::set<Var>& out) {
  if (t.is_var()) {
    out.insert(t.as_var());
    return;
  }
  for (const auto& a : t.args()) collect_free(a, out);
}

bool binds_name(const std::vector<Var>& bound, const std::string& name) {
  return std::any_of(bound.begin(), bound.end(), [&](const Var& v) { return v.name == name; });
}

void collect_free(const Formula& f, std::set<Var>& out) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::kTrue:
    case K::kFalse: return;
    case K::kAtom:
    case K::kEq:
      for (const auto& t : f.terms()) collect_free(t, out);
      return;
    case K::kForall:
    case K::kExists: {
      std::set<Var> inner;
      collect_free(f.body(), inner);
      for (const auto& v : inner)
        if (!binds_name(f.bound(), v.name)) out.insert(v);
      return;
    }
    default:
      for (const auto& k : f.children()) collect_free(k, out);
  }
}

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
  for (int i = 1;; ++i) {
    std::string candidate = base + "_" + std::to_string(i);
    if (!taken.contains(candidate)) return candidate;
  }
}

void collect_names(const Formula& f, std::set<std::string>& out);

}  // namespace

std::set<Var> free_vars(const Term& t) {
  std::set<Var> out;
  collect_free(t, out);
  return out;
}

std::set<Var> free_vars(const Formula& f) {
  std::set<Var> out;
  collect_free(f, out);
  return out;
}

Term substitute(const Term& t, const Substitution& m) {
  if (m.empty()) return t;
  if (t.is_var()) {
    auto it = m.find(t.as_var());
    if (it == m.end()) return t;
    if (it->second.sort() != t.sort())
      throw SortError("replacement for '" + t.var_name() + "' has sort " + it->second.sort().name() +
                          ", expected " + t.sort().name(),
                      t.var_name());
    return it->second;
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  bool changed = false;
  for (const auto& a : t.args()) {
    args.push_back(substitute(a, m));
    changed = changed || !(args.back() == a);
  }
  return changed ? Term::app(t.symbol(), std::move(args)) : t;
}

Formula substitute(const Formula& f, const Substitution& m) {
  using K = Formula::Kind;
  if (m.empty()) return f;
  switch (f.kind()) {
    case K::kTrue:
    case K::kFalse: return f;
    case K::kAtom: {
      std::vector<Term> args;
      for (const auto& a : f.terms()) args.push_back(substitute(a, m));
      return Formula::atom(f.predicate(), std::move(args));
    }
    case K::kEq: return Formula::eq(substitute(f.terms()[0], m), substitute(f.terms()[1], m));
    case K::kForall:
    case K::kExists: {
      const std::set<Var> body_free = free_vars(f.body());
      Substitution inner;
      for (const auto& [v, t] : m)
        if (!binds_name(f.bound(), v.name) && body_free.contains(v)) inner.emplace(v, t);
      if (inner.empty()) return f;
      std::set<std::string> incoming;
      for (const auto& [v, t] : inner)
        for (const auto& u : free_vars(t)) incoming.insert(u.name);
      std::vector<Var> bound = f.bound();
      Formula body = f.body();
      Substitution renaming;
      std::set<std::string> taken = incoming;
      for (const auto& v : free_vars(f.body())) taken.insert(v.name);
      collect_names(f.body(), taken);
      for (const auto& v : bound) taken.insert(v.name);
      for (auto& v : bound) {
        if (!incoming.contains(v.name)) continue;
        std::string renamed = fresh_name(v.name, taken);
        taken.insert(renamed);
        renaming.emplace(v, Term::var(renamed, v.sort));
        v.name = renamed;
      }
      if (!renaming.empty()) body = substitute(body, renaming);
      body = substitute(body, inner);
      return f.is(K::kForall) ? Formula::forall(std::move(bound), std::move(body))
                              : Formula::exists(std::move(bound), std::move(body));
    }
    default: {
      std::vector<Formula> kids;
      for (const auto& k : f.children()) kids.push_back(substitute(k, m));
      switch (f.kind()) {
        case K::kNot: return Formula::negation(std::move(kids[0]));
        case K::kAnd: return Formula::conjunction(std::move(kids));
        case K::kOr: return Formula::disjunction(std::move(kids));
        case K::kImplies: return Formula::implication(std::move(kids[0]), std::move(kids[1]));
        default: return Formula::equivalence(std::move(kids[0]), std::move(kids[1]));
      }
    }
  }
}

namespace {

void collect_names(const Term& t, std::set<std::string>& out) {
  if (t.is_var()) {
    out.insert(t.var_name());
    return;
  }
  for (const auto& a : t.args()) collect_names(a, out);
}

void collect_names(const Formula& f, std::set<std::string>& out) {
  for (const auto& t : f.terms()) collect_names(t, out);
  for (const auto& v : f.bound()) out.insert(v.name);
  for (const auto& k : f.children()) collect_names(k, out);
}

}  // namespace

// ---- priming ---------------------------------------------------------------

Term prime(const Term& t, const std::set<std::string>& scope, const Signature& sig) {
  if (t.is_var()) return t;
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(prime(a, scope, sig));
  Symbol s = t.symbol();
  if (!s.primed() && scope.contains(s.name())) {
    auto p = sig.primed_of(s);
    if (!p) throw MissingPrimedCopy("no primed copy registered for '" + s.name() + "'");
    s = *p;
  }
  return Term::app(std::move(s), std::move(args));
}

Formula prime(const Formula& f, const std::set<std::string>& scope, const Signature& sig) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::kTrue:
    case K::kFalse: return f;
    case K::kAtom: {
      std::vector<Term> args;
      for (const auto& a : f.terms()) args.push_back(prime(a, scope, sig));
      Symbol s = f.predicate();
      if (!s.primed() && scope.contains(s.name())) {
        auto p = sig.primed_of(s);
        if (!p) throw MissingPrimedCopy("no primed copy registered for '" + s.name() + "'");
        s = *p;
      }
      return Formula::atom(std::move(s), std::move(args));
    }
    case K::kEq: return Formula::eq(prime(f.terms()[0], scope, sig), prime(f.terms()[1], scope, sig));
    case K::kForall: return Formula::forall(f.bound(), prime(f.body(), scope, sig));
    case K::kExists: return Formula::exists(f.bound(), prime(f.body(), scope, sig));
    default: {
      std::vector<Formula> kids;
      for (const auto& k : f.children()) kids.push_back(prime(k, scope, sig));
      switch (f.kind()) {
        case K::kNot: return Formula::negation(std::move(kids[0]));
        case K::kAnd: return Formula::conjunction(std::move(kids));
        case K::kOr: return Formula::disjunction(std::move(kids));
        case K::kImplies: return Formula::implication(std::move(kids[0]), std::move(kids[1]));
        default: return Formula::equivalence(std::move(kids[0]), std::move(kids[1]));
      }
    }
  }
}

// ---- queries ---------------------------------------------------------------

namespace {

void collect_symbols(const Term& t, std::set<Symbol>& out) {
  if (t.is_var()) return;
  out.insert(t.symbol());
  for (const auto& a : t.args()) collect_symbols(a, out);
}

void collect_symbols(const Formula& f, std::set<Symbol>& out) {
  if (f.is(Formula::Kind::kAtom)) out.insert(f.predicate());
  for (const auto& t : f.terms()) collect_symbols(t, out);
  for (const auto& k : f.children()) collect_symbols(k, out);
}

void collect_proc_terms(const Term& t, std::vector<Term>& out) {
  if (t.sort().is_proc() && std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  if (!t.is_var())
    for (const auto& a : t.args()) collect_proc_terms(a, out);
}

void collect_proc_terms(const Formula& f, std::vector<Term>& out) {
  for (const auto& t : f.terms()) collect_proc_terms(t, out);
  for (const auto& k : f.children()) collect_proc_terms(k, out);
}

}  // namespace

std::set<Symbol> symbols_of(const Formula& f) {
  std::set<Symbol> out;
  collect_symbols(f, out);
  return out;
}

std::set<Symbol> symbols_of(const Term& t) {
  std::set<Symbol> out;
  collect_symbols(t, out);
  return out;
}

std::vector<Term> proc_subterms(const Formula& f) {
  std::vector<Term> out;
  collect_proc_terms(f, out);
  return out;
}

bool binds_sort(const Formula& f, const Sort& s) {
  for (const auto& v : f.bound())
    if (v.sort == s) return true;
  for (const auto& k : f.children())
    if (binds_sort(k, s)) return true;
  return false;
}

std::string call_notation(const Term& t) {
  if (t.is_var()) return t.var_name();
  std::string out = t.symbol().full_name();
  if (t.args().empty()) return out;
  out += '(';
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (i) out += ',';
    out += call_notation(t.args()[i]);
  }
  out += ')';
  return out;
}

}  // namespace fop
