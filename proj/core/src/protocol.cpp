#include "fop/protocol.hpp"

#include <algorithm>

#include "fop/error.hpp"
#include "fop/text.hpp"

namespace fop {

Formula ClassFormula::instantiate(const std::vector<Term>& args) const {
  if (args.size() != formals.size())
    throw Error("expected " + std::to_string(formals.size()) + " arguments, got " + std::to_string(args.size()));
  Substitution m;
  for (std::size_t i = 0; i < args.size(); ++i) m.emplace(formals[i], args[i]);
  return substitute(body, m);
}

void PerClass::set(const Symbol& cls, ClassFormula f) {
  for (auto& [c, g] : items_)
    if (c == cls) {
      g = std::move(f);
      return;
    }
  items_.emplace_back(cls, std::move(f));
}

const ClassFormula* PerClass::find(const Symbol& cls) const { return find(cls.full_name()); }

const ClassFormula* PerClass::find(std::string_view cls) const {
  for (const auto& [c, g] : items_)
    if (c.full_name() == cls) return &g;
  return nullptr;
}

std::set<std::string> Protocol::mutable_scope() const {
  std::set<std::string> out;
  for (const auto& s : sig.symbols())
    if (s.section() == Section::kState || s.section() == Section::kBackground) out.insert(s.name());
  return out;
}

Formula Protocol::init_at(const Symbol& cls, const std::vector<Term>& args) const {
  const ClassFormula* f = init.find(cls);
  return f ? f->instantiate(args) : Formula::top();
}

int Protocol::default_oracle_bound() const {
  return oracle_bound ? *oracle_bound : family->default_bound(static_cast<int>(mod.size()));
}

Formula inv_at(const CandidateInvariant& inv, const Symbol& cls, const std::vector<Term>& args) {
  const ClassFormula* f = inv.per_class.find(cls);
  return f ? f->instantiate(args) : Formula::top();
}

std::vector<Var> class_vars(int k) {
  if (k == 1) return {{"q", Sort::proc()}};
  if (k == 3) return {{"x", Sort::proc()}, {"y", Sort::proc()}, {"z", Sort::proc()}};
  std::vector<Var> out;
  for (int i = 1; i <= k; ++i) out.push_back({"q" + std::to_string(i), Sort::proc()});
  return out;
}

Formula prime_state(const Protocol& p, const Formula& f) { return prime(f, p.mutable_scope(), p.sig); }

// ---- validation ------------------------------------------------------------

namespace {

using VK = ValidationError::Kind;

bool mentions_section(const Formula& f, Section s) {
  for (const auto& sym : symbols_of(f))
    if (sym.section() == s) return true;
  return false;
}

bool mentions_primed(const Formula& f) {
  for (const auto& sym : symbols_of(f))
    if (sym.primed()) return true;
  return false;
}

void check_free(const Formula& f, const std::vector<Var>& allowed, const std::string& where) {
  for (const auto& v : free_vars(f))
    if (std::find(allowed.begin(), allowed.end(), v) == allowed.end())
      throw ValidationError(VK::kFreeVariable, where + ": free variable '" + v.name + "' is not a parameter");
}

void check_class(const Protocol& p, const Symbol& cls, const std::string& where) {
  const auto& classes = p.family->class_preds();
  if (std::find(classes.begin(), classes.end(), cls) == classes.end())
    throw ValidationError(VK::kUnknownClass, where + ": '" + cls.full_name() + "' is not a class of " +
                                                 p.family->name());
}

void check_formals(const Protocol& p, const ClassFormula& f, const std::string& where) {
  if (static_cast<int>(f.formals.size()) != p.arity())
    throw ValidationError(VK::kOther, where + ": expected " + std::to_string(p.arity()) + " parameters");
  for (std::size_t i = 0; i < f.formals.size(); ++i) {
    if (!f.formals[i].sort.is_proc())
      throw ValidationError(VK::kOther, where + ": parameter '" + f.formals[i].name + "' must be of sort Proc");
    for (std::size_t j = 0; j < i; ++j)
      if (f.formals[j].name == f.formals[i].name)
        throw ValidationError(VK::kOther, where + ": duplicate parameter '" + f.formals[i].name + "'");
  }
}

bool is_mod_term(const Protocol& p, const Term& t) {
  return std::find(p.mod.begin(), p.mod.end(), t) != p.mod.end();
}

}  // namespace

void validate_protocol(const Protocol& p) {
  if (!p.family) throw ValidationError(VK::kOther, "protocol has no topology family");
  if (!p.actor.sort.is_proc()) throw ValidationError(VK::kOther, "acting process must be of sort Proc");
  for (const auto& s : p.family->edge_labels())
    if (!p.sig.find(s.full_name())) throw ValidationError(VK::kOther, "topology symbol '" + s.name() + "' not declared");
  for (const auto& s : p.family->class_preds())
    if (!p.sig.find(s.full_name())) throw ValidationError(VK::kOther, "topology symbol '" + s.name() + "' not declared");

  // Mod(p) = {p} ∪ {f(p) | f ∈ Σ_E}.
  const Term actor = Term::var(p.actor);
  std::vector<Term> expected{actor};
  for (const auto& e : p.family->edge_labels()) expected.push_back(Term::app(e, {actor}));
  for (const auto& t : p.mod)
    if (std::find(expected.begin(), expected.end(), t) == expected.end())
      throw ValidationError(VK::kModViolation, "Mod(" + p.actor.name + ") term " + to_text(t) +
                                                   " is not the actor or a neighbour");
  for (const auto& t : expected)
    if (!is_mod_term(p, t))
      throw ValidationError(VK::kModViolation, "Mod(" + p.actor.name + ") is missing " + to_text(t));
  for (std::size_t i = 0; i < p.mod.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (p.mod[i] == p.mod[j]) throw ValidationError(VK::kModViolation, "duplicate Mod term " + to_text(p.mod[i]));

  check_well_sorted(p.trloc, p.sig);
  check_free(p.trloc, {p.actor}, "trloc");
  for (const auto& t : proc_subterms(p.trloc))
    if (!is_mod_term(p, t))
      throw ValidationError(VK::kModViolation, "trloc mentions " + to_text(t) + " outside Mod(" + p.actor.name + ")");

  for (const auto& [cls, f] : p.init.items()) {
    const std::string where = "init " + cls.full_name();
    check_class(p, cls, where);
    check_formals(p, f, where);
    check_well_sorted(f.body, p.sig);
    check_free(f.body, f.formals, where);
    if (mentions_section(f.body, Section::kTopoEdge) || mentions_section(f.body, Section::kTopoClass))
      throw ValidationError(VK::kInitShapeError, where + " mentions a topology symbol");
    if (mentions_primed(f.body)) throw ValidationError(VK::kInitShapeError, where + " mentions a primed symbol");
  }

  if (p.bad) {
    check_well_sorted(p.bad->body, p.sig);
    check_free(p.bad->body, p.bad->formals, "bad");
    if (mentions_primed(p.bad->body)) throw ValidationError(VK::kOther, "bad mentions a primed symbol");
    for (const auto& v : p.bad->formals)
      if (!v.sort.is_proc()) throw ValidationError(VK::kOther, "bad parameters must be of sort Proc");
  }

  for (const auto& a : p.axioms) {
    check_well_sorted(a, p.sig);
    check_free(a, {}, "axiom");
    for (const auto& s : symbols_of(a))
      if (s.section() != Section::kBackground || s.primed())
        throw ValidationError(VK::kOther, "axiom mentions non-background symbol '" + s.full_name() + "'");
  }
}

void validate_protocol(const Protocol& p, const CandidateInvariant& inv) {
  validate_protocol(p);
  for (const auto& [cls, f] : inv.per_class.items()) {
    const std::string where = "invariant " + cls.full_name();
    check_class(p, cls, where);
    check_formals(p, f, where);
    check_well_sorted(f.body, p.sig);
    check_free(f.body, f.formals, where);
    if (mentions_section(f.body, Section::kTopoEdge) || mentions_section(f.body, Section::kTopoClass))
      throw ValidationError(VK::kTopoSymbolInInvariant, where + " mentions a topology symbol");
    if (mentions_primed(f.body)) throw ValidationError(VK::kOther, where + " mentions a primed symbol");
  }
}

// ---- transition system -----------------------------------------------------

namespace {

std::vector<Var> fresh_vars(const std::vector<Sort>& sorts, const std::set<std::string>& taken) {
  std::vector<Var> out;
  int i = 0;
  for (const auto& s : sorts) {
    std::string name;
    do name = "v" + std::to_string(++i);
    while (taken.contains(name));
    out.push_back({name, s});
  }
  return out;
}

Formula unchanged(const Symbol& s, const Symbol& primed, std::vector<Term> head, const std::vector<Var>& rest) {
  std::vector<Term> args = std::move(head);
  for (const auto& v : rest) args.push_back(Term::var(v));
  Formula body;
  if (s.is_predicate()) {
    body = Formula::equivalence(Formula::atom(s, args), Formula::atom(primed, args));
  } else {
    body = Formula::eq(Term::app(s, args), Term::app(primed, args));
  }
  return forall(rest, body);
}

std::set<std::string> names_in(const Term& t) {
  std::set<std::string> out;
  for (const auto& v : free_vars(t)) out.insert(v.name);
  return out;
}

}  // namespace

Formula build_unch(const Protocol& p, const Term& y) {
  std::vector<Formula> parts;
  const auto taken = names_in(y);
  for (const auto& s : p.sig.symbols_in(Section::kState)) {
    std::vector<Sort> rest(s.arg_sorts().begin() + 1, s.arg_sorts().end());
    parts.push_back(unchanged(s, *p.sig.primed_of(s), {y}, fresh_vars(rest, taken)));
  }
  return conj(std::move(parts));
}

Formula build_unmod(const Protocol& p) {
  std::vector<Formula> parts;
  for (const auto& s : p.sig.symbols_in(Section::kBackground))
    parts.push_back(unchanged(s, *p.sig.primed_of(s), {}, fresh_vars(s.arg_sorts(), {})));
  return conj(std::move(parts));
}

Formula build_frame(const Protocol& p, const std::set<std::string>& avoid) {
  std::string yname = "y";
  for (int i = 1; yname == p.actor.name || avoid.contains(yname); ++i) yname = "y" + std::to_string(i);
  const Var y{yname, Sort::proc()};
  const Term yt = Term::var(y);
  std::vector<Formula> outside;
  for (const auto& t : p.mod) outside.push_back(neq(yt, t));
  Formula unch = build_unch(p, yt);
  Formula rest = unch.is(Formula::Kind::kTrue) ? unch : forall({y}, implies(conj(std::move(outside)), unch));
  return conj({build_unmod(p), rest});
}

Formula build_tau(const Protocol& p) { return exists({p.actor}, conj({p.trloc, build_frame(p)})); }

Formula build_init(const Protocol& p) {
  const auto vars = class_vars(p.arity());
  std::vector<Term> args;
  for (const auto& v : vars) args.push_back(Term::var(v));
  std::vector<Formula> parts;
  for (const auto& cls : p.family->class_preds())
    parts.push_back(implies(Formula::atom(cls, args), p.init_at(cls, args)));
  return forall(vars, conj(std::move(parts)));
}

Formula build_inv(const Protocol& p, const CandidateInvariant& inv, bool primed) {
  const auto vars = class_vars(p.arity());
  std::vector<Term> args;
  for (const auto& v : vars) args.push_back(Term::var(v));
  std::vector<Formula> parts;
  for (const auto& cls : p.family->class_preds()) {
    Formula body = inv_at(inv, cls, args);
    if (primed) body = prime_state(p, body);
    parts.push_back(implies(Formula::atom(cls, args), body));
  }
  return forall(vars, conj(std::move(parts)));
}

Formula build_invok(const Protocol& p, const CandidateInvariant& inv) {
  Formula pre = build_inv(p, inv, false);
  Formula post = build_inv(p, inv, true);
  return conj({implies(build_init(p), pre), implies(conj({pre, build_tau(p)}), post)});
}

}  // namespace fop
