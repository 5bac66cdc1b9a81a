#include "fop/text.hpp"

#include <algorithm>

#include "fop/error.hpp"

namespace fop {

SExpr to_sexpr(const Term& t) {
  if (t.is_var()) return SExpr::make_atom(t.var_name());
  if (t.args().empty()) return SExpr::make_atom(t.symbol().full_name());
  std::vector<SExpr> items{SExpr::make_atom(t.symbol().full_name())};
  for (const auto& a : t.args()) items.push_back(to_sexpr(a));
  return SExpr::make_list(std::move(items));
}

namespace {

SExpr binders(const std::vector<Var>& vs) {
  std::vector<SExpr> items;
  for (const auto& v : vs)
    items.push_back(SExpr::make_list({SExpr::make_atom(v.name), SExpr::make_atom(v.sort.name())}));
  return SExpr::make_list(std::move(items));
}

SExpr op(const char* head, const std::vector<Formula>& kids) {
  std::vector<SExpr> items{SExpr::make_atom(head)};
  for (const auto& k : kids) items.push_back(to_sexpr(k));
  return SExpr::make_list(std::move(items));
}

}  // namespace

SExpr to_sexpr(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::kTrue: return SExpr::make_atom("true");
    case K::kFalse: return SExpr::make_atom("false");
    case K::kAtom: {
      std::vector<SExpr> items{SExpr::make_atom(f.predicate().full_name())};
      for (const auto& a : f.terms()) items.push_back(to_sexpr(a));
      return SExpr::make_list(std::move(items));
    }
    case K::kEq:
      return SExpr::make_list({SExpr::make_atom("="), to_sexpr(f.terms()[0]), to_sexpr(f.terms()[1])});
    case K::kNot: return op("not", f.children());
    case K::kAnd: return op("and", f.children());
    case K::kOr: return op("or", f.children());
    case K::kImplies: return op("=>", f.children());
    case K::kIff: return op("iff", f.children());
    case K::kForall:
    case K::kExists:
      return SExpr::make_list({SExpr::make_atom(f.is(K::kForall) ? "forall" : "exists"), binders(f.bound()),
                               to_sexpr(f.body())});
  }
  return {};
}

std::string to_text(const Term& t) { return to_string(to_sexpr(t)); }
std::string to_text(const Formula& f) { return to_string(to_sexpr(f)); }
std::string to_pretty_text(const Formula& f, std::size_t width) {
  return to_pretty_string(to_sexpr(f), width);
}

// ---- parsing ---------------------------------------------------------------

namespace {

class FormulaReader {
 public:
  FormulaReader(const Signature& sig, ParseScope& scope) : sig_(sig), scope_(scope) {}

  Term term(const SExpr& e) {
    if (e.is_atom()) {
      const std::string& name = e.atom;
      for (auto it = bound_.rbegin(); it != bound_.rend(); ++it)
        if (it->name == name) return Term::var(*it);
      if (auto it = scope_.vars.find(name); it != scope_.vars.end()) return Term::var(name, it->second);
      if (const Symbol* s = sig_.find(name)) {
        if (s->is_predicate()) fail(e, "predicate '" + name + "' used as a term");
        if (s->arity() != 0) fail(e, "'" + name + "' expects " + std::to_string(s->arity()) + " arguments");
        return Term::constant(*s);
      }
      if (scope_.implicit_proc_vars && valid_identifier(name)) {
        scope_.vars.emplace(name, Sort::proc());
        return Term::var(name, Sort::proc());
      }
      fail(e, "unknown identifier '" + name + "'");
    }
    if (e.items.empty() || !e[0].is_atom()) fail(e, "expected a function application");
    const Symbol* s = sig_.find(e[0].atom);
    if (!s) fail(e[0], "unknown function '" + e[0].atom + "'");
    if (s->is_predicate()) fail(e[0], "predicate '" + s->full_name() + "' used as a term");
    return Term::app(*s, args(e, *s));
  }

  Formula formula(const SExpr& e) {
    if (e.is_atom()) {
      if (e.atom == "true") return Formula::top();
      if (e.atom == "false") return Formula::bottom();
      if (const Symbol* s = sig_.find(e.atom); s && s->is_predicate() && s->arity() == 0)
        return Formula::atom(*s, {});
      fail(e, "expected a formula, got '" + e.atom + "'");
    }
    if (e.items.empty() || !e[0].is_atom()) fail(e, "expected a formula");
    const std::string& head = e[0].atom;
    if (head == "not") {
      expect_arity(e, 1);
      return Formula::negation(formula(e[1]));
    }
    if (head == "and" || head == "or") {
      std::vector<Formula> kids;
      for (std::size_t i = 1; i < e.size(); ++i) kids.push_back(formula(e[i]));
      return head == "and" ? Formula::conjunction(std::move(kids)) : Formula::disjunction(std::move(kids));
    }
    if (head == "=>" || head == "implies") {
      expect_arity(e, 2);
      return Formula::implication(formula(e[1]), formula(e[2]));
    }
    if (head == "iff" || head == "<=>") {
      expect_arity(e, 2);
      return Formula::equivalence(formula(e[1]), formula(e[2]));
    }
    if (head == "=") {
      expect_arity(e, 2);
      Term a = term(e[1]), b = term(e[2]);
      if (a.sort() != b.sort())
        fail(e, "equality between sorts " + a.sort().name() + " and " + b.sort().name());
      return Formula::eq(std::move(a), std::move(b));
    }
    if (head == "distinct") {
      if (e.size() < 2) fail(e, "distinct needs at least one argument");
      std::vector<Term> ts;
      for (std::size_t i = 1; i < e.size(); ++i) {
        ts.push_back(term(e[i]));
        if (ts.back().sort() != ts.front().sort()) fail(e[i], "distinct over mixed sorts");
      }
      std::vector<Formula> lits;
      for (std::size_t i = 0; i < ts.size(); ++i)
        for (std::size_t j = i + 1; j < ts.size(); ++j) lits.push_back(neq(ts[i], ts[j]));
      if (lits.size() == 1) return lits.front();
      return Formula::conjunction(std::move(lits));
    }
    if (head == "forall" || head == "exists") {
      expect_arity(e, 2);
      if (!e[1].is_list() || e[1].items.empty()) fail(e[1], "expected a non-empty binder list");
      std::vector<Var> vs;
      for (const auto& b : e[1].items) {
        if (!b.is_list() || b.size() != 2 || !b[0].is_atom() || !b[1].is_atom())
          fail(b, "expected (name Sort)");
        Sort s(b[1].atom);
        if (s.is_bool() || !sig_.has_sort(s)) fail(b[1], "unknown sort '" + b[1].atom + "'");
        if (!valid_identifier(b[0].atom)) fail(b[0], "invalid variable name '" + b[0].atom + "'");
        vs.push_back({b[0].atom, s});
      }
      const std::size_t depth = bound_.size();
      bound_.insert(bound_.end(), vs.begin(), vs.end());
      Formula body = formula(e[2]);
      bound_.resize(depth);
      return head == "forall" ? Formula::forall(std::move(vs), std::move(body))
                              : Formula::exists(std::move(vs), std::move(body));
    }
    const Symbol* s = sig_.find(head);
    if (!s) fail(e[0], "unknown predicate '" + head + "'");
    if (!s->is_predicate()) fail(e[0], "'" + head + "' is not a predicate");
    return Formula::atom(*s, args(e, *s));
  }

 private:
  std::vector<Term> args(const SExpr& e, const Symbol& s) {
    if (e.size() - 1 != s.arity())
      fail(e, "'" + s.full_name() + "' expects " + std::to_string(s.arity()) + " arguments, got " +
                  std::to_string(e.size() - 1));
    std::vector<Term> out;
    for (std::size_t i = 1; i < e.size(); ++i) {
      out.push_back(term(e[i]));
      if (out.back().sort() != s.arg_sorts()[i - 1])
        fail(e[i], "argument " + std::to_string(i) + " of '" + s.full_name() + "' has sort " +
                       out.back().sort().name() + ", expected " + s.arg_sorts()[i - 1].name());
    }
    return out;
  }

  static bool valid_identifier(const std::string& s) {
    if (s.empty() || s.back() == kPrimeMarker) return false;
    static const char* reserved[] = {"true", "false", "not", "and", "or", "=>", "implies", "iff", "<=>",
                                     "=", "distinct", "forall", "exists"};
    return std::none_of(std::begin(reserved), std::end(reserved), [&](const char* r) { return s == r; });
  }

  void expect_arity(const SExpr& e, std::size_t n) {
    if (e.size() != n + 1)
      fail(e, "'" + e[0].atom + "' expects " + std::to_string(n) + " operand" + (n == 1 ? "" : "s"));
  }

  [[noreturn]] static void fail(const SExpr& at, const std::string& what) {
    throw ParseError(what, at.line, at.column);
  }

  const Signature& sig_;
  ParseScope& scope_;
  std::vector<Var> bound_;
};

}  // namespace

Term parse_term(const SExpr& e, const Signature& sig, ParseScope& scope) {
  return FormulaReader(sig, scope).term(e);
}

Formula parse_formula(const SExpr& e, const Signature& sig, ParseScope& scope) {
  return FormulaReader(sig, scope).formula(e);
}

Formula parse_formula(std::string_view text, const Signature& sig, ParseScope& scope) {
  return parse_formula(parse_sexpr(text), sig, scope);
}

Formula parse_formula(std::string_view text, const Signature& sig) {
  ParseScope scope;
  return parse_formula(text, sig, scope);
}

Term parse_term(std::string_view text, const Signature& sig, ParseScope& scope) {
  return parse_term(parse_sexpr(text), sig, scope);
}

}  // namespace fop
