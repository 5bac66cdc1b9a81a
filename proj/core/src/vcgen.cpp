#include "fop/vcgen.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "fop/error.hpp"
#include "fop/text.hpp"

namespace fop {

std::string_view to_string(VCKind k) {
  switch (k) {
    case VCKind::kInit: return "init";
    case VCKind::kStep: return "step";
    case VCKind::kBad: return "bad";
  }
  return "?";
}

TermSet mod_terms(const Protocol& p) { return TermSet(p.mod); }

std::vector<Term> qvec_terms(const Protocol& p) {
  std::vector<Term> out;
  for (const auto& v : class_vars(p.arity())) out.push_back(Term::var(v));
  return out;
}

namespace {

std::vector<Var> vars_of(const std::vector<Term>& ts) {
  std::vector<Var> out;
  for (const auto& t : ts) out.push_back(t.as_var());
  return out;
}

std::set<std::string> names_of(const std::vector<Var>& vs) {
  std::set<std::string> out;
  for (const auto& v : vs) out.insert(v.name);
  return out;
}

// Class literal followed by its invariant instance, de-duplicated.
void push_guarded(const CandidateInvariant& inv, const ClassLiteral& c, std::vector<Formula>& out,
                  std::set<std::string>& seen) {
  Formula atom = c.atom();
  if (seen.insert(to_text(atom)).second) out.push_back(atom);
  Formula instance = inv_at(inv, c.cls, c.args);
  if (!instance.is(Formula::Kind::kTrue) && seen.insert(to_text(instance)).second) out.push_back(instance);
}

SExpr descriptor_of(const LocalBlock& b) {
  std::vector<SExpr> items{SExpr::make_atom("case")};
  for (const auto& c : b.classes) items.push_back(to_sexpr(c.atom()));
  for (const auto& e : b.equalities) items.push_back(to_sexpr(e));
  return SExpr::make_list(std::move(items));
}

Formula step_sentence(const Protocol& p, const std::vector<Formula>& hyp, const Formula& concl,
                      const std::vector<Var>& qv) {
  std::vector<Formula> h = hyp;
  h.push_back(p.trloc);
  h.push_back(build_frame(p, names_of(qv)));
  std::vector<Var> bound{p.actor};
  bound.insert(bound.end(), qv.begin(), qv.end());
  return Formula::forall(bound, Formula::implication(conj(std::move(h)), concl));
}

}  // namespace

std::vector<VCStatement> gen_init_vcs(const Protocol& p, const CandidateInvariant& inv, Oracle& oracle,
                                      VCOptions::InitForm form) {
  std::vector<VCStatement> out;
  const auto q = qvec_terms(p);
  const auto qv = vars_of(q);
  for (const auto& top : p.family->class_preds()) {
    VCStatement st;
    st.id = "init." + top.full_name();
    st.kind = VCKind::kInit;
    st.top_class = top.full_name();
    const Formula concl = inv_at(inv, top, q);
    if (form == VCOptions::InitForm::kSeparate) {
      st.sentence = Formula::implication(forall(qv, p.init_at(top, q)), forall(qv, concl));
      st.descriptor = SExpr::make_list({SExpr::make_atom("separate")});
    } else {
      Characteristic ch = chi_of(oracle, top, {}, q);
      // CrossInit: every class literal Top_j(t⃗) of χ_Top(∅, q⃗) becomes Init_Top_j(t⃗).
      std::vector<Formula> alts;
      for (const auto& c : ch.cases()) {
        std::vector<Formula> parts;
        for (const auto& lit : c.classes) parts.push_back(p.init_at(lit.cls, lit.args));
        for (const auto& e : c.equalities) parts.push_back(e);
        alts.push_back(conj(std::move(parts)));
      }
      Formula cross = ch.unrealizable ? Formula::bottom() : disj(std::move(alts));
      st.sentence = Formula::forall(qv, Formula::implication(cross, concl));
      st.descriptor = to_sexpr(ch);
    }
    out.push_back(std::move(st));
  }
  return out;
}

std::vector<VCStatement> gen_step_vcs(const Protocol& p, const CandidateInvariant& inv, Oracle& oracle,
                                      bool bundled, bool include_vacuous) {
  std::vector<VCStatement> out;
  const auto q = qvec_terms(p);
  const auto qv = vars_of(q);
  const TermSet mods = mod_terms(p);
  for (const auto& top : p.family->class_preds()) {
    const Formula concl = prime_state(p, inv_at(inv, top, q));
    Characteristic ch = chi_of(oracle, top, mods.terms(), q);
    if (bundled) {
      // CrossInv: χ with each Top_i(t⃗) strengthened to Top_i(t⃗) ∧ Inv_Top_i(t⃗).
      std::vector<Formula> alts;
      for (const auto& c : ch.cases()) {
        std::vector<Formula> parts;
        std::set<std::string> seen;
        for (const auto& lit : c.classes) push_guarded(inv, lit, parts, seen);
        for (const auto& e : c.equalities) parts.push_back(e);
        alts.push_back(conj(std::move(parts)));
      }
      VCStatement st;
      st.id = "bundled." + top.full_name();
      st.kind = VCKind::kStep;
      st.top_class = top.full_name();
      st.descriptor = to_sexpr(ch);
      Formula cross = ch.unrealizable ? Formula::bottom() : disj(std::move(alts));
      st.sentence = step_sentence(p, {cross}, concl, qv);
      out.push_back(std::move(st));
      continue;
    }
    int n = 0;
    for (const auto& c : ch.cases()) {
      std::vector<Formula> hyp;
      std::set<std::string> seen;
      for (const auto& lit : c.classes) push_guarded(inv, lit, hyp, seen);
      for (const auto& e : c.equalities) hyp.push_back(e);
      VCStatement st;
      st.id = "step." + top.full_name() + "." + std::to_string(++n);
      st.kind = VCKind::kStep;
      st.top_class = top.full_name();
      st.descriptor = descriptor_of(c);
      st.sentence = step_sentence(p, hyp, concl, qv);
      out.push_back(std::move(st));
    }
    if (include_vacuous) {
      if (p.arity() != 1) throw Error("vacuous statements are only defined for unary classes");
      const auto& classes = p.family->class_preds();
      const std::size_t top_idx =
          static_cast<std::size_t>(std::find(classes.begin(), classes.end(), top) - classes.begin());
      TermSet ts(std::vector<Term>{mods.terms().begin(), mods.terms().end()});
      std::vector<Term> all = mods.terms();
      all.push_back(q.front());
      ts = TermSet(all);
      const std::size_t qi = *ts.index_of(q.front());
      int m = 0;
      for (const auto& col : enumerate_colorings(ts, classes, 1, q)) {
        if (col.sigma[qi] != static_cast<int>(top_idx)) continue;
        EqClassFormula eq = eqclass_of(oracle, col, ts);
        if (!eq.bottom) continue;
        std::vector<Formula> hyp;
        std::set<std::string> seen;
        for (std::size_t i = 0; i < ts.size(); ++i)
          if (col.sigma[i] >= 0) push_guarded(inv, {classes[static_cast<std::size_t>(col.sigma[i])], {ts[i]}}, hyp, seen);
        hyp.push_back(Formula::bottom());
        VCStatement st;
        st.id = "vacuous." + top.full_name() + "." + std::to_string(++m);
        st.kind = VCKind::kStep;
        st.top_class = top.full_name();
        st.descriptor = to_sexpr(col, ts, classes, 1);
        st.vacuous = true;
        // Keep the ⊥ conjunct visible instead of letting conj() absorb it.
        hyp.push_back(p.trloc);
        hyp.push_back(build_frame(p, names_of(qv)));
        std::vector<Var> bound{p.actor};
        bound.insert(bound.end(), qv.begin(), qv.end());
        st.sentence = Formula::forall(bound, Formula::implication(Formula::conjunction(std::move(hyp)), concl));
        out.push_back(std::move(st));
      }
    }
  }
  return out;
}

VCStatement gen_bad_vc(const Protocol& p, const CandidateInvariant& inv, Oracle& oracle) {
  if (!p.bad) throw Error("protocol has no bad-state formula");
  VCStatement st;
  st.id = "bad";
  st.kind = VCKind::kBad;
  const Formula not_bad = neg(p.bad->body);
  if (p.bad->formals.empty()) {
    st.sentence = Formula::implication(build_inv(p, inv, false), not_bad);
    st.descriptor = SExpr::make_list({SExpr::make_atom("global")});
    return st;
  }
  // Close Bad's variables over every realizable complete description of them,
  // with the invariant instantiated on each tuple inside a class.
  std::vector<Term> terms;
  for (const auto& v : p.bad->formals) terms.push_back(Term::var(v));
  TermSet ts(terms);
  DescriptionSet ds = oracle.describe(ts.terms(), ts.vars());
  const auto& classes = p.family->class_preds();
  const int k = p.arity();
  std::vector<Formula> alts;
  for (const auto& d : ds.items) {
    std::vector<Formula> parts;
    std::set<std::string> seen;
    for (std::size_t t = 0; t < ds.tuple_count(); ++t)
      for (std::size_t c = 0; c < classes.size(); ++c) {
        ClassLiteral lit{classes[c], ts.tuple_terms(t, k)};
        if (ds.holds(d, c, t)) {
          push_guarded(inv, lit, parts, seen);
        } else {
          parts.push_back(neg(lit.atom()));
        }
      }
    for (std::size_t i = 0; i < ts.size(); ++i)
      for (std::size_t j = i + 1; j < ts.size(); ++j)
        parts.push_back(d.partition[i] == d.partition[j] ? Formula::eq(ts[i], ts[j]) : neq(ts[i], ts[j]));
    alts.push_back(conj(std::move(parts)));
  }
  st.sentence = Formula::forall(p.bad->formals, Formula::implication(disj(std::move(alts)), not_bad));
  st.descriptor = SExpr::make_list({SExpr::make_atom("descriptions"), SExpr::make_atom(std::to_string(ds.items.size()))});
  return st;
}

VCSuite gen_suite(const Protocol& p, const CandidateInvariant& inv, Oracle& oracle, const VCOptions& opts) {
  VCSuite s;
  s.protocol = p.name;
  s.protocol_hash = protocol_digest(p, inv);
  s.oracle_bound = oracle.bound();
  s.statements = gen_init_vcs(p, inv, oracle, opts.init_form);
  auto steps = gen_step_vcs(p, inv, oracle, opts.bundled, opts.include_vacuous);
  s.statements.insert(s.statements.end(), steps.begin(), steps.end());
  if (opts.check_bad) s.statements.push_back(gen_bad_vc(p, inv, oracle));
  return s;
}

std::string protocol_digest(const Protocol& p, const CandidateInvariant& inv) {
  std::ostringstream text;
  text << p.name << '\n' << p.family->name() << '\n';
  for (const auto& s : p.sig.sorts()) text << "sort " << s.name() << '\n';
  for (const auto& s : p.sig.symbols()) {
    text << to_string(s.section()) << ' ' << s.full_name() << " (";
    for (const auto& a : s.arg_sorts()) text << ' ' << a.name();
    text << " ) " << s.result_sort().name() << '\n';
  }
  auto per_class = [&](const char* tag, const PerClass& pc) {
    for (const auto& [c, f] : pc.items()) {
      text << tag << ' ' << c.full_name();
      for (const auto& v : f.formals) text << ' ' << v.name;
      text << ' ' << to_text(f.body) << '\n';
    }
  };
  per_class("init", p.init);
  text << "actor " << p.actor.name << '\n';
  for (const auto& t : p.mod) text << "mod " << to_text(t) << '\n';
  text << "trloc " << to_text(p.trloc) << '\n';
  if (p.bad) {
    text << "bad";
    for (const auto& v : p.bad->formals) text << ' ' << v.name;
    text << ' ' << to_text(p.bad->body) << '\n';
  }
  for (const auto& a : p.axioms) text << "axiom " << to_text(a) << '\n';
  per_class("invariant", inv.per_class);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text.str()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

SExpr to_sexpr(const VCStatement& s) {
  std::vector<SExpr> items{SExpr::make_atom("statement"), SExpr::make_atom(s.id),
                           SExpr::make_list({SExpr::make_atom("kind"), SExpr::make_atom(std::string(to_string(s.kind)))})};
  if (!s.top_class.empty())
    items.push_back(SExpr::make_list({SExpr::make_atom("class"), SExpr::make_atom(s.top_class)}));
  items.push_back(SExpr::make_list({SExpr::make_atom("provenance"), s.descriptor}));
  items.push_back(to_sexpr(s.sentence));
  return SExpr::make_list(std::move(items));
}

std::string dump_suite(const VCSuite& suite) {
  std::ostringstream out;
  out << "(vc-suite\n  (protocol " << suite.protocol << ")\n  (digest " << suite.protocol_hash
      << ")\n  (oracle-bound " << suite.oracle_bound << "))\n";
  for (const auto& st : suite.statements) out << to_pretty_string(to_sexpr(st), 100) << '\n';
  return out.str();
}

}  // namespace fop
