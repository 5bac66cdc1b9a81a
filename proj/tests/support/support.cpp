#include "support.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fop/normalize.hpp"
#include "fop/protocol.hpp"
#include "fop/subprocess.hpp"
#include "fop/text.hpp"

namespace fop::test {

std::string source_path(std::string_view relative) { return std::string(FOP_SOURCE_DIR) + "/" + std::string(relative); }

std::string protocol_path(std::string_view file) { return source_path("protocols/" + std::string(file)); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ProtocolDocument load_protocol(std::string_view file) { return parse_protocol_file(protocol_path(file)); }

ProtocolDocument load_mutated(std::string_view file, std::string_view from, std::string_view to) {
  std::string text = read_file(protocol_path(file));
  const auto at = text.find(from);
  if (at == std::string::npos) throw std::runtime_error("mutation anchor not found: " + std::string(from));
  text.replace(at, from.size(), to);
  std::string name(file);
  name = name.substr(0, name.find('.')) + "-mutant";
  return parse_protocol_text(text, name);
}

bool solver_available() { return find_executable("z3").has_value(); }

Formula parse_in(const Signature& sig, std::string_view text) {
  ParseScope scope;
  scope.implicit_proc_vars = true;
  return parse_formula(text, sig, scope);
}

Term parse_term_in(const Signature& sig, std::string_view text) {
  ParseScope scope;
  scope.implicit_proc_vars = true;
  return parse_term(text, sig, scope);
}

std::vector<Formula> rbr_class_statements(const Protocol& p, const CandidateInvariant& inv, std::string_view cls) {
  const Symbol& top = p.sig.get(std::string(cls));
  const Symbol& other = p.sig.get(cls == "Red" ? "Black" : "Red");
  const Term pt = parse_term_in(p.sig, "p"), qt = parse_term_in(p.sig, "q");
  const Term l = parse_term_in(p.sig, "(left p)"), r = parse_term_in(p.sig, "(right p)");
  auto inv_of = [&](const Symbol& c, const Term& t) { return inv_at(inv, c, {t}); };
  auto is = [&](const Symbol& c, const Term& t) { return Formula::atom(c, {t}); };
  // Trivial invariant instances are not written out as premises.
  auto premises = [](std::vector<Formula> xs) {
    std::erase_if(xs, [](const Formula& f) { return f == Formula::top(); });
    return conj(std::move(xs));
  };
  const Formula step = conj({p.trloc, build_frame(p, {"q"})});
  const Formula post = prime_state(p, inv_of(top, qt));
  const std::vector<Var> pq{{"p", Sort::proc()}, {"q", Sort::proc()}};

  Formula init = Formula::forall({{"q", Sort::proc()}}, Formula::implication(p.init_at(top, {qt}), inv_of(top, qt)));
  Formula other_actor =
      Formula::forall(pq, Formula::implication(premises({is(top, qt), inv_of(top, qt), is(top, l), inv_of(top, l), is(other, pt), inv_of(other, pt),
                               is(top, r), inv_of(top, r), neq(pt, qt), distinct({l, pt, r}), step}),
                         post));
  Formula same_actor =
      Formula::forall(pq, Formula::implication(premises({is(top, qt), inv_of(top, qt), is(other, l), inv_of(other, l), is(top, pt), inv_of(top, pt),
                               is(other, r), inv_of(other, r), distinct({l, r, qt}), distinct({l, pt, r}), step}),
                         post));
  return {init, other_actor, same_actor};
}

bool same_statement(const Formula& a, const Formula& b) {
  if (!ac_equal(a, b)) return false;
  const Formula* x = &a;
  const Formula* y = &b;
  while (x->is(Formula::Kind::kForall) && y->is(Formula::Kind::kForall)) {
    if (x->bound() != y->bound()) return false;
    x = &x->body();
    y = &y->body();
  }
  if (x->is(Formula::Kind::kImplies) != y->is(Formula::Kind::kImplies)) return false;
  if (!x->is(Formula::Kind::kImplies)) return true;
  return ac_equal(x->children()[0], y->children()[0]) && ac_equal(x->children()[1], y->children()[1]);
}

// ---- reference topology semantics ------------------------------------------

int RefRing::edge(std::string_view label, int node) const {
  if (label == "right" || label == "next") return (node + 1) % nodes;
  if (label == "left") return (node + nodes - 1) % nodes;
  throw std::runtime_error("unknown edge " + std::string(label));
}

bool RefRing::holds(std::string_view cls, const std::vector<int>& t) const {
  if (cls == "Red") return t[0] % 2 == 0;
  if (cls == "Black") return t[0] % 2 == 1;
  if (cls == "Node") return true;
  if (cls == "btw") {
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) return false;
    // Walking forward from t[0], t[1] is met before t[2].
    return (t[1] - t[0] + nodes) % nodes < (t[2] - t[0] + nodes) % nodes;
  }
  throw std::runtime_error("unknown class " + std::string(cls));
}

std::vector<RefRing> ref_instances(std::string_view family, int max_nodes) {
  std::vector<RefRing> out;
  if (family == "rbr") {
    for (int n = 4; n <= max_nodes; n += 2) out.push_back({"rbr", n});
  } else if (family == "uniring" || family == "btw") {
    for (int n = 3; n <= max_nodes; ++n) out.push_back({std::string(family), n});
  } else {
    throw std::runtime_error("unknown family " + std::string(family));
  }
  return out;
}

int ref_term(const RefRing& g, const Term& t, const std::map<std::string, int>& asg) {
  if (t.is_var()) return asg.at(t.var_name());
  return g.edge(t.symbol().name(), ref_term(g, t.args().at(0), asg));
}

bool ref_holds(const RefRing& g, const Formula& f, const std::map<std::string, int>& asg) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::kTrue: return true;
    case K::kFalse: return false;
    case K::kAtom: {
      std::vector<int> t;
      for (const auto& a : f.terms()) t.push_back(ref_term(g, a, asg));
      return g.holds(f.predicate().name(), t);
    }
    case K::kEq: return ref_term(g, f.terms()[0], asg) == ref_term(g, f.terms()[1], asg);
    case K::kNot: return !ref_holds(g, f.body(), asg);
    case K::kAnd:
      for (const auto& k : f.children())
        if (!ref_holds(g, k, asg)) return false;
      return true;
    case K::kOr:
      for (const auto& k : f.children())
        if (ref_holds(g, k, asg)) return true;
      return false;
    default: throw std::runtime_error("reference evaluator: unsupported connective");
  }
}

bool ref_realizable(std::string_view family, const std::vector<Formula>& literals, const std::vector<Var>& vars,
                    int max_nodes) {
  for (const auto& g : ref_instances(family, max_nodes)) {
    std::vector<int> a(vars.size(), 0);
    while (true) {
      std::map<std::string, int> asg;
      for (std::size_t i = 0; i < vars.size(); ++i) asg[vars[i].name] = a[i];
      bool all = true;
      for (const auto& l : literals)
        if (!ref_holds(g, l, asg)) {
          all = false;
          break;
        }
      if (all) return true;
      std::size_t i = 0;
      while (i < a.size() && ++a[i] == g.nodes) a[i++] = 0;
      if (i == a.size()) break;
    }
  }
  return false;
}

// ---- generators -----------------------------------------------------------

Signature generator_signature() {
  Signature sig;
  const Sort proc = Sort::proc(), value("Value"), id("Id");
  sig.add_sort(value);
  sig.add_sort(id);
  find_family("rbr")->declare_into(sig);
  sig.declare(Symbol::function("var", {proc}, value, Section::kState));
  sig.declare(Symbol::predicate("flag", {proc}, Section::kState));
  sig.declare(Symbol::function("slot", {proc, value}, id, Section::kState));
  sig.declare(Symbol::constant("null", value, Section::kBackground));
  sig.declare(Symbol::constant("r", value, Section::kBackground));
  sig.declare(Symbol::constant("b", value, Section::kBackground));
  sig.declare(Symbol::constant("zero", id, Section::kBackground));
  sig.declare(Symbol::function("succ", {id}, id, Section::kBackground));
  sig.declare(Symbol::predicate("le", {id, id}, Section::kBackground));
  return sig;
}

namespace {

std::vector<Var> vars_of_sort(const std::vector<Var>& vars, const Sort& s) {
  std::vector<Var> out;
  for (const auto& v : vars)
    if (v.sort == s) out.push_back(v);
  return out;
}

std::vector<Symbol> producers(const Signature& sig, const Sort& s) {
  std::vector<Symbol> out;
  for (const auto& f : sig.symbols())
    if (!f.is_predicate() && f.result_sort() == s) out.push_back(f);
  return out;
}

}  // namespace

Term random_term(Rng& rng, const Signature& sig, const Sort& sort, const std::vector<Var>& vars, int depth) {
  const auto vs = vars_of_sort(vars, sort);
  const bool have_proc = !vars_of_sort(vars, Sort::proc()).empty();
  std::vector<Symbol> fs, consts;
  for (const auto& f : producers(sig, sort)) {
    bool usable = true;
    for (const auto& a : f.arg_sorts()) usable = usable && (have_proc || !a.is_proc());
    if (!usable) continue;
    fs.push_back(f);
    if (f.arity() == 0) consts.push_back(f);
  }
  if (depth <= 0 || fs.size() == consts.size() || (!vs.empty() && coin(rng, 0.4))) {
    if (!vs.empty() && (consts.empty() || coin(rng, 0.7)))
      return Term::var(vs[static_cast<std::size_t>(pick(rng, static_cast<int>(vs.size())))]);
    if (!consts.empty()) return Term::constant(consts[static_cast<std::size_t>(pick(rng, static_cast<int>(consts.size())))]);
  }
  std::vector<Symbol> apps;
  for (const auto& f : fs)
    if (f.arity() > 0) apps.push_back(f);
  if (apps.empty()) throw std::runtime_error("no term of sort " + sort.name());
  const Symbol& f = apps[static_cast<std::size_t>(pick(rng, static_cast<int>(apps.size())))];
  std::vector<Term> args;
  for (const auto& a : f.arg_sorts()) args.push_back(random_term(rng, sig, a, vars, depth - 1));
  return Term::app(f, std::move(args));
}

Formula random_formula(Rng& rng, const Signature& sig, const std::vector<Var>& free, int depth) {
  static const std::vector<Sort> sorts{Sort::proc(), Sort("Value"), Sort("Id")};
  auto atom = [&]() -> Formula {
    std::vector<Symbol> preds;
    for (const auto& s : sig.symbols())
      if (s.is_predicate()) preds.push_back(s);
    if (coin(rng, 0.4)) {
      const Sort& s = sorts[static_cast<std::size_t>(pick(rng, 3))];
      if (s.is_proc() && vars_of_sort(free, s).empty()) return Formula::top();
      return Formula::eq(random_term(rng, sig, s, free, 2), random_term(rng, sig, s, free, 2));
    }
    const Symbol& p = preds[static_cast<std::size_t>(pick(rng, static_cast<int>(preds.size())))];
    if (!p.arg_sorts().empty() && p.arg_sorts()[0].is_proc() && vars_of_sort(free, Sort::proc()).empty())
      return Formula::bottom();
    std::vector<Term> args;
    for (const auto& a : p.arg_sorts()) args.push_back(random_term(rng, sig, a, free, 2));
    return Formula::atom(p, std::move(args));
  };
  if (depth <= 0) return atom();
  switch (pick(rng, 9)) {
    case 0:
    case 1: return atom();
    case 2: return Formula::negation(random_formula(rng, sig, free, depth - 1));
    case 3:
    case 4: {
      std::vector<Formula> kids;
      const int n = pick(rng, 4);
      for (int i = 0; i < n; ++i) kids.push_back(random_formula(rng, sig, free, depth - 1));
      return coin(rng) ? Formula::conjunction(std::move(kids)) : Formula::disjunction(std::move(kids));
    }
    case 5:
      return Formula::implication(random_formula(rng, sig, free, depth - 1), random_formula(rng, sig, free, depth - 1));
    case 6:
      return Formula::equivalence(random_formula(rng, sig, free, depth - 1), random_formula(rng, sig, free, depth - 1));
    default: {
      std::vector<Var> bound;
      const int n = 1 + pick(rng, 2);
      std::vector<Var> scope = free;
      for (int i = 0; i < n; ++i) {
        Var v{"x" + std::to_string(depth) + "_" + std::to_string(i), sorts[static_cast<std::size_t>(pick(rng, 3))]};
        bound.push_back(v);
        scope.push_back(v);
      }
      Formula body = random_formula(rng, sig, scope, depth - 1);
      return coin(rng) ? Formula::forall(std::move(bound), body) : Formula::exists(std::move(bound), body);
    }
  }
}

}  // namespace fop::test
