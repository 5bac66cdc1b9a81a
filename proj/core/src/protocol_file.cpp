#include "fop/protocol_file.hpp"

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "fop/error.hpp"
#include "fop/text.hpp"

namespace fop {

namespace {

constexpr std::array<std::string_view, 11> kSections{"sorts", "background", "state", "topology",
                                                      "init", "mod", "trloc", "bad",
                                                      "invariant", "axioms", "concrete"};

[[noreturn]] void fail(const SExpr& at, const std::string& what) { throw ParseError(what, at.line, at.column); }

const std::string& atom_of(const SExpr& e, const char* what) {
  if (!e.is_atom()) fail(e, std::string("expected ") + what);
  return e.atom;
}

Sort sort_named(const Signature& sig, const SExpr& e) {
  const std::string& n = atom_of(e, "a sort name");
  Sort s = n == kBoolSortName ? Sort::boolean() : Sort(n);
  if (!s.is_bool() && !sig.has_sort(s)) fail(e, "undeclared sort " + n);
  return s;
}

void declare_symbols(Signature& sig, const SExpr& section, Section kind) {
  for (std::size_t i = 1; i < section.size(); ++i) {
    const SExpr& d = section[i];
    if (!d.is_list() || d.size() != 3 || !d[0].is_atom() || !d[1].is_list())
      fail(d, "declaration must be (<name> (<arg sorts>) <result sort>)");
    const std::string& name = d[0].atom;
    if (!name.empty() && name.back() == kPrimeMarker) fail(d[0], "identifiers may not end with the prime marker");
    std::vector<Sort> args;
    for (const auto& a : d[1].items) {
      Sort s = sort_named(sig, a);
      if (s.is_bool()) fail(a, "Bool is not allowed as an argument sort");
      args.push_back(s);
    }
    Sort result = sort_named(sig, d[2]);
    Symbol sym = result.is_bool() ? Symbol::predicate(name, args, kind)
                 : args.empty()   ? Symbol::constant(name, result, kind)
                                  : Symbol::function(name, args, result, kind);
    if (sig.find(name)) fail(d[0], "duplicate symbol " + name);
    try {
      sig.declare(sym);
    } catch (const SectionError& e) {
      fail(d, e.what());
    }
  }
}

// Optional formals list followed by a formula.
ClassFormula class_formula(const Signature& sig, const SExpr& entry, std::size_t at, std::vector<Var> defaults,
                           const char* where) {
  ClassFormula f;
  f.formals = std::move(defaults);
  std::size_t body = at;
  if (entry.size() == at + 2) {
    const SExpr& formals = entry[at];
    if (!formals.is_list()) fail(formals, std::string("expected a formals list in ") + where);
    f.formals.clear();
    for (const auto& v : formals.items) f.formals.push_back({atom_of(v, "a variable name"), Sort::proc()});
    body = at + 1;
  } else if (entry.size() != at + 1) {
    fail(entry, std::string("malformed ") + where + " entry");
  }
  ParseScope scope;
  for (const auto& v : f.formals) scope.vars[v.name] = Sort::proc();
  f.body = parse_formula(entry[body], sig, scope);
  return f;
}

std::pair<Symbol, ClassFormula> class_entry(const Protocol& p, const SExpr& e, const char* where) {
  if (!e.is_list() || e.size() < 2 || !e[0].is_atom()) fail(e, std::string("malformed ") + where + " entry");
  const Symbol* cls = p.family->find_symbol(e[0].atom);
  if (!cls || std::find(p.family->class_preds().begin(), p.family->class_preds().end(), *cls) ==
                  p.family->class_preds().end())
    fail(e[0], "unknown topological class " + e[0].atom);
  ClassFormula f = class_formula(p.sig, e, 1, default_formals(p.arity()), where);
  if (static_cast<int>(f.formals.size()) != p.arity())
    fail(e, std::string(where) + " entry for " + e[0].atom + " needs " + std::to_string(p.arity()) + " formals");
  return {*cls, std::move(f)};
}

}  // namespace

std::vector<Var> default_formals(int k) {
  if (k == 1) return {{"p", Sort::proc()}};
  return class_vars(k);
}

ProtocolDocument parse_protocol_text(std::string_view text, const std::string& name) {
  std::vector<SExpr> forms = parse_sexprs(text);
  std::map<std::string, const SExpr*> sections;
  for (const auto& f : forms) {
    if (!f.is_list() || f.items.empty() || !f[0].is_atom()) fail(f, "expected a (section ...) form");
    const std::string& head = f[0].atom;
    if (std::find(kSections.begin(), kSections.end(), head) == kSections.end()) fail(f[0], "unknown section " + head);
    if (sections.contains(head)) fail(f[0], "duplicate section " + head);
    sections[head] = &f;
  }
  auto need = [&](const char* s) -> const SExpr& {
    auto it = sections.find(s);
    if (it == sections.end()) throw ParseError(std::string("missing section ") + s, 1, 1);
    return *it->second;
  };
  auto maybe = [&](const char* s) -> const SExpr* {
    auto it = sections.find(s);
    return it == sections.end() ? nullptr : it->second;
  };

  ProtocolDocument doc;
  doc.protocol = std::make_shared<Protocol>();
  Protocol& p = *doc.protocol;
  p.name = name;

  const SExpr& topo = need("topology");
  if (topo.size() < 2 || topo.size() > 3) fail(topo, "topology must be (topology <family> [bound])");
  p.family = find_family(atom_of(topo[1], "a family name"));
  if (!p.family) fail(topo[1], "unknown topology family " + topo[1].atom);
  if (topo.size() == 3) {
    try {
      p.oracle_bound = std::stoi(atom_of(topo[2], "an oracle bound"));
    } catch (const std::invalid_argument&) {
      fail(topo[2], "oracle bound must be an integer");
    }
    if (*p.oracle_bound < 1) fail(topo[2], "oracle bound must be positive");
  }

  if (const SExpr* s = maybe("sorts")) {
    for (std::size_t i = 1; i < s->size(); ++i) {
      const std::string& n = atom_of((*s)[i], "a sort name");
      if (n == kProcSortName || n == kBoolSortName) fail((*s)[i], n + " is predeclared");
      if (p.sig.has_sort(Sort(n))) fail((*s)[i], "duplicate sort " + n);
      p.sig.add_sort(Sort(n));
    }
  }
  p.family->declare_into(p.sig);
  if (const SExpr* s = maybe("background")) declare_symbols(p.sig, *s, Section::kBackground);
  if (const SExpr* s = maybe("state")) declare_symbols(p.sig, *s, Section::kState);

  ParseScope actor_scope;
  actor_scope.vars[p.actor.name] = Sort::proc();
  const SExpr& mod = need("mod");
  for (std::size_t i = 1; i < mod.size(); ++i) p.mod.push_back(parse_term(mod[i], p.sig, actor_scope));

  if (const SExpr* s = maybe("trloc")) {
    if (s->size() != 2) fail(*s, "trloc must hold exactly one formula");
    p.trloc = parse_formula((*s)[1], p.sig, actor_scope);
  }
  if (const SExpr* s = maybe("init"))
    for (std::size_t i = 1; i < s->size(); ++i) {
      auto [cls, f] = class_entry(p, (*s)[i], "init");
      if (p.init.find(cls)) fail((*s)[i], "duplicate init entry for " + cls.name());
      p.init.set(cls, std::move(f));
    }
  if (const SExpr* s = maybe("bad")) p.bad = class_formula(p.sig, *s, 1, {}, "bad");
  if (const SExpr* s = maybe("axioms"))
    for (std::size_t i = 1; i < s->size(); ++i) {
      ParseScope none;
      p.axioms.push_back(parse_formula((*s)[i], p.sig, none));
    }
  if (const SExpr* s = maybe("invariant"))
    for (std::size_t i = 1; i < s->size(); ++i) {
      auto [cls, f] = class_entry(p, (*s)[i], "invariant");
      if (doc.invariant.per_class.find(cls)) fail((*s)[i], "duplicate invariant entry for " + cls.name());
      doc.invariant.per_class.set(cls, std::move(f));
    }
  if (const SExpr* s = maybe("concrete")) {
    doc.concrete = DomainSpec::parse({s->items.begin() + 1, s->items.end()});
    doc.has_concrete = true;
  }

  validate_protocol(p, doc.invariant);
  return doc;
}

ProtocolDocument parse_protocol_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_protocol_text(buf.str(), std::filesystem::path(path).stem().string());
}

std::pair<Symbol, ClassFormula> parse_class_entry(const Protocol& p, std::string_view text) {
  SExpr e = parse_sexpr(text);
  return class_entry(p, e, "class");
}

const std::vector<std::pair<std::string, std::string>>& builtin_examples() {
  static const std::vector<std::pair<std::string, std::string>> kExamples =
#include "fop/builtin_examples.inc"
      ;
  return kExamples;
}

const std::string* find_builtin_example(std::string_view name) {
  for (const auto& [n, text] : builtin_examples())
    if (n == name || std::filesystem::path(n).stem().string() == name) return &text;
  return nullptr;
}

}  // namespace fop
