#include "fop/chi.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "fop/error.hpp"
#include "fop/text.hpp"

namespace fop {

// ---- TermSet ---------------------------------------------------------------

TermSet::TermSet(std::vector<Term> terms) {
  std::vector<std::pair<std::string, Term>> keyed;
  for (auto& t : terms) keyed.emplace_back(call_notation(t), std::move(t));
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [k, t] : keyed)
    if (terms_.empty() || !(terms_.back() == t)) terms_.push_back(std::move(t));
}

std::optional<std::size_t> TermSet::index_of(const Term& t) const {
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i] == t) return i;
  return std::nullopt;
}

std::vector<Var> TermSet::vars() const {
  std::vector<Var> out;
  std::function<void(const Term&)> walk = [&](const Term& t) {
    if (t.is_var()) {
      if (std::find(out.begin(), out.end(), t.as_var()) == out.end()) out.push_back(t.as_var());
      return;
    }
    for (const auto& a : t.args()) walk(a);
  };
  for (const auto& t : terms_) walk(t);
  return out;
}

std::size_t TermSet::tuple_count(int k) const {
  std::size_t n = 1;
  for (int i = 0; i < k; ++i) n *= terms_.size();
  return n;
}

std::vector<int> TermSet::tuple(std::size_t i, int k) const {
  std::vector<int> out(static_cast<std::size_t>(k));
  for (int j = k - 1; j >= 0; --j) {
    out[static_cast<std::size_t>(j)] = static_cast<int>(i % terms_.size());
    i /= terms_.size();
  }
  return out;
}

std::size_t TermSet::tuple_index(const std::vector<int>& idx) const {
  std::size_t i = 0;
  for (int v : idx) i = i * terms_.size() + static_cast<std::size_t>(v);
  return i;
}

std::vector<Term> TermSet::tuple_terms(std::size_t i, int k) const {
  std::vector<Term> out;
  for (int j : tuple(i, k)) out.push_back(terms_[static_cast<std::size_t>(j)]);
  return out;
}

// ---- colourings ------------------------------------------------------------

namespace {

// Restricted growth strings, i.e. all set partitions of {0..n-1}.
void partitions(std::size_t n, std::vector<int>& cur, int max_block, std::vector<std::vector<int>>& out) {
  if (cur.size() == n) {
    // Convert block numbers to least-member representatives.
    std::vector<int> rep(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t j = 0;
      while (cur[j] != cur[i]) ++j;
      rep[i] = static_cast<int>(j);
    }
    out.push_back(std::move(rep));
    return;
  }
  for (int b = 0; b <= max_block + 1; ++b) {
    cur.push_back(b);
    partitions(n, cur, std::max(max_block, b), out);
    cur.pop_back();
  }
}

std::size_t bell(std::size_t n) {
  // Bell triangle.
  std::vector<std::size_t> row{1};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> next{row.back()};
    for (std::size_t v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.front();
}

Formula partition_literal(const TermSet& ts, const std::vector<int>& part, std::size_t i, std::size_t j) {
  return part[i] == part[j] ? Formula::eq(ts[i], ts[j]) : neq(ts[i], ts[j]);
}

}  // namespace

std::size_t count_colorings(std::size_t terms, std::size_t classes, int k) {
  if (k == 1) {
    std::size_t n = 1;
    for (std::size_t i = 0; i < terms; ++i) {
      if (n > (std::size_t{1} << 62) / (classes + 1)) return std::size_t(-1);
      n *= classes + 1;
    }
    return n;
  }
  if (terms > 25) return std::size_t(-1);
  return (classes + 1) * bell(terms);
}

std::vector<Coloring> enumerate_colorings(const TermSet& ts, const std::vector<Symbol>& classes, int k,
                                          const std::vector<Term>& qvec, std::size_t cap) {
  if (classes.empty()) throw Error("enumerate_colorings needs at least one class");
  const std::size_t total = count_colorings(ts.size(), classes.size(), k);
  if (total > cap)
    throw ExplosionGuard("enumeration of " + (total == std::size_t(-1) ? std::string("too many")
                                                                         : std::to_string(total)) +
                         " colorings exceeds the cap of " + std::to_string(cap));
  const int c = static_cast<int>(classes.size());
  std::vector<Coloring> out;
  if (k == 1) {
    std::vector<int> sigma(ts.size(), -1);
    std::function<void(std::size_t)> go = [&](std::size_t i) {
      if (i == ts.size()) {
        out.push_back({sigma, {}});
        return;
      }
      for (int v = -1; v < c; ++v) {
        sigma[i] = v;
        go(i + 1);
      }
    };
    go(0);
    return out;
  }
  if (static_cast<int>(qvec.size()) != k) throw Error("q-vector length differs from the class arity");
  std::vector<int> qidx;
  for (const auto& q : qvec) {
    auto i = ts.index_of(q);
    if (!i) throw Error("q-vector term " + to_text(q) + " is not in the term set");
    qidx.push_back(static_cast<int>(*i));
  }
  const std::size_t qt = ts.tuple_index(qidx);
  std::vector<std::vector<int>> parts;
  std::vector<int> cur;
  partitions(ts.size(), cur, -1, parts);
  for (int v = -1; v < c; ++v)
    for (const auto& part : parts) {
      Coloring col;
      col.sigma.assign(ts.tuple_count(k), -1);
      col.sigma[qt] = v;
      col.partition = part;
      out.push_back(std::move(col));
    }
  return out;
}

Formula chi_sigma(const Coloring& c, const TermSet& ts, const std::vector<Symbol>& classes, int k) {
  std::vector<Formula> lits;
  for (std::size_t i = 0; i < c.sigma.size(); ++i)
    if (c.sigma[i] >= 0) lits.push_back(Formula::atom(classes[static_cast<std::size_t>(c.sigma[i])], ts.tuple_terms(i, k)));
  if (!c.partition.empty())
    for (std::size_t i = 0; i < ts.size(); ++i)
      for (std::size_t j = i + 1; j < ts.size(); ++j) lits.push_back(partition_literal(ts, c.partition, i, j));
  return conj(std::move(lits));
}

// ---- EqClass ---------------------------------------------------------------

Formula EqClassFormula::to_formula() const { return bottom ? Formula::bottom() : conj(literals); }

namespace {

void flatten(const Formula& f, std::vector<Formula>& out) {
  if (f.is(Formula::Kind::kAnd)) {
    for (const auto& k : f.children()) flatten(k, out);
  } else if (!f.is(Formula::Kind::kTrue)) {
    out.push_back(f);
  }
}

}  // namespace

EqClassFormula eqclass_of(Oracle& oracle, const Coloring& c, const TermSet& ts) {
  const auto& fam = oracle.family();
  GroundQuery base;
  base.vars = ts.vars();
  flatten(chi_sigma(c, ts, fam.class_preds(), fam.arity()), base.literals);
  int deepest = 0;
  for (const auto& t : ts.terms()) deepest = std::max(deepest, t.proc_depth());
  base.max_depth = std::max(1, deepest);

  EqClassFormula out;
  if (!oracle.realizable(base).realizable) {
    out.bottom = true;
    return out;
  }
  for (std::size_t i = 0; i < ts.size(); ++i)
    for (std::size_t j = i + 1; j < ts.size(); ++j) {
      GroundQuery apart = base, together = base;
      apart.literals.push_back(neq(ts[i], ts[j]));
      together.literals.push_back(Formula::eq(ts[i], ts[j]));
      OracleVerdict va = oracle.realizable(apart);
      OracleVerdict vt = oracle.realizable(together);
      if (!va.realizable) {
        out.literals.push_back(Formula::eq(ts[i], ts[j]));
      } else if (!vt.realizable) {
        out.literals.push_back(neq(ts[i], ts[j]));
      } else {
        out.witnesses.push_back(*va.witness);
        out.witnesses.push_back(*vt.witness);
      }
    }
  return out;
}

// ---- characteristics -------------------------------------------------------

Formula LocalBlock::to_formula() const {
  std::vector<Formula> parts;
  for (const auto& c : classes) parts.push_back(c.atom());
  for (const auto& e : equalities) parts.push_back(e);
  return conj(std::move(parts));
}

Formula Characteristic::to_formula() const {
  if (unrealizable) return Formula::bottom();
  std::vector<Formula> parts;
  for (const auto& c : anchor.classes) parts.push_back(c.atom());
  for (const auto& e : anchor.equalities) parts.push_back(e);
  if (!branches.empty()) {
    std::vector<Formula> alts;
    for (const auto& b : branches) alts.push_back(b.to_formula());
    parts.push_back(disj(std::move(alts)));
  }
  return conj(std::move(parts));
}

std::vector<LocalBlock> Characteristic::cases() const {
  if (unrealizable) return {};
  if (branches.empty()) return {anchor};
  std::vector<LocalBlock> out;
  for (const auto& b : branches) {
    LocalBlock blk = anchor;
    blk.classes.insert(blk.classes.end(), b.classes.begin(), b.classes.end());
    blk.equalities.insert(blk.equalities.end(), b.equalities.begin(), b.equalities.end());
    out.push_back(std::move(blk));
  }
  return out;
}

Characteristic chi_of(Oracle& oracle, const Symbol& top, const std::vector<Term>& A, const std::vector<Term>& qvec) {
  const auto& fam = oracle.family();
  const int k = fam.arity();
  if (static_cast<int>(qvec.size()) != k || static_cast<int>(top.arity()) != k)
    throw Error("class arity differs from the q-vector length");
  const auto& classes = fam.class_preds();
  auto top_it = std::find(classes.begin(), classes.end(), top);
  if (top_it == classes.end()) throw Error("'" + top.full_name() + "' is not a class of " + fam.name());
  const std::size_t top_idx = static_cast<std::size_t>(top_it - classes.begin());

  std::vector<Term> all = A;
  all.insert(all.end(), qvec.begin(), qvec.end());
  Characteristic ch;
  ch.top = top;
  ch.terms = TermSet(all);
  ch.qvec = qvec;
  const TermSet& ts = ch.terms;

  // Variables: those of A first (the actor), then q⃗.
  std::vector<Var> vars = TermSet(A).vars();
  for (const auto& q : qvec)
    for (const auto& v : free_vars(q))
      if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);

  DescriptionSet ds = oracle.describe(ts.terms(), vars);
  ch.bound_used = ds.bound_used;
  std::vector<int> qidx;
  for (const auto& q : qvec) qidx.push_back(static_cast<int>(*ts.index_of(q)));
  const std::size_t qt = ts.tuple_index(qidx);
  const std::size_t tuples = ds.tuple_count();

  // Group realizable descriptions with Top(q⃗) by their class memberships.
  std::map<std::vector<std::uint8_t>, std::vector<const LocalDescription*>> groups;
  for (const auto& d : ds.items)
    if (ds.holds(d, top_idx, qt)) groups[d.holds].push_back(&d);
  if (groups.empty()) {
    ch.unrealizable = true;
    return ch;
  }

  std::vector<Branch> blocks;
  for (const auto& [holds, members] : groups) {
    Branch b;
    b.witness = members.front()->witness;
    for (std::size_t t = 0; t < tuples; ++t)
      for (std::size_t c = 0; c < classes.size(); ++c)
        if (holds[c * tuples + t]) b.classes.push_back({classes[c], ts.tuple_terms(t, k)});
    for (std::size_t i = 0; i < ts.size(); ++i)
      for (std::size_t j = i + 1; j < ts.size(); ++j) {
        bool all_eq = true, all_ne = true;
        for (const auto* d : members) {
          const bool same = d->partition[i] == d->partition[j];
          all_eq = all_eq && same;
          all_ne = all_ne && !same;
        }
        if (all_eq) b.equalities.push_back(Formula::eq(ts[i], ts[j]));
        if (all_ne) b.equalities.push_back(neq(ts[i], ts[j]));
      }
    blocks.push_back(std::move(b));
  }

  // Factor literals common to every group into the anchor.
  auto key = [](const Formula& f) { return to_text(f); };
  auto common_class = [&](const ClassLiteral& lit) {
    const std::string k0 = key(lit.atom());
    return std::all_of(blocks.begin(), blocks.end(), [&](const Branch& b) {
      return std::any_of(b.classes.begin(), b.classes.end(), [&](const ClassLiteral& o) { return key(o.atom()) == k0; });
    });
  };
  auto common_eq = [&](const Formula& lit) {
    const std::string k0 = key(lit);
    return std::all_of(blocks.begin(), blocks.end(), [&](const Branch& b) {
      return std::any_of(b.equalities.begin(), b.equalities.end(), [&](const Formula& o) { return key(o) == k0; });
    });
  };
  for (const auto& lit : blocks.front().classes)
    if (common_class(lit)) ch.anchor.classes.push_back(lit);
  for (const auto& lit : blocks.front().equalities)
    if (common_eq(lit)) ch.anchor.equalities.push_back(lit);
  if (blocks.size() == 1) return ch;
  std::set<std::string> anchored;
  for (const auto& l : ch.anchor.classes) anchored.insert(key(l.atom()));
  for (const auto& l : ch.anchor.equalities) anchored.insert(key(l));
  for (auto& b : blocks) {
    std::erase_if(b.classes, [&](const ClassLiteral& l) { return anchored.contains(key(l.atom())); });
    std::erase_if(b.equalities, [&](const Formula& l) { return anchored.contains(key(l)); });
  }
  ch.branches = std::move(blocks);
  return ch;
}

// ---- dumps -----------------------------------------------------------------

SExpr to_sexpr(const Coloring& c, const TermSet& ts, const std::vector<Symbol>& classes, int k) {
  std::vector<SExpr> items{SExpr::make_atom("coloring")};
  for (std::size_t i = 0; i < c.sigma.size(); ++i) {
    if (k > 1 && c.sigma[i] < 0) continue;
    std::vector<SExpr> tuple;
    for (const auto& t : ts.tuple_terms(i, k)) tuple.push_back(to_sexpr(t));
    SExpr subject = k == 1 ? tuple.front() : SExpr::make_list(std::move(tuple));
    SExpr color = SExpr::make_atom(c.sigma[i] < 0 ? "top" : classes[static_cast<std::size_t>(c.sigma[i])].full_name());
    items.push_back(SExpr::make_list({std::move(subject), std::move(color)}));
  }
  if (!c.partition.empty()) {
    std::vector<SExpr> blocks{SExpr::make_atom("partition")};
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (c.partition[i] != static_cast<int>(i)) continue;
      std::vector<SExpr> block;
      for (std::size_t j = i; j < ts.size(); ++j)
        if (c.partition[j] == static_cast<int>(i)) block.push_back(to_sexpr(ts[j]));
      blocks.push_back(SExpr::make_list(std::move(block)));
    }
    items.push_back(SExpr::make_list(std::move(blocks)));
  }
  return SExpr::make_list(std::move(items));
}

SExpr to_sexpr(const EqClassFormula& e) {
  if (e.bottom) return SExpr::make_list({SExpr::make_atom("eqclass"), SExpr::make_atom("false")});
  std::vector<SExpr> items{SExpr::make_atom("eqclass")};
  for (const auto& l : e.literals) items.push_back(to_sexpr(l));
  return SExpr::make_list(std::move(items));
}

namespace {

SExpr block_sexpr(const char* head, const LocalBlock& b) {
  std::vector<SExpr> items{SExpr::make_atom(head)};
  for (const auto& c : b.classes) items.push_back(to_sexpr(c.atom()));
  for (const auto& e : b.equalities) items.push_back(to_sexpr(e));
  return SExpr::make_list(std::move(items));
}

}  // namespace

SExpr to_sexpr(const Characteristic& c) {
  std::vector<SExpr> terms{SExpr::make_atom("terms")};
  for (const auto& t : c.terms.terms()) terms.push_back(to_sexpr(t));
  std::vector<SExpr> q{SExpr::make_atom("q")};
  for (const auto& t : c.qvec) q.push_back(to_sexpr(t));
  std::vector<SExpr> items{SExpr::make_atom("chi"), SExpr::make_atom(c.top.full_name()), SExpr::make_list(std::move(terms)),
                           SExpr::make_list(std::move(q)),
                           SExpr::make_list({SExpr::make_atom("bound"), SExpr::make_atom(std::to_string(c.bound_used))})};
  if (c.unrealizable) {
    items.push_back(SExpr::make_atom("false"));
    return SExpr::make_list(std::move(items));
  }
  items.push_back(block_sexpr("anchor", c.anchor));
  for (const auto& b : c.branches) items.push_back(block_sexpr("branch", b));
  return SExpr::make_list(std::move(items));
}

}  // namespace fop
