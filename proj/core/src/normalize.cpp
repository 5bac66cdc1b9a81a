#include "fop/normalize.hpp"

#include <algorithm>
#include <numeric>

#include "fop/text.hpp"

namespace fop {

namespace {

using K = Formula::Kind;

Formula nnf_impl(const Formula& f, bool negated) {
  switch (f.kind()) {
    case K::kTrue: return negated ? Formula::bottom() : f;
    case K::kFalse: return negated ? Formula::top() : f;
    case K::kAtom:
    case K::kEq: return negated ? Formula::negation(f) : f;
    case K::kNot: return nnf_impl(f.body(), !negated);
    case K::kAnd:
    case K::kOr: {
      std::vector<Formula> kids;
      for (const auto& k : f.children()) kids.push_back(nnf_impl(k, negated));
      const bool conjunctive = f.is(K::kAnd) != negated;
      return conjunctive ? Formula::conjunction(std::move(kids)) : Formula::disjunction(std::move(kids));
    }
    case K::kImplies: {
      const Formula& a = f.children()[0];
      const Formula& b = f.children()[1];
      if (negated) return Formula::conjunction({nnf_impl(a, false), nnf_impl(b, true)});
      return Formula::disjunction({nnf_impl(a, true), nnf_impl(b, false)});
    }
    case K::kIff: {
      const Formula& a = f.children()[0];
      const Formula& b = f.children()[1];
      // a <-> b  ==  (a & b) | (~a & ~b);  ~(a <-> b)  ==  (a & ~b) | (~a & b)
      return Formula::disjunction(
          {Formula::conjunction({nnf_impl(a, false), nnf_impl(b, negated)}),
           Formula::conjunction({nnf_impl(a, true), nnf_impl(b, !negated)})});
    }
    case K::kForall:
    case K::kExists: {
      const bool universal = f.is(K::kForall) != negated;
      Formula body = nnf_impl(f.body(), negated);
      return universal ? Formula::forall(f.bound(), std::move(body))
                       : Formula::exists(f.bound(), std::move(body));
    }
  }
  return f;
}

struct Prefix {
  bool universal;
  std::vector<Var> vars;
};

// Strips the quantifiers of an NNF formula into `prefix`, renaming each bound
// variable to a fresh name so that blocks can be merged safely.
Formula strip(const Formula& f, std::vector<Prefix>& prefix, int& counter) {
  switch (f.kind()) {
    case K::kForall:
    case K::kExists: {
      Substitution ren;
      std::vector<Var> fresh;
      for (const auto& v : f.bound()) {
        Var nv{v.name + "_" + std::to_string(++counter), v.sort};
        ren.emplace(v, Term::var(nv));
        fresh.push_back(nv);
      }
      const bool universal = f.is(K::kForall);
      if (prefix.empty() || prefix.back().universal != universal) prefix.push_back({universal, {}});
      auto& block = prefix.back().vars;
      block.insert(block.end(), fresh.begin(), fresh.end());
      return strip(substitute(f.body(), ren), prefix, counter);
    }
    case K::kAnd:
    case K::kOr: {
      std::vector<Formula> kids;
      for (const auto& k : f.children()) kids.push_back(strip(k, prefix, counter));
      return f.is(K::kAnd) ? Formula::conjunction(std::move(kids)) : Formula::disjunction(std::move(kids));
    }
    default: return f;
  }
}

// ---- AC normalization ------------------------------------------------------

Formula normalize(const Formula& f, int next);

Formula normalize_junction(const Formula& f, int next) {
  const bool is_and = f.is(K::kAnd);
  const K unit = is_and ? K::kTrue : K::kFalse;
  const K zero = is_and ? K::kFalse : K::kTrue;
  std::vector<Formula> flat;
  for (const auto& k : f.children()) {
    Formula n = normalize(k, next);
    if (n.is(unit)) continue;
    if (n.is(zero)) return n;
    if (n.kind() == f.kind()) {
      for (const auto& g : n.children()) flat.push_back(g);
    } else {
      flat.push_back(std::move(n));
    }
  }
  if (is_and) {
    // Sibling absorption: A & (... | (A & B) | ...)  ==  A & (... | B | ...)
    std::vector<std::string> sibling_lits;
    for (const auto& k : flat)
      if (!k.is(K::kOr)) sibling_lits.push_back(to_text(k));
    auto is_sibling = [&](const Formula& g) {
      return std::find(sibling_lits.begin(), sibling_lits.end(), to_text(g)) != sibling_lits.end();
    };
    for (auto& k : flat) {
      if (!k.is(K::kOr)) continue;
      std::vector<Formula> disjuncts;
      bool changed = false;
      for (const auto& d : k.children()) {
        if (d.is(K::kAnd)) {
          std::vector<Formula> rest;
          for (const auto& g : d.children())
            if (!is_sibling(g)) rest.push_back(g);
          changed = changed || rest.size() != d.children().size();
          disjuncts.push_back(Formula::conjunction(std::move(rest)));
        } else if (is_sibling(d)) {
          changed = true;
          disjuncts.push_back(Formula::top());
        } else {
          disjuncts.push_back(d);
        }
      }
      if (changed) k = normalize(Formula::disjunction(std::move(disjuncts)), next);
    }
    std::erase_if(flat, [](const Formula& g) { return g.is(K::kTrue); });
  }
  std::vector<std::pair<std::string, Formula>> keyed;
  for (auto& k : flat) keyed.emplace_back(to_text(k), std::move(k));
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  keyed.erase(std::unique(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first == b.first; }),
              keyed.end());
  if (keyed.empty()) return is_and ? Formula::top() : Formula::bottom();
  if (keyed.size() == 1) return keyed.front().second;
  std::vector<Formula> kids;
  for (auto& [_, k] : keyed) kids.push_back(std::move(k));
  return is_and ? Formula::conjunction(std::move(kids)) : Formula::disjunction(std::move(kids));
}

Formula normalize_quantifier(const Formula& f, int next) {
  std::vector<Var> vars = f.bound();
  Formula body = f.body();
  while (body.kind() == f.kind()) {
    vars.insert(vars.end(), body.bound().begin(), body.bound().end());
    body = body.body();
  }
  // Later binders shadow earlier ones with the same name; keep the innermost.
  std::vector<Var> unique;
  for (auto it = vars.rbegin(); it != vars.rend(); ++it)
    if (std::none_of(unique.begin(), unique.end(), [&](const Var& u) { return u.name == it->name; }))
      unique.push_back(*it);
  std::reverse(unique.begin(), unique.end());
  const auto free = free_vars(body);
  std::erase_if(unique, [&](const Var& v) { return !free.contains(v); });
  if (unique.empty()) return normalize(body, next);

  std::vector<std::size_t> perm(unique.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::string best_text;
  Formula best;
  std::vector<Var> best_vars;
  do {
    Substitution ren;
    std::vector<Var> canon;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      Var nv{"%" + std::to_string(next + static_cast<int>(i)), unique[perm[i]].sort};
      ren.emplace(unique[perm[i]], Term::var(nv));
      canon.push_back(nv);
    }
    Formula candidate = normalize(substitute(body, ren), next + static_cast<int>(perm.size()));
    std::string text = to_text(candidate);
    if (best_text.empty() || text < best_text) {
      best_text = std::move(text);
      best = std::move(candidate);
      best_vars = std::move(canon);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return f.is(K::kForall) ? Formula::forall(std::move(best_vars), std::move(best))
                          : Formula::exists(std::move(best_vars), std::move(best));
}

Formula normalize(const Formula& f, int next) {
  switch (f.kind()) {
    case K::kTrue:
    case K::kFalse:
    case K::kAtom: return f;
    case K::kEq: {
      const auto& a = f.terms()[0];
      const auto& b = f.terms()[1];
      return to_text(b) < to_text(a) ? Formula::eq(b, a) : f;
    }
    case K::kNot: {
      Formula inner = normalize(f.body(), next);
      if (inner.is(K::kTrue)) return Formula::bottom();
      if (inner.is(K::kFalse)) return Formula::top();
      return Formula::negation(std::move(inner));
    }
    case K::kAnd:
    case K::kOr: return normalize_junction(f, next);
    case K::kImplies: {
      Formula a = normalize(f.children()[0], next);
      Formula b = normalize(f.children()[1], next);
      if (a.is(K::kTrue)) return b;
      if (a.is(K::kFalse) || b.is(K::kTrue)) return Formula::top();
      return Formula::implication(std::move(a), std::move(b));
    }
    case K::kIff: {
      Formula a = normalize(f.children()[0], next);
      Formula b = normalize(f.children()[1], next);
      if (to_text(b) < to_text(a)) std::swap(a, b);
      return Formula::equivalence(std::move(a), std::move(b));
    }
    case K::kForall:
    case K::kExists: return normalize_quantifier(f, next);
  }
  return f;
}

}  // namespace

Formula nnf(const Formula& f) { return nnf_impl(f, false); }

Formula prenex(const Formula& f) {
  std::vector<Prefix> prefix;
  int counter = 0;
  Formula matrix = strip(nnf(f), prefix, counter);
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
    matrix = it->universal ? Formula::forall(it->vars, matrix) : Formula::exists(it->vars, matrix);
  return matrix;
}

Formula ac_normalize(const Formula& f) { return normalize(f, 0); }

bool ac_equal(const Formula& a, const Formula& b) {
  return to_text(ac_normalize(a)) == to_text(ac_normalize(b));
}

}  // namespace fop
