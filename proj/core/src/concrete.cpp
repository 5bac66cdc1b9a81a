#include "fop/concrete.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_map>

#include "fop/error.hpp"
#include "fop/text.hpp"

namespace fop {

// ---- domains ---------------------------------------------------------------

namespace {

int eval_bound(const SExpr& e, int n) {
  if (e.is_atom()) {
    if (e.atom == "n") return n;
    try {
      std::size_t used = 0;
      int v = std::stoi(e.atom, &used);
      if (used == e.atom.size()) return v;
    } catch (const std::exception&) {
    }
    throw ParseError("range bound must be an integer or n: " + e.atom, e.line, e.column);
  }
  if (e.size() == 3 && (e.is_call("+") || e.is_call("-"))) {
    int a = eval_bound(e[1], n), b = eval_bound(e[2], n);
    return e.is_call("+") ? a + b : a - b;
  }
  throw ParseError("malformed range bound " + to_string(e), e.line, e.column);
}

SExpr bound_atom(const std::string& text) {
  std::size_t plus = text.find('+');
  if (plus != std::string::npos && plus > 0)
    return SExpr::make_list({SExpr::make_atom("+"), SExpr::make_atom(text.substr(0, plus)),
                             SExpr::make_atom(text.substr(plus + 1))});
  return SExpr::make_atom(text);
}

}  // namespace

DomainSpec DomainSpec::parse(const std::vector<SExpr>& entries) {
  DomainSpec d;
  for (const auto& e : entries) {
    if (!e.is_list() || e.size() != 2 || !e[0].is_atom())
      throw ParseError("concrete entry must be (<sort> <domain>) or (<symbol> <interpretation>)", e.line, e.column);
    if (e[1].is_atom()) {
      d.background[e[0].atom] = e[1].atom;
      continue;
    }
    SortEntry s;
    s.sort = e[0].atom;
    const SExpr& dom = e[1];
    if (dom.is_call("enum")) {
      for (std::size_t i = 1; i < dom.size(); ++i) {
        if (!dom[i].is_atom()) throw ParseError("enum elements must be atoms", dom[i].line, dom[i].column);
        s.elements.push_back(dom[i].atom);
      }
      if (s.elements.empty()) throw ParseError("empty enum domain", dom.line, dom.column);
    } else if (dom.is_call("range") && dom.size() == 3) {
      s.is_range = true;
      s.lo = dom[1];
      s.hi = dom[2];
    } else {
      throw ParseError("domain must be (enum ...) or (range lo hi)", dom.line, dom.column);
    }
    d.sorts.push_back(std::move(s));
  }
  return d;
}

void DomainSpec::override_sort(const std::string& sort, const std::string& text) {
  SortEntry s;
  s.sort = sort;
  if (auto dots = text.find(".."); dots != std::string::npos) {
    s.is_range = true;
    s.lo = bound_atom(text.substr(0, dots));
    s.hi = bound_atom(text.substr(dots + 2));
  } else {
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find(',', start);
      if (end == std::string::npos) end = text.size();
      if (end > start) s.elements.push_back(text.substr(start, end - start));
      start = end + 1;
    }
    if (s.elements.empty()) throw Error("empty domain for sort " + sort);
  }
  std::erase_if(sorts, [&](const SortEntry& e) { return e.sort == sort; });
  sorts.push_back(std::move(s));
}

SExpr DomainSpec::to_sexpr() const {
  std::vector<SExpr> items{SExpr::make_atom("concrete")};
  for (const auto& s : sorts) {
    std::vector<SExpr> dom;
    if (s.is_range) {
      dom = {SExpr::make_atom("range"), s.lo, s.hi};
    } else {
      dom.push_back(SExpr::make_atom("enum"));
      for (const auto& el : s.elements) dom.push_back(SExpr::make_atom(el));
    }
    items.push_back(SExpr::make_list({SExpr::make_atom(s.sort), SExpr::make_list(std::move(dom))}));
  }
  for (const auto& [k, v] : background)
    items.push_back(SExpr::make_list({SExpr::make_atom(k), SExpr::make_atom(v)}));
  return SExpr::make_list(std::move(items));
}

// ---- instance ----------------------------------------------------------------

ConcreteInstance::ConcreteInstance(std::shared_ptr<const Protocol> p, int param, const DomainSpec& domains)
    : p_(std::move(p)), param_(param), graph_(p_->family->instance(param)) {
  using VK = ValidationError::Kind;
  for (const auto& s : p_->sig.sorts()) {
    if (s.is_proc() || s.is_bool()) continue;
    auto it = std::find_if(domains.sorts.begin(), domains.sorts.end(),
                           [&](const DomainSpec::SortEntry& e) { return e.sort == s.name(); });
    if (it == domains.sorts.end()) throw ValidationError(VK::kOther, "no concrete domain for sort " + s.name());
    std::vector<std::string> elems = it->elements;
    if (it->is_range) {
      int lo = eval_bound(it->lo, param), hi = eval_bound(it->hi, param);
      for (int v = lo; v <= hi; ++v) elems.push_back(std::to_string(v));
    }
    if (elems.empty()) throw ValidationError(VK::kOther, "empty concrete domain for sort " + s.name());
    domains_[s.name()] = std::move(elems);
  }

  auto grow = [&](const Symbol& f, SymbolInfo info) {
    if (by_id_.size() <= f.id()) by_id_.resize(f.id() + 1);
    by_id_[f.id()] = info;
  };
  for (std::size_t i = 0; i < p_->family->edge_labels().size(); ++i)
    grow(p_->family->edge_labels()[i], {SymbolInfo::Kind::kEdge, i});
  for (std::size_t i = 0; i < p_->family->class_preds().size(); ++i)
    grow(p_->family->class_preds()[i], {SymbolInfo::Kind::kClass, i});

  for (const auto& f : p_->sig.symbols_in(Section::kState)) {
    StateSymbol ss{f, cells_.size(), {}};
    std::size_t count = 1;
    for (std::size_t a = 1; a < f.arity(); ++a) {
      ss.arg_sizes.push_back(domain_size(f.arg_sorts()[a]));
      count *= static_cast<std::size_t>(ss.arg_sizes.back());
    }
    const int values = domain_size(f.result_sort());
    for (std::size_t c = 0; c < count; ++c) {
      std::vector<int> args(ss.arg_sizes.size());
      std::size_t rest = c;
      for (std::size_t a = args.size(); a-- > 0;) {
        args[a] = static_cast<int>(rest % static_cast<std::size_t>(ss.arg_sizes[a]));
        rest /= static_cast<std::size_t>(ss.arg_sizes[a]);
      }
      cells_.push_back({state_syms_.size(), std::move(args), values});
    }
    grow(f, {SymbolInfo::Kind::kState, state_syms_.size()});
    if (auto pr = p_->sig.primed_of(f)) grow(*pr, {SymbolInfo::Kind::kStatePrimed, state_syms_.size()});
    state_syms_.push_back(std::move(ss));
  }

  for (const auto& f : p_->sig.symbols_in(Section::kBackground)) {
    std::vector<int> sizes;
    std::size_t count = 1;
    for (const auto& a : f.arg_sorts()) {
      sizes.push_back(domain_size(a));
      count *= static_cast<std::size_t>(sizes.back());
    }
    const Sort& rs = f.result_sort();
    std::vector<int> table(count, -1);
    auto it = domains.background.find(f.name());
    if (it == domains.background.end()) {
      auto idx = f.arity() == 0 ? element_index(rs, f.name()) : std::nullopt;
      if (!idx) throw ValidationError(VK::kOther, "no concrete interpretation for background symbol " + f.name());
      table[0] = *idx;
    } else if (f.arity() == 0) {
      auto idx = element_index(rs, it->second);
      if (!idx) throw ValidationError(VK::kOther, it->second + " is not an element of sort " + rs.name());
      table[0] = *idx;
    } else if (f.arity() == 2 && f.is_predicate() && f.arg_sorts()[0] == f.arg_sorts()[1]) {
      const std::string& op = it->second;
      // Comparisons use the element order: numeric for ranges, listing order for enums.
      std::function<bool(int, int)> cmp;
      if (op == "<=") cmp = [](int a, int b) { return a <= b; };
      else if (op == "<") cmp = [](int a, int b) { return a < b; };
      else if (op == ">=") cmp = [](int a, int b) { return a >= b; };
      else if (op == ">") cmp = [](int a, int b) { return a > b; };
      else if (op == "=") cmp = [](int a, int b) { return a == b; };
      else throw ValidationError(VK::kOther, "unknown interpretation " + op + " for " + f.name());
      for (int a = 0; a < sizes[0]; ++a)
        for (int b = 0; b < sizes[1]; ++b) table[static_cast<std::size_t>(a * sizes[1] + b)] = cmp(a, b) ? 1 : 0;
    } else if (f.arity() == 2 && (it->second == "max" || it->second == "min") && f.arg_sorts()[0] == rs &&
               f.arg_sorts()[1] == rs) {
      const bool mx = it->second == "max";
      for (int a = 0; a < sizes[0]; ++a)
        for (int b = 0; b < sizes[1]; ++b)
          table[static_cast<std::size_t>(a * sizes[1] + b)] = mx ? std::max(a, b) : std::min(a, b);
    } else {
      throw ValidationError(VK::kOther, "unsupported interpretation " + it->second + " for " + f.name());
    }
    const SymbolInfo info{SymbolInfo::Kind::kBackground, background_syms_.size()};
    grow(f, info);
    if (auto pr = p_->sig.primed_of(f)) grow(*pr, info);
    background_syms_.push_back(f);
    background_tables_.push_back(std::move(table));
  }

  if (!p_->axioms.empty()) {
    State none = empty_state();
    if (eval_state(*this, conj(p_->axioms), none) != Truth::kTrue)
      throw ValidationError(VK::kOther, "background interpretation violates the protocol axioms");
  }
}

int ConcreteInstance::domain_size(const Sort& s) const {
  if (s.is_proc()) return nodes();
  if (s.is_bool()) return 2;
  auto it = domains_.find(s.name());
  if (it == domains_.end()) throw ValidationError(ValidationError::Kind::kOther, "no concrete domain for sort " + s.name());
  return static_cast<int>(it->second.size());
}

const std::vector<std::string>& ConcreteInstance::elements(const Sort& s) const {
  static const std::vector<std::string> kBool{"false", "true"};
  if (s.is_bool()) return kBool;
  auto it = domains_.find(s.name());
  if (it == domains_.end()) throw ValidationError(ValidationError::Kind::kOther, "no concrete domain for sort " + s.name());
  return it->second;
}

std::optional<int> ConcreteInstance::element_index(const Sort& s, std::string_view name) const {
  if (s.is_proc()) {
    try {
      int v = std::stoi(std::string(name));
      if (v >= 0 && v < nodes()) return v;
    } catch (const std::exception&) {
    }
    return std::nullopt;
  }
  const auto& el = elements(s);
  auto it = std::find(el.begin(), el.end(), name);
  if (it == el.end()) return std::nullopt;
  return static_cast<int>(it - el.begin());
}

const ConcreteInstance::SymbolInfo ConcreteInstance::kNoInfo{};

void ConcreteInstance::not_state(const Symbol& f) { throw Error(f.full_name() + " is not a state symbol"); }

std::size_t ConcreteInstance::cell(const std::string& f, int node, const std::vector<std::string>& args) const {
  const Symbol& sym = p_->sig.get(f);
  std::vector<int> idx;
  for (std::size_t a = 0; a < args.size(); ++a) {
    auto v = element_index(sym.arg_sorts()[a + 1], args[a]);
    if (!v) throw Error(args[a] + " is not an element of " + sym.arg_sorts()[a + 1].name());
    idx.push_back(*v);
  }
  if (idx.size() + 1 != sym.arity()) throw Error("wrong number of arguments for " + f);
  return cell(sym, node, idx);
}

std::string ConcreteInstance::describe_cell(std::size_t g) const {
  const std::size_t node = g / cells_.size();
  const CellInfo& c = cells_[g % cells_.size()];
  const StateSymbol& ss = state_syms_[c.symbol];
  std::string out = ss.sym.full_name() + "(" + std::to_string(node);
  for (std::size_t a = 0; a < c.args.size(); ++a) out += "," + elements(ss.sym.arg_sorts()[a + 1])[static_cast<std::size_t>(c.args[a])];
  return out + ")";
}

int ConcreteInstance::background(const Symbol& f, std::span<const int> args) const {
  const SymbolInfo& in = info(f);
  const Symbol& base = background_syms_[in.index];
  std::size_t idx = 0;
  for (std::size_t a = 0; a < args.size(); ++a)
    idx = idx * static_cast<std::size_t>(domain_size(base.arg_sorts()[a])) + static_cast<std::size_t>(args[a]);
  return background_tables_[in.index][idx];
}

SExpr ConcreteInstance::state_sexpr(const State& s) const {
  std::vector<SExpr> items{SExpr::make_atom("state")};
  for (std::size_t g = 0; g < s.size(); ++g) {
    if (s[g] < 0) continue;
    const CellInfo& c = cells_[g % cells_.size()];
    const Symbol& sym = state_syms_[c.symbol].sym;
    std::vector<SExpr> row{SExpr::make_atom(sym.full_name()), SExpr::make_atom(std::to_string(g / cells_.size()))};
    for (std::size_t a = 0; a < c.args.size(); ++a)
      row.push_back(SExpr::make_atom(elements(sym.arg_sorts()[a + 1])[static_cast<std::size_t>(c.args[a])]));
    row.push_back(SExpr::make_atom(elements(sym.result_sort())[static_cast<std::size_t>(s[g])]));
    items.push_back(SExpr::make_list(std::move(row)));
  }
  return SExpr::make_list(std::move(items));
}

int StateStructure::apply(const Symbol& f, std::span<const int> args) const {
  for (int a : args)
    if (a < 0) return -1;
  using K = ConcreteInstance::SymbolInfo::Kind;
  const auto& in = inst_.info(f);
  switch (in.kind) {
    case K::kEdge: return inst_.graph().edge_fn(in.index, args[0]);
    case K::kClass: return inst_.graph().class_rel(in.index, args) ? 1 : 0;
    case K::kState: return cur_[inst_.cell(f, args[0], args.subspan(1))];
    case K::kStatePrimed:
      if (!next_) throw Error("primed symbol " + f.full_name() + " in a single-state formula");
      return next_[inst_.cell(f, args[0], args.subspan(1))];
    case K::kBackground: return inst_.background(f, args);
    case K::kNone: break;
  }
  throw Error("symbol " + f.full_name() + " has no concrete interpretation");
}

// ---- enumeration -------------------------------------------------------------

Truth eval_state(const ConcreteInstance& inst, const Formula& sentence, const State& s) {
  return CompiledFormula::compile(sentence, {}).eval(StateStructure(inst, s.data()), {});
}

namespace {

struct Counter {
  std::size_t n = 0;
  std::size_t cap;
  void tick() {
    if (++n > cap) throw StateSpaceTooLarge("state enumeration exceeded " + std::to_string(cap) + " states");
  }
};

// DFS over unassigned cells; the sentence is re-evaluated after each node.
bool dfs(const ConcreteInstance& inst, const CompiledFormula& f, State& s, std::size_t g, Counter& count,
         const std::function<bool(const State&)>& visit) {
  const std::size_t cpn = inst.cells_per_node();
  while (g < s.size() && s[g] >= 0) {
    ++g;
    if (g % cpn == 0 && g < s.size() && f.eval(StateStructure(inst, s.data()), {}) == Truth::kFalse) return true;
  }
  if (g == s.size()) {
    count.tick();
    if (f.eval(StateStructure(inst, s.data()), {}) != Truth::kTrue) return true;
    return visit(s);
  }
  const int values = inst.cell_values(g % cpn);
  for (int v = 0; v < values; ++v) {
    s[g] = v;
    bool boundary = (g + 1) % cpn == 0;
    if (boundary && f.eval(StateStructure(inst, s.data()), {}) == Truth::kFalse) continue;
    if (!dfs(inst, f, s, g + 1, count, visit)) {
      s[g] = -1;
      return false;
    }
  }
  s[g] = -1;
  return true;
}

Formula closed_bad(const Protocol& p) {
  if (!p.bad) throw Error("protocol has no bad-state formula");
  return p.bad->formals.empty() ? p.bad->body : exists(p.bad->formals, p.bad->body);
}

struct StateHash {
  std::size_t operator()(const State& s) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (int v : s) {
      h ^= static_cast<std::uint64_t>(v + 1);
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

std::size_t enumerate_states(const ConcreteInstance& inst, const Formula& sentence, const State& fixed,
                             const std::function<bool(const State&)>& visit, std::size_t cap) {
  CompiledFormula f = CompiledFormula::compile(sentence, {});
  State s = fixed;
  Counter count{0, cap};
  if (inst.cells_per_node() == 0) {
    count.tick();
    if (f.eval(StateStructure(inst, s.data()), {}) == Truth::kTrue) visit(s);
    return count.n;
  }
  if (f.eval(StateStructure(inst, s.data()), {}) != Truth::kFalse) dfs(inst, f, s, 0, count, visit);
  return count.n;
}

namespace {

struct StepContext {
  const ConcreteInstance& inst;
  CompiledFormula trloc;
  std::vector<std::size_t> cells;  // cells of the Mod nodes, in order
};

void step_dfs(StepContext& ctx, const State& cur, State& next, std::size_t i, int actor, std::vector<State>& out) {
  const int slot[1] = {actor};
  Truth t = ctx.trloc.eval(StateStructure(ctx.inst, cur.data(), next.data()), slot);
  if (t == Truth::kFalse) return;
  if (i == ctx.cells.size()) {
    if (t == Truth::kTrue) out.push_back(next);
    return;
  }
  const std::size_t g = ctx.cells[i];
  const int values = ctx.inst.cell_values(g % ctx.inst.cells_per_node());
  for (int v = 0; v < values; ++v) {
    next[g] = v;
    step_dfs(ctx, cur, next, i + 1, actor, out);
  }
  next[g] = -1;
}

std::vector<int> mod_nodes(const ConcreteInstance& inst, int actor) {
  const Protocol& p = inst.protocol();
  std::set<int> nodes;
  for (const auto& t : p.mod) nodes.insert(eval_term(inst.graph(), t, {{p.actor.name, actor}}));
  return {nodes.begin(), nodes.end()};
}

}  // namespace

namespace {

void successors_into(StepContext& ctx, const std::vector<int>& mod, const State& s, int actor,
                     std::vector<State>& out) {
  State next = s;
  const std::size_t cpn = ctx.inst.cells_per_node();
  ctx.cells.clear();
  for (int n : mod)
    for (std::size_t c = 0; c < cpn; ++c) {
      std::size_t g = static_cast<std::size_t>(n) * cpn + c;
      next[g] = -1;
      ctx.cells.push_back(g);
    }
  out.clear();
  step_dfs(ctx, s, next, 0, actor, out);
}

}  // namespace

std::vector<State> successors(const ConcreteInstance& inst, const State& s, int actor) {
  const Protocol& p = inst.protocol();
  StepContext ctx{inst, CompiledFormula::compile(p.trloc, {p.actor}), {}};
  std::vector<State> out;
  successors_into(ctx, mod_nodes(inst, actor), s, actor, out);
  return out;
}

bool step_holds(const ConcreteInstance& inst, const State& pre, const State& post, int actor) {
  const Protocol& p = inst.protocol();
  Formula step = conj({p.trloc, build_frame(p)});
  const int slot[1] = {actor};
  return CompiledFormula::compile(step, {p.actor}).eval(StateStructure(inst, pre.data(), post.data()), slot) ==
         Truth::kTrue;
}

namespace {

// ∀p⃗· ⋀_Top Top(p⃗) ⟹ F_Top(p⃗), evaluated over the tuples where each class
// holds. Bodies without Proc quantifiers only read their own tuple's nodes,
// which lets the search check each tuple once and steps re-check only the
// tuples they touch.
class ClassConstraint {
 public:
  ClassConstraint(const ConcreteInstance& inst, const PerClass& per_class) : inst_(inst) {
    const auto& fam = *inst.protocol().family;
    const int k = fam.arity();
    const int n = inst.nodes();
    for (std::size_t c = 0; c < fam.class_preds().size(); ++c) {
      const ClassFormula* f = per_class.find(fam.class_preds()[c]);
      if (!f || f->body.is(Formula::Kind::kTrue)) continue;
      Entry e;
      e.formula = CompiledFormula::compile(f->body, f->formals);
      local_ = local_ && !binds_sort(f->body, Sort::proc());
      std::vector<int> t(static_cast<std::size_t>(k), 0);
      std::size_t total = 1;
      for (int i = 0; i < k; ++i) total *= static_cast<std::size_t>(n);
      for (std::size_t m = 0; m < total; ++m) {
        std::size_t rest = m;
        for (int i = k; i-- > 0;) {
          t[static_cast<std::size_t>(i)] = static_cast<int>(rest % static_cast<std::size_t>(n));
          rest /= static_cast<std::size_t>(n);
        }
        if (inst.graph().class_rel(c, t)) e.tuples.push_back(t);
      }
      entries_.push_back(std::move(e));
    }
    by_last_.assign(static_cast<std::size_t>(n), {});
    touching_.assign(static_cast<std::size_t>(n), {});
    for (std::size_t ei = 0; ei < entries_.size(); ++ei)
      for (std::size_t ti = 0; ti < entries_[ei].tuples.size(); ++ti) {
        const auto& t = entries_[ei].tuples[ti];
        by_last_[static_cast<std::size_t>(*std::max_element(t.begin(), t.end()))].push_back({ei, ti});
        std::set<int> nodes(t.begin(), t.end());
        for (int v : nodes) touching_[static_cast<std::size_t>(v)].push_back({ei, ti});
      }
  }

  bool local() const { return local_; }

  Truth eval_all(const State& s) const {
    Truth acc = Truth::kTrue;
    for (std::size_t ei = 0; ei < entries_.size(); ++ei)
      for (std::size_t ti = 0; ti < entries_[ei].tuples.size(); ++ti) {
        Truth t = eval(s, ei, ti);
        if (t == Truth::kFalse) return t;
        if (t == Truth::kUnknown) acc = t;
      }
    return acc;
  }

  // Tuples whose greatest node is `node` (all assigned once `node` is).
  Truth eval_completed(const State& s, int node) const {
    if (!local_) return eval_all(s);
    return eval_list(s, by_last_[static_cast<std::size_t>(node)]);
  }

  // Assuming the constraint held before the `changed` nodes were rewritten.
  Truth eval_changed(const State& s, const std::vector<int>& changed) const {
    if (!local_) return eval_all(s);
    for (int v : changed)
      if (eval_list(s, touching_[static_cast<std::size_t>(v)]) == Truth::kFalse) return Truth::kFalse;
    return Truth::kTrue;
  }

 private:
  struct Entry {
    CompiledFormula formula;
    std::vector<std::vector<int>> tuples;
  };
  using Ref = std::pair<std::size_t, std::size_t>;

  Truth eval(const State& s, std::size_t ei, std::size_t ti) const {
    return entries_[ei].formula.eval(StateStructure(inst_, s.data()), entries_[ei].tuples[ti]);
  }
  Truth eval_list(const State& s, const std::vector<Ref>& refs) const {
    Truth acc = Truth::kTrue;
    for (const auto& [ei, ti] : refs) {
      Truth t = eval(s, ei, ti);
      if (t == Truth::kFalse) return t;
      if (t == Truth::kUnknown) acc = t;
    }
    return acc;
  }

  const ConcreteInstance& inst_;
  std::vector<Entry> entries_;
  bool local_ = true;
  std::vector<std::vector<Ref>> by_last_;
  std::vector<std::vector<Ref>> touching_;
};

// Node-by-node search over the unassigned cells of `s`.
bool class_dfs(const ConcreteInstance& inst, const ClassConstraint& cc, State& s, int node, Counter& count,
               const std::function<bool(const State&)>& visit) {
  if (node == inst.nodes()) {
    count.tick();
    if (!cc.local() && cc.eval_all(s) != Truth::kTrue) return true;
    return visit(s);
  }
  const std::size_t cpn = inst.cells_per_node();
  const std::size_t base = static_cast<std::size_t>(node) * cpn;
  std::vector<std::size_t> free;
  for (std::size_t c = 0; c < cpn; ++c)
    if (s[base + c] < 0) free.push_back(base + c);
  for (std::size_t g : free) s[g] = 0;
  auto advance = [&] {
    for (std::size_t i = free.size(); i-- > 0;) {
      const std::size_t g = free[i];
      if (++s[g] < inst.cell_values(g % cpn)) return true;
      s[g] = 0;
    }
    return false;
  };
  do {
    if (cc.eval_completed(s, node) != Truth::kFalse && !class_dfs(inst, cc, s, node + 1, count, visit)) {
      for (std::size_t g : free) s[g] = -1;
      return false;
    }
  } while (advance());
  for (std::size_t g : free) s[g] = -1;
  return true;
}

std::size_t enumerate_class_states(const ConcreteInstance& inst, const ClassConstraint& cc, const State& fixed,
                                   const std::function<bool(const State&)>& visit, std::size_t cap) {
  State s = fixed;
  Counter count{0, cap};
  class_dfs(inst, cc, s, 0, count, visit);
  return count.n;
}

std::vector<int> changed_nodes(const ConcreteInstance& inst, const State& a, const State& b,
                               const std::vector<int>& candidates) {
  std::vector<int> out;
  const std::size_t cpn = inst.cells_per_node();
  for (int n : candidates)
    for (std::size_t c = 0; c < cpn; ++c)
      if (a[static_cast<std::size_t>(n) * cpn + c] != b[static_cast<std::size_t>(n) * cpn + c]) {
        out.push_back(n);
        break;
      }
  return out;
}

}  // namespace

ConcreteVerdict check_invok_concrete(const ConcreteInstance& inst, const CandidateInvariant& inv, std::size_t cap) {
  const Protocol& p = inst.protocol();
  ConcreteVerdict v;
  const ClassConstraint inv_c(inst, inv.per_class);
  const ClassConstraint init_c(inst, p.init);
  // (a) initiation
  v.states_explored += enumerate_class_states(
      inst, init_c, inst.empty_state(),
      [&](const State& s) {
        if (inv_c.eval_all(s) == Truth::kTrue) return true;
        v.invok_holds = false;
        v.failed_part = "init";
        v.trace = {{s, -1}};
        return false;
      },
      cap);
  if (!v.invok_holds) return v;
  // (b) consecution from every Inv-state
  StepContext ctx{inst, CompiledFormula::compile(p.trloc, {p.actor}), {}};
  std::vector<std::vector<int>> mods;
  for (int a = 0; a < inst.nodes(); ++a) mods.push_back(mod_nodes(inst, a));
  std::vector<State> succ;
  v.states_explored += enumerate_class_states(
      inst, inv_c, inst.empty_state(),
      [&](const State& s) {
        for (int a = 0; a < inst.nodes(); ++a) {
          const auto& mod = mods[static_cast<std::size_t>(a)];
          successors_into(ctx, mod, s, a, succ);
          for (const auto& t : succ) {
            auto changed = changed_nodes(inst, s, t, mod);
            if (changed.empty() || inv_c.eval_changed(t, changed) == Truth::kTrue) continue;
            v.invok_holds = false;
            v.failed_part = "step";
            v.trace = {{s, -1}, {t, a}};
            return false;
          }
        }
        return true;
      },
      cap);
  return v;
}

ConcreteVerdict check_bad_reachability(const ConcreteInstance& inst, std::size_t cap) {
  const Protocol& p = inst.protocol();
  const CompiledFormula bad = CompiledFormula::compile(closed_bad(p), {});
  ConcreteVerdict v;
  std::vector<State> states;
  std::vector<std::pair<std::size_t, int>> parent;  // (index, actor)
  std::unordered_map<State, std::size_t, StateHash> seen;
  auto trace_to = [&](std::size_t i) {
    std::vector<TraceStep> tr;
    for (std::size_t cur = i;; cur = parent[cur].first) {
      tr.push_back({states[cur], parent[cur].second});
      if (parent[cur].second < 0) break;
    }
    std::reverse(tr.begin(), tr.end());
    return tr;
  };
  std::deque<std::size_t> queue;
  auto add = [&](const State& s, std::size_t from, int actor) -> bool {
    if (seen.contains(s)) return false;
    if (states.size() >= cap) throw StateSpaceTooLarge("reachable states exceed " + std::to_string(cap));
    seen.emplace(s, states.size());
    states.push_back(s);
    parent.emplace_back(from, actor);
    queue.push_back(states.size() - 1);
    if (bad.eval(StateStructure(inst, s.data()), {}) == Truth::kTrue) {
      v.bad_reachable = true;
      v.trace = trace_to(states.size() - 1);
      return true;
    }
    return false;
  };
  const ClassConstraint init_c(inst, p.init);
  enumerate_class_states(
      inst, init_c, inst.empty_state(), [&](const State& s) { return !add(s, 0, -1); }, cap);
  StepContext ctx{inst, CompiledFormula::compile(p.trloc, {p.actor}), {}};
  std::vector<std::vector<int>> mods;
  for (int a = 0; a < inst.nodes(); ++a) mods.push_back(mod_nodes(inst, a));
  std::vector<State> succ;
  while (!v.bad_reachable && !queue.empty()) {
    std::size_t i = queue.front();
    queue.pop_front();
    for (int a = 0; a < inst.nodes() && !v.bad_reachable; ++a) {
      const State cur = states[i];
      successors_into(ctx, mods[static_cast<std::size_t>(a)], cur, a, succ);
      for (const auto& t : succ)
        if (add(t, i, a)) break;
    }
  }
  v.states_explored = states.size();
  return v;
}

CompletionResult check_completable(const ConcreteInstance& inst, const PerClass& per_class, const State& partial,
                                   std::size_t cap) {
  const ClassConstraint cc(inst, per_class);
  CompletionResult r;
  if (cc.eval_all(partial) == Truth::kFalse) return r;
  r.explored = enumerate_class_states(
      inst, cc, partial,
      [&](const State& s) {
        r.completable = true;
        r.completion = s;
        return false;
      },
      cap);
  return r;
}

}  // namespace fop
