#include "fop/topology.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "fop/error.hpp"
#include "fop/text.hpp"

namespace fop {

// ---- ConcreteGraph ---------------------------------------------------------

ConcreteGraph::ConcreteGraph(std::vector<Symbol> edge_labels, std::vector<Symbol> classes, int arity, int size,
                             std::vector<Edge> edges)
    : labels_(std::move(edge_labels)),
      classes_(std::move(classes)),
      arity_(arity),
      size_(size),
      edges_(std::move(edges)) {
  succ_.assign(labels_.size(), std::vector<int>(static_cast<std::size_t>(size_)));
  for (auto& row : succ_)
    for (int i = 0; i < size_; ++i) row[static_cast<std::size_t>(i)] = i;
  // First edge per (node, label) defines the edge function; duplicates are
  // kept in edges_ so check_deterministic can report them.
  std::vector<std::vector<bool>> seen(labels_.size(), std::vector<bool>(static_cast<std::size_t>(size_)));
  for (const auto& e : edges_) {
    if (e.label >= labels_.size() || e.from < 0 || e.from >= size_ || e.to < 0 || e.to >= size_)
      throw Error("edge out of range");
    if (seen[e.label][static_cast<std::size_t>(e.from)]) continue;
    seen[e.label][static_cast<std::size_t>(e.from)] = true;
    succ_[e.label][static_cast<std::size_t>(e.from)] = e.to;
  }
  std::size_t tuples = 1;
  for (int i = 0; i < arity_; ++i) tuples *= static_cast<std::size_t>(size_);
  rel_.assign(classes_.size(), std::vector<std::uint8_t>(tuples, 0));
}

std::optional<std::size_t> ConcreteGraph::label_index(const Symbol& s) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == s) return i;
  return std::nullopt;
}

std::optional<std::size_t> ConcreteGraph::class_index(const Symbol& s) const {
  for (std::size_t i = 0; i < classes_.size(); ++i)
    if (classes_[i] == s) return i;
  return std::nullopt;
}

int ConcreteGraph::edge_fn(const Symbol& label, int node) const {
  auto i = label_index(label);
  if (!i) throw Error("'" + label.full_name() + "' is not an edge label of this graph");
  return edge_fn(*i, node);
}

bool ConcreteGraph::class_rel(const Symbol& cls, std::span<const int> tuple) const {
  auto i = class_index(cls);
  if (!i) throw Error("'" + cls.full_name() + "' is not a class of this graph");
  if (tuple.size() != static_cast<std::size_t>(arity_)) throw Error("class tuple has wrong arity");
  return class_rel(*i, tuple);
}

int GraphStructure::domain_size(const Sort& s) const { return s.is_proc() ? g_.size() : 0; }

int GraphStructure::apply(const Symbol& f, std::span<const int> args) const {
  if (auto i = g_.label_index(f)) return g_.edge_fn(*i, args[0]);
  if (auto i = g_.class_index(f)) return g_.class_rel(*i, args) ? 1 : 0;
  throw Error("symbol '" + f.full_name() + "' is not topological");
}

// ---- families --------------------------------------------------------------

TopologyFamily::TopologyFamily(Spec spec) : spec_(std::move(spec)) {
  if (spec_.class_preds.empty()) throw Error("topology family needs at least one class");
  arity_ = static_cast<int>(spec_.class_preds.front().arity());
  for (const auto& c : spec_.class_preds) {
    check_section_rule(c);
    if (c.section() != Section::kTopoClass || static_cast<int>(c.arity()) != arity_)
      throw SectionError("class predicates of a family must share one arity");
  }
  for (const auto& e : spec_.edge_labels) {
    check_section_rule(e);
    if (e.section() != Section::kTopoEdge) throw SectionError("edge label must be a topo-edge symbol");
  }
  if (arity_ < 1) throw Error("class arity must be at least 1");
}

ConcreteGraph TopologyFamily::generate(int param) const {
  if (param < spec_.min_param || param > spec_.max_param)
    throw Error("instance parameter " + std::to_string(param) + " out of range for " + spec_.name);
  return spec_.generate(param);
}

std::shared_ptr<const ConcreteGraph> TopologyFamily::instance(int param) const {
  {
    std::lock_guard lock(mu_);
    if (auto it = cache_.find(param); it != cache_.end()) return it->second;
  }
  auto g = std::make_shared<const ConcreteGraph>(generate(param));
  std::lock_guard lock(mu_);
  return cache_.emplace(param, std::move(g)).first->second;
}

std::vector<int> TopologyFamily::params_up_to(int node_bound) const {
  std::vector<int> out;
  for (int p = spec_.min_param; p <= spec_.max_param && size_of(p) <= node_bound; ++p) out.push_back(p);
  return out;
}

std::vector<int> TopologyFamily::orbit_representatives(int size) const {
  if (spec_.orbit_representatives) return spec_.orbit_representatives(size);
  std::vector<int> all(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) all[static_cast<std::size_t>(i)] = i;
  return all;
}

void TopologyFamily::declare_into(Signature& sig) const {
  for (const auto& e : spec_.edge_labels) sig.declare(e);
  for (const auto& c : spec_.class_preds) sig.declare(c);
}

const Symbol* TopologyFamily::find_symbol(std::string_view name) const {
  for (const auto& e : spec_.edge_labels)
    if (e.name() == name) return &e;
  for (const auto& c : spec_.class_preds)
    if (c.name() == name) return &c;
  return nullptr;
}

namespace {

Symbol edge(const char* name) {
  return Symbol::function(name, {Sort::proc()}, Sort::proc(), Section::kTopoEdge);
}

Symbol cls(const char* name, int arity) {
  return Symbol::predicate(name, std::vector<Sort>(static_cast<std::size_t>(arity), Sort::proc()),
                           Section::kTopoClass);
}

std::shared_ptr<const TopologyFamily> make_rbr() {
  TopologyFamily::Spec s;
  s.name = "rbr";
  s.edge_labels = {edge("left"), edge("right")};
  s.class_preds = {cls("Red", 1), cls("Black", 1)};
  s.min_param = 2;
  s.size_of = [](int n) { return 2 * n; };
  s.generate = [labels = s.edge_labels, classes = s.class_preds](int n) {
    const int size = 2 * n;
    std::vector<ConcreteGraph::Edge> edges;
    for (int i = 0; i < size; ++i) {
      edges.push_back({i, (i + size - 1) % size, 0});
      edges.push_back({i, (i + 1) % size, 1});
    }
    ConcreteGraph g(labels, classes, 1, size, std::move(edges));
    for (int i = 0; i < size; ++i) {
      const int t[] = {i};
      g.set_class(i % 2 == 0 ? 0 : 1, t, true);
    }
    return g;
  };
  // Rotation by two preserves labels and colours.
  s.orbit_representatives = [](int) { return std::vector<int>{0, 1}; };
  return std::make_shared<const TopologyFamily>(std::move(s));
}

std::shared_ptr<const TopologyFamily> make_uniring() {
  TopologyFamily::Spec s;
  s.name = "uniring";
  s.edge_labels = {edge("next")};
  s.class_preds = {cls("Node", 1)};
  s.min_param = 3;
  s.size_of = [](int n) { return n; };
  s.generate = [labels = s.edge_labels, classes = s.class_preds](int n) {
    std::vector<ConcreteGraph::Edge> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, 0});
    ConcreteGraph g(labels, classes, 1, n, std::move(edges));
    for (int i = 0; i < n; ++i) {
      const int t[] = {i};
      g.set_class(0, t, true);
    }
    return g;
  };
  s.orbit_representatives = [](int) { return std::vector<int>{0}; };
  return std::make_shared<const TopologyFamily>(std::move(s));
}

std::shared_ptr<const TopologyFamily> make_btw() {
  TopologyFamily::Spec s;
  s.name = "btw";
  s.edge_labels = {edge("next")};
  s.class_preds = {cls("btw", 3)};
  s.min_param = 3;
  s.size_of = [](int n) { return n; };
  s.generate = [labels = s.edge_labels, classes = s.class_preds](int n) {
    std::vector<ConcreteGraph::Edge> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, 0});
    ConcreteGraph g(labels, classes, 3, n, std::move(edges));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const bool b = (i < j && j < k) || (j < k && k < i) || (k < i && i < j);
          const int t[] = {i, j, k};
          if (b) g.set_class(0, t, true);
        }
    return g;
  };
  s.orbit_representatives = [](int) { return std::vector<int>{0}; };
  return std::make_shared<const TopologyFamily>(std::move(s));
}

}  // namespace

const std::vector<std::shared_ptr<const TopologyFamily>>& builtin_families() {
  static const std::vector<std::shared_ptr<const TopologyFamily>> all = {make_rbr(), make_uniring(), make_btw()};
  return all;
}

std::shared_ptr<const TopologyFamily> find_family(std::string_view name) {
  for (const auto& f : builtin_families())
    if (f->name() == name) return f;
  return nullptr;
}

int eval_term(const ConcreteGraph& g, const Term& t, const std::map<std::string, int>& asg) {
  if (t.is_var()) {
    auto it = asg.find(t.var_name());
    if (it == asg.end()) throw Error("variable '" + t.var_name() + "' is unassigned");
    return it->second;
  }
  if (t.args().size() != 1) throw Error("'" + t.symbol().full_name() + "' is not an edge function");
  return g.edge_fn(t.symbol(), eval_term(g, t.args()[0], asg));
}

void check_deterministic(const ConcreteGraph& g, int param) {
  for (int p = 0; p < g.size(); ++p) {
    std::map<std::size_t, int> target_of_label;
    std::map<int, std::size_t> label_of_target;
    for (const auto& e : g.edges()) {
      if (e.from != p || e.to == p) continue;
      auto [lt, fresh_label] = target_of_label.emplace(e.label, e.to);
      if (!fresh_label && lt->second != e.to)
        throw NonDeterministicTopology("node " + std::to_string(p) + " has two '" +
                                           g.edge_labels()[e.label].full_name() + "' edges",
                                       p, g.size());
      auto [tl, fresh_target] = label_of_target.emplace(e.to, e.label);
      if (!fresh_target && tl->second != e.label)
        throw NonDeterministicTopology("neighbour " + std::to_string(e.to) + " of node " + std::to_string(p) +
                                           " is reachable by two labels",
                                       p, g.size());
    }
    for (const auto& [target, label] : label_of_target)
      if (g.edge_fn(label, p) != target)
        throw NonDeterministicTopology("edge function disagrees with edge list at node " + std::to_string(p), p,
                                       g.size());
  }
  (void)param;
}

void check_deterministic(const TopologyFamily& fam, int min_param, int max_param) {
  for (int n = std::max(min_param, fam.min_param()); n <= std::min(max_param, fam.max_param()); ++n)
    check_deterministic(*fam.instance(n), n);
}

// ---- queries ---------------------------------------------------------------

std::string GroundQuery::key() const {
  std::vector<std::string> lits;
  for (const auto& l : literals) lits.push_back(to_text(l));
  std::sort(lits.begin(), lits.end());
  std::string out = "(query (";
  for (std::size_t i = 0; i < vars.size(); ++i) out += (i ? " " : "") + vars[i].name;
  out += ")";
  for (const auto& l : lits) out += " " + l;
  out += ")";
  return out;
}

namespace {

void vars_in_order(const Term& t, std::vector<Var>& out) {
  if (t.is_var()) {
    if (std::find(out.begin(), out.end(), t.as_var()) == out.end()) out.push_back(t.as_var());
    return;
  }
  for (const auto& a : t.args()) vars_in_order(a, out);
}

void flatten_literals(const Formula& f, std::vector<Formula>& out) {
  if (f.is(Formula::Kind::kAnd)) {
    for (const auto& k : f.children()) flatten_literals(k, out);
  } else if (!f.is(Formula::Kind::kTrue)) {
    out.push_back(f);
  }
}

int depth(const Term& t) { return t.is_var() ? 0 : 1 + (t.args().empty() ? 0 : depth(t.args()[0])); }

void validate_query(const TopologyFamily& fam, const GroundQuery& q) {
  for (const auto& l : q.literals) {
    if (!l.is_literal() && !l.is(Formula::Kind::kFalse))
      throw Error("oracle queries must be conjunctions of literals: " + to_text(l));
    const Formula& a = l.is(Formula::Kind::kNot) ? l.body() : l;
    for (const auto& s : symbols_of(a))
      if (!fam.find_symbol(s.full_name())) throw Error("symbol '" + s.full_name() + "' is not topological");
    if (a.is(Formula::Kind::kAtom) && !fam.find_symbol(a.predicate().full_name()))
      throw Error("'" + a.predicate().full_name() + "' is not a class of " + fam.name());
    for (const auto& t : a.terms()) {
      if (!t.sort().is_proc()) throw Error("query terms must be of sort Proc");
      if (depth(t) > q.max_depth)
        throw Error("term " + to_text(t) + " exceeds the query nesting depth " + std::to_string(q.max_depth));
    }
    for (const auto& v : free_vars(a))
      if (std::find(q.vars.begin(), q.vars.end(), v) == q.vars.end())
        throw Error("query variable '" + v.name + "' is not declared");
  }
}

}  // namespace

GroundQuery GroundQuery::parse(const TopologyFamily& fam, std::string_view text) {
  Signature sig;
  fam.declare_into(sig);
  ParseScope scope;
  scope.implicit_proc_vars = true;
  GroundQuery q;
  flatten_literals(parse_formula(text, sig, scope), q.literals);
  for (const auto& l : q.literals) {
    const Formula& a = l.is(Formula::Kind::kNot) ? l.body() : l;
    for (const auto& t : a.terms()) vars_in_order(t, q.vars);
    if (!l.is_literal() && !l.is(Formula::Kind::kFalse))
      throw Error("oracle queries must be conjunctions of literals");
  }
  int deepest = 1;
  for (const auto& l : q.literals) {
    const Formula& a = l.is(Formula::Kind::kNot) ? l.body() : l;
    for (const auto& t : a.terms()) deepest = std::max(deepest, depth(t));
  }
  q.max_depth = deepest;
  return q;
}

// ---- oracle ----------------------------------------------------------------

namespace {

OracleVerdict search_impl(const TopologyFamily& fam, const GroundQuery& q, int bound) {
  validate_query(fam, q);
  OracleVerdict v;
  v.bound_used = bound;
  CompiledFormula all = CompiledFormula::compile(Formula::conjunction(q.literals), q.vars);
  const std::size_t n = q.vars.size();
  for (int param : fam.params_up_to(bound)) {
    auto g = fam.instance(param);
    GraphStructure gs(*g);
    std::vector<int> asg(n, -1);
    const std::vector<int> reps = fam.orbit_representatives(g->size());
    // Depth-first over variables with three-valued pruning.
    std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
      Truth t = all.eval(gs, asg);
      if (t == Truth::kFalse) return false;
      if (i == n) return t == Truth::kTrue;
      auto try_value = [&](int node) {
        asg[i] = node;
        if (go(i + 1)) return true;
        asg[i] = -1;
        return false;
      };
      if (i == 0) {
        for (int r : reps)
          if (try_value(r)) return true;
      } else {
        for (int node = 0; node < g->size(); ++node)
          if (try_value(node)) return true;
      }
      return false;
    };
    if (go(0)) {
      v.realizable = true;
      v.witness = Witness{param, g->size(), asg};
      return v;
    }
  }
  return v;
}

struct TermPath {
  std::size_t var;
  std::vector<std::size_t> labels;  // applied innermost first
};

TermPath path_of(const TopologyFamily& fam, const Term& t, const std::vector<Var>& vars) {
  TermPath p;
  const Term* cur = &t;
  std::vector<std::size_t> outer_first;
  while (!cur->is_var()) {
    if (cur->args().size() != 1) throw Error("term " + to_text(t) + " is not an edge path");
    const auto& labels = fam.edge_labels();
    auto it = std::find(labels.begin(), labels.end(), cur->symbol());
    if (it == labels.end()) throw Error("'" + cur->symbol().full_name() + "' is not an edge label");
    outer_first.push_back(static_cast<std::size_t>(it - labels.begin()));
    cur = &cur->args()[0];
  }
  auto vit = std::find(vars.begin(), vars.end(), cur->as_var());
  if (vit == vars.end()) throw Error("term " + to_text(t) + " uses an undeclared variable");
  p.var = static_cast<std::size_t>(vit - vars.begin());
  p.labels.assign(outer_first.rbegin(), outer_first.rend());
  return p;
}

}  // namespace

std::size_t DescriptionSet::tuple_count() const {
  std::size_t n = 1;
  for (int i = 0; i < arity; ++i) n *= terms.size();
  return n;
}

std::vector<int> DescriptionSet::tuple(std::size_t i) const {
  std::vector<int> out(static_cast<std::size_t>(arity));
  for (int k = arity - 1; k >= 0; --k) {
    out[static_cast<std::size_t>(k)] = static_cast<int>(i % terms.size());
    i /= terms.size();
  }
  return out;
}

Oracle::Oracle(std::shared_ptr<const TopologyFamily> fam, int bound) : fam_(std::move(fam)), bound_(bound) {
  if (!fam_) throw Error("oracle needs a topology family");
  if (bound_ < 1) throw Error("oracle bound must be positive");
}

OracleVerdict Oracle::search(const GroundQuery& q) const { return search_impl(*fam_, q, bound_); }

OracleVerdict Oracle::realizable(const GroundQuery& q) {
  const std::string key = q.key();
  {
    std::lock_guard lock(mu_);
    ++calls_;
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  }
  OracleVerdict v = search(q);
  std::lock_guard lock(mu_);
  auto [it, inserted] = memo_.emplace(key, v);
  if (inserted) {
    queries_.push_back(q);
    log_.push_back({key, v.realizable ? "realizable" : "unrealizable", bound_});
  }
  return it->second;
}

DescriptionSet Oracle::sweep(const std::vector<Term>& terms, const std::vector<Var>& vars) const {
  DescriptionSet out;
  out.terms = terms;
  out.vars = vars;
  out.arity = fam_->arity();
  out.class_count = fam_->class_preds().size();
  out.bound_used = bound_;
  std::vector<TermPath> paths;
  for (const auto& t : terms) paths.push_back(path_of(*fam_, t, vars));
  const std::size_t tuples = out.tuple_count();
  std::vector<std::vector<int>> tuple_terms(tuples);
  for (std::size_t i = 0; i < tuples; ++i) tuple_terms[i] = out.tuple(i);

  using Key = std::pair<std::vector<int>, std::vector<std::uint8_t>>;
  std::map<Key, Witness> found;
  std::vector<int> nodes(terms.size());
  std::vector<int> tuple_nodes(static_cast<std::size_t>(out.arity));
  for (int param : fam_->params_up_to(bound_)) {
    auto g = fam_->instance(param);
    std::vector<int> asg(vars.size(), 0);
    const std::vector<int> reps = fam_->orbit_representatives(g->size());
    auto record = [&] {
      for (std::size_t i = 0; i < terms.size(); ++i) {
        int node = asg[paths[i].var];
        for (std::size_t l : paths[i].labels) node = g->edge_fn(l, node);
        nodes[i] = node;
      }
      Key key;
      key.first.resize(terms.size());
      for (std::size_t i = 0; i < terms.size(); ++i) {
        std::size_t j = 0;
        while (nodes[j] != nodes[i]) ++j;
        key.first[i] = static_cast<int>(j);
      }
      key.second.resize(out.class_count * tuples);
      for (std::size_t c = 0; c < out.class_count; ++c)
        for (std::size_t t = 0; t < tuples; ++t) {
          for (std::size_t k = 0; k < tuple_nodes.size(); ++k)
            tuple_nodes[k] = nodes[static_cast<std::size_t>(tuple_terms[t][k])];
          key.second[c * tuples + t] = g->class_rel(c, tuple_nodes) ? 1 : 0;
        }
      found.try_emplace(std::move(key), Witness{param, g->size(), asg});
    };
    std::function<void(std::size_t)> go = [&](std::size_t i) {
      if (i == vars.size()) {
        record();
        return;
      }
      if (i == 0) {
        for (int r : reps) {
          asg[0] = r;
          go(1);
        }
      } else {
        for (int node = 0; node < g->size(); ++node) {
          asg[i] = node;
          go(i + 1);
        }
      }
    };
    go(0);
  }
  for (auto& [key, w] : found) out.items.push_back(LocalDescription{key.first, key.second, w});
  return out;
}

DescriptionSet Oracle::describe(const std::vector<Term>& terms, const std::vector<Var>& vars) {
  std::string key = "(describe (";
  for (std::size_t i = 0; i < terms.size(); ++i) key += (i ? " " : "") + to_text(terms[i]);
  key += ") (";
  for (std::size_t i = 0; i < vars.size(); ++i) key += (i ? " " : "") + vars[i].name;
  key += "))";
  {
    std::lock_guard lock(mu_);
    ++calls_;
    if (auto it = describe_memo_.find(key); it != describe_memo_.end()) return it->second;
  }
  DescriptionSet d = sweep(terms, vars);
  std::lock_guard lock(mu_);
  auto [it, inserted] = describe_memo_.emplace(key, d);
  if (inserted) {
    describes_.emplace_back(terms, vars);
    log_.push_back({key, std::to_string(d.items.size()) + " descriptions", bound_});
  }
  return it->second;
}

std::size_t Oracle::query_count() const {
  std::lock_guard lock(mu_);
  return calls_;
}

std::size_t Oracle::distinct_queries() const {
  std::lock_guard lock(mu_);
  return memo_.size() + describe_memo_.size();
}

std::vector<OracleLogEntry> Oracle::log() const {
  std::lock_guard lock(mu_);
  return log_;
}

std::vector<GroundQuery> Oracle::issued_queries() const {
  std::lock_guard lock(mu_);
  return queries_;
}

std::vector<std::pair<std::vector<Term>, std::vector<Var>>> Oracle::issued_describes() const {
  std::lock_guard lock(mu_);
  return describes_;
}

void Oracle::write_log(std::ostream& os) const {
  for (const auto& e : log())
    os << "(oracle " << e.query << " " << e.verdict.substr(0, e.verdict.find(' ')) << " (bound " << e.bound
       << "))\n";
}

OracleVerdict realizable(const TopologyFamily& fam, const GroundQuery& q, int bound) {
  return search_impl(fam, q, bound);
}

}  // namespace fop
