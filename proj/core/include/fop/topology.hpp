// Topology families and the enumeration-based realizability oracle.

#ifndef FOP_TOPOLOGY_HPP
#define FOP_TOPOLOGY_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fop/eval.hpp"
#include "fop/fol.hpp"

namespace fop {

// A labelled directed graph with nodes 0..size-1 and class relations.
class ConcreteGraph {
 public:
  struct Edge {
    int from;
    int to;
    std::size_t label;
  };

  ConcreteGraph(std::vector<Symbol> edge_labels, std::vector<Symbol> classes, int arity, int size,
                std::vector<Edge> edges);

  int size() const { return size_; }
  int arity() const { return arity_; }
  const std::vector<Symbol>& edge_labels() const { return labels_; }
  const std::vector<Symbol>& classes() const { return classes_; }
  const std::vector<Edge>& edges() const { return edges_; }

  // Target of the label-`label` edge from `node`, or `node` itself when none.
  int edge_fn(std::size_t label, int node) const { return succ_[label][node]; }
  int edge_fn(const Symbol& label, int node) const;
  bool class_rel(std::size_t cls, std::span<const int> tuple) const { return rel_[cls][index(tuple)] != 0; }
  bool class_rel(const Symbol& cls, std::span<const int> tuple) const;
  void set_class(std::size_t cls, std::span<const int> tuple, bool value) { rel_[cls][index(tuple)] = value; }

  std::optional<std::size_t> label_index(const Symbol& s) const;
  std::optional<std::size_t> class_index(const Symbol& s) const;

 private:
  std::size_t index(std::span<const int> tuple) const {
    std::size_t i = 0;
    for (int v : tuple) i = i * static_cast<std::size_t>(size_) + static_cast<std::size_t>(v);
    return i;
  }

  std::vector<Symbol> labels_;
  std::vector<Symbol> classes_;
  int arity_;
  int size_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> succ_;
  std::vector<std::vector<std::uint8_t>> rel_;
};

// Presents a graph as a structure over the topological signature. Symbols
// outside it are rejected.
class GraphStructure : public Structure {
 public:
  explicit GraphStructure(const ConcreteGraph& g) : g_(g) {}
  int domain_size(const Sort& s) const override;
  int apply(const Symbol& f, std::span<const int> args) const override;

 private:
  const ConcreteGraph& g_;
};

class TopologyFamily {
 public:
  struct Spec {
    std::string name;
    std::vector<Symbol> edge_labels;
    std::vector<Symbol> class_preds;
    int min_param = 1;
    int max_param = 1 << 20;
    std::function<int(int)> size_of;  // node count of instance `param`
    std::function<ConcreteGraph(int)> generate;
    // Nodes covering every orbit of the instance's automorphism group; all
    // nodes when unset.
    std::function<std::vector<int>(int size)> orbit_representatives;
  };

  explicit TopologyFamily(Spec spec);

  const std::string& name() const { return spec_.name; }
  const std::vector<Symbol>& edge_labels() const { return spec_.edge_labels; }
  const std::vector<Symbol>& class_preds() const { return spec_.class_preds; }
  int arity() const { return arity_; }
  int min_param() const { return spec_.min_param; }
  int max_param() const { return spec_.max_param; }
  int size_of(int param) const { return spec_.size_of(param); }

  ConcreteGraph generate(int param) const;
  // Cached instance; safe for concurrent use.
  std::shared_ptr<const ConcreteGraph> instance(int param) const;
  // Instance parameters whose node count is at most `node_bound`, ascending.
  std::vector<int> params_up_to(int node_bound) const;
  std::vector<int> orbit_representatives(int size) const;

  // Adds Proc-level topology symbols to a signature.
  void declare_into(Signature& sig) const;
  const Symbol* find_symbol(std::string_view name) const;

  // 2 * (|Mod(p)| + k) + 2; with no argument |Mod(p)| = |edge labels| + 1.
  int default_bound(int mod_size) const { return 2 * (mod_size + arity_) + 2; }
  int default_bound() const { return default_bound(static_cast<int>(spec_.edge_labels.size()) + 1); }

 private:
  Spec spec_;
  int arity_;
  mutable std::mutex mu_;
  mutable std::map<int, std::shared_ptr<const ConcreteGraph>> cache_;
};

// The three shipped families: rbr, uniring, btw.
const std::vector<std::shared_ptr<const TopologyFamily>>& builtin_families();
std::shared_ptr<const TopologyFamily> find_family(std::string_view name);

// Compositional evaluation of a Proc term; throws if a variable is unassigned.
int eval_term(const ConcreteGraph& g, const Term& t, const std::map<std::string, int>& asg);

// Throws NonDeterministicTopology when two distinct neighbours of a node share
// a label, or a label has two targets from one node.
void check_deterministic(const ConcreteGraph& g, int param);
void check_deterministic(const TopologyFamily& fam, int min_param, int max_param);

struct GroundQuery {
  std::vector<Var> vars;  // Proc variables (p, then q⃗)
  std::vector<Formula> literals;
  int max_depth = 1;

  // Canonical text used as memo key and in the query log.
  std::string key() const;
  // Parses a conjunction of literals over the family's symbols; unknown
  // identifiers become Proc variables in order of first occurrence.
  static GroundQuery parse(const TopologyFamily& fam, std::string_view text);
};

struct Witness {
  int param = 0;
  int size = 0;
  std::vector<int> assignment;  // aligned with the query's vars
};

struct OracleVerdict {
  bool realizable = false;
  std::optional<Witness> witness;
  int bound_used = 0;
};

// A complete local description: equality partition of a term list plus the
// truth of every class on every k-tuple of terms.
struct LocalDescription {
  std::vector<int> partition;       // partition[i] = least j with t_j = t_i
  std::vector<std::uint8_t> holds;  // [class][tuple], tuples over term indices in lexicographic order
  Witness witness;

  bool same_key(const LocalDescription& o) const { return partition == o.partition && holds == o.holds; }
};

struct DescriptionSet {
  std::vector<Term> terms;
  std::vector<Var> vars;
  int arity = 1;
  std::size_t class_count = 0;
  std::vector<LocalDescription> items;  // sorted by (partition, holds)
  int bound_used = 0;

  std::size_t tuple_count() const;
  // Term indices of the i-th k-tuple.
  std::vector<int> tuple(std::size_t i) const;
  bool holds(const LocalDescription& d, std::size_t cls, std::size_t tuple) const {
    return d.holds[cls * tuple_count() + tuple] != 0;
  }
};

struct OracleLogEntry {
  std::string query;
  std::string verdict;
  int bound;
};

// Exhaustive enumeration of family instances up to a node bound. Results are
// memoized; all member functions may be called concurrently.
class Oracle {
 public:
  Oracle(std::shared_ptr<const TopologyFamily> fam, int bound);

  OracleVerdict realizable(const GroundQuery& q);
  // Every complete description of `terms` (Proc terms over `vars`) realized
  // by some instance within the bound.
  DescriptionSet describe(const std::vector<Term>& terms, const std::vector<Var>& vars);

  const TopologyFamily& family() const { return *fam_; }
  std::shared_ptr<const TopologyFamily> family_ptr() const { return fam_; }
  int bound() const { return bound_; }
  std::size_t query_count() const;   // calls, including memo hits
  std::size_t distinct_queries() const;
  std::vector<OracleLogEntry> log() const;
  std::vector<GroundQuery> issued_queries() const;
  std::vector<std::pair<std::vector<Term>, std::vector<Var>>> issued_describes() const;
  void write_log(std::ostream& os) const;

 private:
  OracleVerdict search(const GroundQuery& q) const;
  DescriptionSet sweep(const std::vector<Term>& terms, const std::vector<Var>& vars) const;

  std::shared_ptr<const TopologyFamily> fam_;
  int bound_;
  mutable std::mutex mu_;
  std::map<std::string, OracleVerdict> memo_;
  std::map<std::string, DescriptionSet> describe_memo_;
  std::vector<GroundQuery> queries_;
  std::vector<std::pair<std::vector<Term>, std::vector<Var>>> describes_;
  std::vector<OracleLogEntry> log_;
  std::size_t calls_ = 0;
};

// Unmemoized single query.
OracleVerdict realizable(const TopologyFamily& fam, const GroundQuery& q, int bound);

}  // namespace fop

#endif  // FOP_TOPOLOGY_HPP
