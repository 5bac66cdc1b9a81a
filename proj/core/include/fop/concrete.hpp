// Explicit-state checking of a protocol on concrete finite instances.

#ifndef FOP_CONCRETE_HPP
#define FOP_CONCRETE_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fop/eval.hpp"
#include "fop/protocol.hpp"
#include "fop/sexpr.hpp"

namespace fop {

inline constexpr std::size_t kDefaultStateCap = 10'000'000;

// Finite value domains per sort and interpretations of background symbols.
//   (Value (enum null r b))   (Id (range 0 n))   (le <=)   (zero 0)
// A range bound may mention n, the instance parameter. Constants whose name
// is an element of their sort need no entry.
struct DomainSpec {
  struct SortEntry {
    std::string sort;
    std::vector<std::string> elements;  // enum form
    bool is_range = false;
    SExpr lo, hi;                       // range form
  };
  std::vector<SortEntry> sorts;
  std::map<std::string, std::string> background;

  static DomainSpec parse(const std::vector<SExpr>& entries);
  // Replaces one sort's domain from "lo..hi" or "a,b,c"; hi may be n.
  void override_sort(const std::string& sort, const std::string& text);
  SExpr to_sexpr() const;
};

// One state: cell values per node, cells_per_node() cells each; -1 is unassigned.
using State = std::vector<int>;

class ConcreteInstance {
 public:
  // Throws ValidationError when a sort has no domain, a background symbol has
  // no interpretation, or the interpretation violates the protocol axioms.
  ConcreteInstance(std::shared_ptr<const Protocol> p, int param, const DomainSpec& domains);

  const Protocol& protocol() const { return *p_; }
  const ConcreteGraph& graph() const { return *graph_; }
  int param() const { return param_; }
  int nodes() const { return graph_->size(); }
  int domain_size(const Sort& s) const;
  const std::vector<std::string>& elements(const Sort& s) const;
  std::optional<int> element_index(const Sort& s, std::string_view name) const;

  std::size_t cells_per_node() const { return cells_.size(); }
  std::size_t state_size() const { return cells_.size() * static_cast<std::size_t>(nodes()); }
  // Number of values cell c of any node can take.
  int cell_values(std::size_t c) const { return cells_[c].values; }
  // Cell of state symbol f at `node` with non-Proc arguments `args`.
  std::size_t cell(const Symbol& f, int node, std::span<const int> args) const {
    const SymbolInfo& in = info(f);
    if (in.kind != SymbolInfo::Kind::kState && in.kind != SymbolInfo::Kind::kStatePrimed) not_state(f);
    const StateSymbol& ss = state_syms_[in.index];
    std::size_t local = 0;
    for (std::size_t a = 0; a < ss.arg_sizes.size(); ++a)
      local = local * static_cast<std::size_t>(ss.arg_sizes[a]) + static_cast<std::size_t>(args[a]);
    return static_cast<std::size_t>(node) * cells_.size() + ss.first_cell + local;
  }
  std::size_t cell(const std::string& f, int node, const std::vector<std::string>& args = {}) const;
  std::string describe_cell(std::size_t global_cell) const;

  int background(const Symbol& f, std::span<const int> args) const;
  State empty_state() const { return State(state_size(), -1); }
  SExpr state_sexpr(const State& s) const;

  struct SymbolInfo {
    enum class Kind { kNone, kEdge, kClass, kState, kStatePrimed, kBackground } kind = Kind::kNone;
    std::size_t index = 0;
  };
  const SymbolInfo& info(const Symbol& f) const {
    return f.id() < by_id_.size() ? by_id_[f.id()] : kNoInfo;
  }

 private:
  static const SymbolInfo kNoInfo;
  [[noreturn]] static void not_state(const Symbol& f);

  struct CellInfo {
    std::size_t symbol;
    std::vector<int> args;
    int values;
  };
  struct StateSymbol {
    Symbol sym;
    std::size_t first_cell;
    std::vector<int> arg_sizes;  // non-Proc arguments
  };

  std::shared_ptr<const Protocol> p_;
  int param_;
  std::shared_ptr<const ConcreteGraph> graph_;
  std::map<std::string, std::vector<std::string>> domains_;
  std::vector<StateSymbol> state_syms_;
  std::vector<CellInfo> cells_;
  std::vector<std::vector<int>> background_tables_;
  std::vector<Symbol> background_syms_;
  std::vector<SymbolInfo> by_id_;
};

// Pre/post states over one instance; `next` may be null for single-state formulas.
class StateStructure : public Structure {
 public:
  StateStructure(const ConcreteInstance& inst, const int* cur, const int* next = nullptr)
      : inst_(inst), cur_(cur), next_(next) {}
  int domain_size(const Sort& s) const override { return inst_.domain_size(s); }
  int apply(const Symbol& f, std::span<const int> args) const override;

 private:
  const ConcreteInstance& inst_;
  const int* cur_;
  const int* next_;
};

struct TraceStep {
  State state;
  int actor = -1;  // node that acted to reach this state; -1 for the first
};

struct ConcreteVerdict {
  bool invok_holds = true;
  bool bad_reachable = false;
  std::string failed_part;  // "init" or "step" when invok_holds is false
  std::vector<TraceStep> trace;
  std::size_t states_explored = 0;
};

// Callback-driven enumeration of the states (extending `fixed`) satisfying a
// closed single-state sentence. Return false from the callback to stop.
std::size_t enumerate_states(const ConcreteInstance& inst, const Formula& sentence, const State& fixed,
                             const std::function<bool(const State&)>& visit, std::size_t cap = kDefaultStateCap);
// Successors of `s` by `actor` under TrLoc ∧ Frame.
std::vector<State> successors(const ConcreteInstance& inst, const State& s, int actor);
// Whether pre/post satisfy TrLoc(actor) ∧ Frame(actor), evaluated formula-wise.
bool step_holds(const ConcreteInstance& inst, const State& pre, const State& post, int actor);
Truth eval_state(const ConcreteInstance& inst, const Formula& sentence, const State& s);

ConcreteVerdict check_invok_concrete(const ConcreteInstance& inst, const CandidateInvariant& inv,
                                     std::size_t cap = kDefaultStateCap);
ConcreteVerdict check_bad_reachability(const ConcreteInstance& inst, std::size_t cap = kDefaultStateCap);

struct CompletionResult {
  bool completable = false;
  std::optional<State> completion;
  std::size_t explored = 0;
};

// Searches extensions of `partial` (unassigned cells are -1) satisfying
// ∀p⃗· ⋀_Top Top(p⃗) ⟹ F_Top(p⃗) for the given per-class formulas.
CompletionResult check_completable(const ConcreteInstance& inst, const PerClass& per_class, const State& partial,
                                   std::size_t cap = kDefaultStateCap);

}  // namespace fop

#endif  // FOP_CONCRETE_HPP
