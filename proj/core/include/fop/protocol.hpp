// First-order protocols: representation, validation, and the transition
// system formulas built from them.

#ifndef FOP_PROTOCOL_HPP
#define FOP_PROTOCOL_HPP

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fop/fol.hpp"
#include "fop/topology.hpp"

namespace fop {

// A formula with named formal parameters, e.g. Init_Red(p) or Inv_btw(x, y, z).
struct ClassFormula {
  std::vector<Var> formals;
  Formula body;

  Formula instantiate(const std::vector<Term>& args) const;
};

// Per-class formulas in the family's class order.
class PerClass {
 public:
  void set(const Symbol& cls, ClassFormula f);
  const ClassFormula* find(const Symbol& cls) const;
  const ClassFormula* find(std::string_view cls) const;
  const std::vector<std::pair<Symbol, ClassFormula>>& items() const { return items_; }

 private:
  std::vector<std::pair<Symbol, ClassFormula>> items_;
};

struct CandidateInvariant {
  PerClass per_class;  // classes without an entry are ⊤
};

struct Protocol {
  std::string name;
  Signature sig;
  std::shared_ptr<const TopologyFamily> family;
  PerClass init;  // classes without an entry start unconstrained
  Var actor{"p", Sort::proc()};
  std::vector<Term> mod;
  Formula trloc = Formula::top();
  std::optional<ClassFormula> bad;  // formals are the Proc variables of Bad
  std::vector<Formula> axioms;      // closed, over the background signature
  std::optional<int> oracle_bound;

  int arity() const { return family->arity(); }
  // Base names of state and background symbols (the priming scope).
  std::set<std::string> mutable_scope() const;
  // Init_Top / Inv_Top instantiated at `args`; ⊤ when absent.
  Formula init_at(const Symbol& cls, const std::vector<Term>& args) const;
  int default_oracle_bound() const;
};

Formula inv_at(const CandidateInvariant& inv, const Symbol& cls, const std::vector<Term>& args);

// Conventional names of the k universally quantified class variables:
// q for k = 1, x y z for k = 3, q1..qk otherwise.
std::vector<Var> class_vars(int k);

// Throws ValidationError (or SortError/SectionError) on the first problem.
void validate_protocol(const Protocol& p);
void validate_protocol(const Protocol& p, const CandidateInvariant& inv);

// Frame(p) = UnMod ∧ ∀y· (⋀_{t∈Mod(p)} y≠t) ⟹ Unch(y).
Formula build_unch(const Protocol& p, const Term& y);
Formula build_unmod(const Protocol& p);
// The frame's bound variable avoids the names in `avoid`.
Formula build_frame(const Protocol& p, const std::set<std::string>& avoid = {});
// τ = ∃p· TrLoc(p) ∧ Frame(p).
Formula build_tau(const Protocol& p);
// φ0 = ∀p⃗· ⋀_Top (Top(p⃗) ⟹ Init_Top(p⃗)).
Formula build_init(const Protocol& p);
// ∀p⃗· ⋀_Top (Top(p⃗) ⟹ Inv_Top(p⃗)), optionally over the primed signature.
Formula build_inv(const Protocol& p, const CandidateInvariant& inv, bool primed);
Formula build_invok(const Protocol& p, const CandidateInvariant& inv);

// Primes state and background symbols.
Formula prime_state(const Protocol& p, const Formula& f);

}  // namespace fop

#endif  // FOP_PROTOCOL_HPP
