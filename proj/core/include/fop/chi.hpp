// Local configurations, EqClass tables and characteristic formulas.

#ifndef FOP_CHI_HPP
#define FOP_CHI_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fop/fol.hpp"
#include "fop/sexpr.hpp"
#include "fop/topology.hpp"

namespace fop {

// Proc terms ordered by their call-notation text, e.g. left(p) < p < q < right(p).
class TermSet {
 public:
  TermSet() = default;
  explicit TermSet(std::vector<Term> terms);  // sorts and removes duplicates

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  const Term& operator[](std::size_t i) const { return terms_[i]; }
  std::optional<std::size_t> index_of(const Term& t) const;
  // Free variables in order of first occurrence.
  std::vector<Var> vars() const;

  // Number of k-tuples and the term indices of the i-th one (lexicographic).
  std::size_t tuple_count(int k) const;
  std::vector<int> tuple(std::size_t i, int k) const;
  std::size_t tuple_index(const std::vector<int>& idx) const;
  std::vector<Term> tuple_terms(std::size_t i, int k) const;

 private:
  std::vector<Term> terms_;
};

// σ: k-tuples of terms → class index, or -1 for ⊤. For k > 1 the restricted
// enumeration also fixes an equality partition of the terms.
struct Coloring {
  std::vector<int> sigma;
  std::vector<int> partition;  // empty, or partition[i] = least j with t_j = t_i
};

// (|Σ_T|+1)^n colourings for k = 1; (|Σ_T|+1)·Bell(n) for k > 1, where only
// q⃗'s tuple is coloured. Throws ExplosionGuard above `cap`.
std::vector<Coloring> enumerate_colorings(const TermSet& ts, const std::vector<Symbol>& classes, int k,
                                          const std::vector<Term>& qvec, std::size_t cap = 1'000'000);
std::size_t count_colorings(std::size_t terms, std::size_t classes, int k);

// χ_σ: the class literals of σ (and the partition's literals, if any).
Formula chi_sigma(const Coloring& c, const TermSet& ts, const std::vector<Symbol>& classes, int k);

struct EqClassFormula {
  bool bottom = false;
  std::vector<Formula> literals;   // in pair order (i < j)
  std::vector<Witness> witnesses;  // for each undecided pair: both polarities realized
  Formula to_formula() const;
};

EqClassFormula eqclass_of(Oracle& oracle, const Coloring& c, const TermSet& ts);

struct ClassLiteral {
  Symbol cls;
  std::vector<Term> args;
  Formula atom() const { return Formula::atom(cls, args); }
};

struct LocalBlock {
  std::vector<ClassLiteral> classes;
  std::vector<Formula> equalities;
  Formula to_formula() const;
};

struct Branch : LocalBlock {
  Witness witness;  // one realizing instance
};

// anchor ∧ ⋁ branches. `unrealizable` means Top(q⃗) never holds (χ = ⊥).
struct Characteristic {
  Symbol top;
  TermSet terms;
  std::vector<Term> qvec;
  bool unrealizable = false;
  LocalBlock anchor;
  std::vector<Branch> branches;
  int bound_used = 0;

  Formula to_formula() const;
  // Every complete description, as a block, that the anchor and branches cover.
  std::vector<LocalBlock> cases() const;
};

Characteristic chi_of(Oracle& oracle, const Symbol& top, const std::vector<Term>& A, const std::vector<Term>& qvec);

// Deterministic dumps.
SExpr to_sexpr(const Coloring& c, const TermSet& ts, const std::vector<Symbol>& classes, int k);
SExpr to_sexpr(const EqClassFormula& e);
SExpr to_sexpr(const Characteristic& c);

}  // namespace fop

#endif  // FOP_CHI_HPP
