// Many-sorted first-order terms and formulas with primed-copy support.
//
// All values are immutable handles onto shared nodes; copying is cheap and
// values may be shared read-only across threads.

#ifndef FOP_FOL_HPP
#define FOP_FOL_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace fop {

inline constexpr char kPrimeMarker = '\'';
inline constexpr std::string_view kProcSortName = "Proc";
inline constexpr std::string_view kBoolSortName = "Bool";

// Interns a name into a process-wide dense id. Thread-safe.
std::uint32_t intern(std::string_view name);

class Sort {
 public:
  Sort() = default;
  explicit Sort(std::string name) : name_(std::move(name)) {}

  static Sort proc() { return Sort(std::string(kProcSortName)); }
  static Sort boolean() { return Sort(std::string(kBoolSortName)); }

  const std::string& name() const { return name_; }
  bool is_proc() const { return name_ == kProcSortName; }
  bool is_bool() const { return name_ == kBoolSortName; }

  friend bool operator==(const Sort&, const Sort&) = default;
  friend auto operator<=>(const Sort&, const Sort&) = default;

 private:
  std::string name_;
};

enum class SymbolKind { kFunction, kPredicate, kConstant };
enum class Section { kTopoEdge, kTopoClass, kState, kBackground };

std::string_view to_string(Section s);

class Symbol {
 public:
  Symbol() = default;

  // Predicates take result Sort::boolean(); constants take no arguments.
  static Symbol make(std::string name, SymbolKind kind, std::vector<Sort> arg_sorts, Sort result,
                     Section section);
  static Symbol function(std::string name, std::vector<Sort> args, Sort result, Section section);
  static Symbol predicate(std::string name, std::vector<Sort> args, Section section);
  static Symbol constant(std::string name, Sort result, Section section);

  // Same declaration with the prime marker appended to the printed name.
  Symbol primed_copy() const;

  const std::string& name() const;  // base name, without prime marker
  const std::string& full_name() const;
  bool primed() const;
  SymbolKind kind() const;
  Section section() const;
  const std::vector<Sort>& arg_sorts() const;
  const Sort& result_sort() const;
  std::size_t arity() const { return arg_sorts().size(); }
  bool is_predicate() const { return kind() == SymbolKind::kPredicate; }
  std::uint32_t id() const { return id_; }

  explicit operator bool() const { return d_ != nullptr; }
  // Identity is the full printed name.
  friend bool operator==(const Symbol& a, const Symbol& b) { return a.id() == b.id(); }
  friend std::strong_ordering operator<=>(const Symbol& a, const Symbol& b) {
    return a.full_name() <=> b.full_name();
  }
  // Same name, kind, sorts, section and priming.
  bool same_declaration(const Symbol& other) const;

 private:
  struct Data;
  std::shared_ptr<const Data> d_;
  std::uint32_t id_ = 0;
};

// Throws SectionError if `s` violates the rules of its section.
void check_section_rule(const Symbol& s);

struct Var {
  std::string name;
  Sort sort;
  friend bool operator==(const Var&, const Var&) = default;
  friend auto operator<=>(const Var&, const Var&) = default;
};

class Term {
 public:
  enum class Kind { kVar, kApp };

  Term() = default;
  static Term var(std::string name, Sort sort);
  static Term var(const Var& v) { return var(v.name, v.sort); }
  // Checks arity only; sorts are checked by check_well_sorted.
  static Term app(Symbol f, std::vector<Term> args);
  static Term constant(Symbol c) { return app(std::move(c), {}); }

  Kind kind() const;
  bool is_var() const { return kind() == Kind::kVar; }
  const std::string& var_name() const;
  std::uint32_t var_id() const;
  Var as_var() const { return {var_name(), sort()}; }
  const Sort& sort() const;
  const Symbol& symbol() const;
  const std::vector<Term>& args() const;
  // Nesting depth of Proc-sorted function applications (p = 0, left(p) = 1).
  int proc_depth() const;

  explicit operator bool() const { return d_ != nullptr; }
  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node;
  std::shared_ptr<const Node> d_;
};

class Formula {
 public:
  enum class Kind { kTrue, kFalse, kAtom, kEq, kNot, kAnd, kOr, kImplies, kIff, kForall, kExists };

  Formula() = default;
  static Formula top();
  static Formula bottom();
  static Formula atom(Symbol pred, std::vector<Term> args);
  static Formula eq(Term lhs, Term rhs);
  static Formula negation(Formula f);
  static Formula conjunction(std::vector<Formula> kids);
  static Formula disjunction(std::vector<Formula> kids);
  static Formula implication(Formula lhs, Formula rhs);
  static Formula equivalence(Formula lhs, Formula rhs);
  static Formula forall(std::vector<Var> bound, Formula body);
  static Formula exists(std::vector<Var> bound, Formula body);

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }
  const Symbol& predicate() const;          // kAtom
  const std::vector<Term>& terms() const;   // kAtom args, kEq {lhs, rhs}
  const std::vector<Formula>& children() const;  // connectives
  const std::vector<Var>& bound() const;    // quantifiers
  const Formula& body() const;              // quantifiers
  bool is_literal() const;                  // atom, equality, or their negation

  explicit operator bool() const { return d_ != nullptr; }
  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  std::shared_ptr<const Node> d_;
};

// ---- builders with trivial ⊤/⊥ absorption --------------------------------

Formula conj(std::vector<Formula> kids);
Formula disj(std::vector<Formula> kids);
Formula neg(Formula f);
Formula implies(Formula lhs, Formula rhs);
Formula neq(Term a, Term b);
// Pairwise disequalities, in input order.
Formula distinct(const std::vector<Term>& ts);
Formula forall(std::vector<Var> bound, Formula body);
Formula exists(std::vector<Var> bound, Formula body);

// ---- signatures ------------------------------------------------------------

class Signature {
 public:
  Signature();  // Proc is always declared

  void add_sort(const Sort& s);
  bool has_sort(const Sort& s) const;
  const std::vector<Sort>& sorts() const { return sorts_; }

  // Validates section rules and uniqueness; state and background symbols get
  // a registered primed copy.
  const Symbol& declare(const Symbol& s);
  const Symbol* find(std::string_view full_name) const;
  const Symbol& get(std::string_view full_name) const;
  std::optional<Symbol> primed_of(const Symbol& base) const;

  // Unprimed symbols in declaration order.
  const std::vector<Symbol>& symbols() const { return symbols_; }
  std::vector<Symbol> symbols_in(Section s) const;
  // Registered primed copies in declaration order.
  std::vector<Symbol> primed_symbols() const;

 private:
  std::vector<Sort> sorts_;
  std::vector<Symbol> symbols_;
  std::map<std::string, Symbol, std::less<>> by_name_;
  std::map<std::string, Symbol, std::less<>> primed_;
};

// Throws SortError / SectionError.
void check_well_sorted(const Term& t, const Signature& sig);
void check_well_sorted(const Formula& f, const Signature& sig);

// ---- structural operations -------------------------------------------------

std::set<Var> free_vars(const Term& t);
std::set<Var> free_vars(const Formula& f);

using Substitution = std::map<Var, Term>;

// Capture-avoiding simultaneous substitution; throws SortError when a
// replacement's sort differs from its variable's.
Term substitute(const Term& t, const Substitution& m);
Formula substitute(const Formula& f, const Substitution& m);

// Replaces symbols whose base name is in `scope` by their primed copies.
// Topology symbols and already-primed symbols are left alone.
Formula prime(const Formula& f, const std::set<std::string>& scope, const Signature& sig);
Term prime(const Term& t, const std::set<std::string>& scope, const Signature& sig);

// All symbols occurring in f (including primed copies).
std::set<Symbol> symbols_of(const Formula& f);
std::set<Symbol> symbols_of(const Term& t);

// Every subterm of sort Proc (free, bound and applied), in first-occurrence order.
std::vector<Term> proc_subterms(const Formula& f);

// Whether any quantifier in f binds a variable of sort `s`.
bool binds_sort(const Formula& f, const Sort& s);

// Function-call notation, e.g. "left(p)"; used as the term-ordering key.
std::string call_notation(const Term& t);

}  // namespace fop

#endif  // FOP_FOL_HPP
