// Three-valued evaluation of formulas over finite structures.

#ifndef FOP_EVAL_HPP
#define FOP_EVAL_HPP

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fop/fol.hpp"

namespace fop {

enum class Truth { kFalse, kTrue, kUnknown };

inline Truth to_truth(bool b) { return b ? Truth::kTrue : Truth::kFalse; }

// A finite structure. Elements of each sort are 0..domain_size-1.
// apply returns the element for functions and constants, 0/1 for predicates,
// or -1 when the value is not (yet) determined.
class Structure {
 public:
  virtual ~Structure() = default;
  virtual int domain_size(const Sort& s) const = 0;
  virtual int apply(const Symbol& f, std::span<const int> args) const = 0;
};

// A formula with variables resolved to slots, for repeated evaluation.
class CompiledFormula {
 public:
  CompiledFormula() = default;
  // `free_order` fixes the slot of each free variable; every free variable of
  // f must appear in it.
  static CompiledFormula compile(const Formula& f, const std::vector<Var>& free_order);

  Truth eval(const Structure& s, std::span<const int> free_values) const;
  std::size_t free_count() const { return free_count_; }

  struct Node;

 private:
  std::shared_ptr<const std::vector<Node>> nodes_;
  int root_ = -1;
  std::size_t free_count_ = 0;
  std::size_t slot_count_ = 0;
};

// One-shot evaluation; `env` maps free variable names to elements.
Truth evaluate(const Formula& f, const Structure& s, const std::map<std::string, int>& env = {});
int evaluate(const Term& t, const Structure& s, const std::map<std::string, int>& env = {});

}  // namespace fop

#endif  // FOP_EVAL_HPP
