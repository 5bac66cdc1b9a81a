// SMT-LIB2 text emission.

#ifndef FOP_SMTLIB_HPP
#define FOP_SMTLIB_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fop/fol.hpp"

namespace fop {

struct EmissionOptions {
  std::string logic = "UF";
  // When set, Proc is restricted to at most n elements named |Proc#0|..|Proc#n-1|.
  std::optional<int> cardinality_bound;
  // Emit set-option/set-logic and the sort and symbol declarations.
  bool preamble = true;
};

// Quotes a name with |...| unless it is an SMT-LIB simple symbol.
std::string smt_symbol(std::string_view name);
// Name of the i-th element constant used under a cardinality bound.
std::string smt_element_name(const Sort& s, int i);

std::string smt_term(const Term& t);
std::string smt_formula(const Formula& f);

// Declarations for every sort and symbol of `sig` (primed copies included),
// plus the cardinality constants and covering axiom when requested.
std::string smt_declarations(const Signature& sig, const EmissionOptions& opts);

// Preamble (optional) followed by one (assert ...) per formula.
std::string to_smtlib(const std::vector<Formula>& assertions, const Signature& sig,
                      const EmissionOptions& opts = {});
std::string to_smtlib(const Formula& f, const Signature& sig, const EmissionOptions& opts = {});

}  // namespace fop

#endif  // FOP_SMTLIB_HPP
