// The S-expression protocol description format.
//
//   (sorts Value ...)
//   (background (null () Value) (le (Id Id) Bool) ...)
//   (state (var (Proc) Value) ...)
//   (topology rbr [oracle-bound])
//   (init (Red φ) (Black (p) φ) ...)
//   (mod p (left p) (right p))
//   (trloc φ)
//   (bad φ) | (bad (x y z) φ)
//   (invariant (Red φ) ...)
//   (axioms φ ...)
//   (concrete (Value (enum null r b)) (le <=) ...)
//
// Class entries take optional formals; the defaults are p for unary classes,
// x y z for ternary ones and q1..qk otherwise. The actor variable is p.

#ifndef FOP_PROTOCOL_FILE_HPP
#define FOP_PROTOCOL_FILE_HPP

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fop/concrete.hpp"
#include "fop/protocol.hpp"

namespace fop {

struct ProtocolDocument {
  std::shared_ptr<Protocol> protocol;
  CandidateInvariant invariant;
  DomainSpec concrete;
  bool has_concrete = false;
};

// Throws ParseError (with line/column) and ValidationError.
ProtocolDocument parse_protocol_text(std::string_view text, const std::string& name);
ProtocolDocument parse_protocol_file(const std::string& path);

// Default formal names for a class entry.
std::vector<Var> default_formals(int k);

// One class entry, e.g. "(Red (= (var p) null))", against a parsed protocol.
std::pair<Symbol, ClassFormula> parse_class_entry(const Protocol& p, std::string_view text);

// Shipped example files: (file name, contents), sorted by name.
const std::vector<std::pair<std::string, std::string>>& builtin_examples();
const std::string* find_builtin_example(std::string_view name);

}  // namespace fop

#endif  // FOP_PROTOCOL_FILE_HPP
