// Minimal S-expression reader with source positions.

#ifndef FOP_SEXPR_HPP
#define FOP_SEXPR_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace fop {

struct SExpr {
  enum class Kind { kAtom, kList };

  Kind kind = Kind::kAtom;
  std::string atom;  // kAtom: symbol or number text (quotes stripped)
  bool quoted = false;
  std::vector<SExpr> items;  // kList
  std::size_t line = 1;
  std::size_t column = 1;

  bool is_atom() const { return kind == Kind::kAtom; }
  bool is_list() const { return kind == Kind::kList; }
  bool is_atom(std::string_view s) const { return is_atom() && atom == s; }
  // List whose first element is the atom `head`.
  bool is_call(std::string_view head) const {
    return is_list() && !items.empty() && items.front().is_atom(head);
  }
  std::size_t size() const { return items.size(); }
  const SExpr& operator[](std::size_t i) const { return items[i]; }

  static SExpr make_atom(std::string s) {
    SExpr e;
    e.atom = std::move(s);
    return e;
  }
  static SExpr make_list(std::vector<SExpr> xs) {
    SExpr e;
    e.kind = Kind::kList;
    e.items = std::move(xs);
    return e;
  }
};

// Reads every top-level expression. `;` starts a line comment; `|...|`
// quotes a symbol. Throws ParseError with the offending position.
std::vector<SExpr> parse_sexprs(std::string_view text);
// Reads exactly one expression.
SExpr parse_sexpr(std::string_view text);

// Single-line rendering; atoms that need it are re-quoted.
std::string to_string(const SExpr& e);
// Multi-line rendering: lists longer than `width` are broken one child per line.
std::string to_pretty_string(const SExpr& e, std::size_t width = 100);

}  // namespace fop

#endif  // FOP_SEXPR_HPP
