// Deterministic S-expression text form of terms and formulas.
//
//   term    ::= var | const | (f term+)
//   formula ::= true | false | (P term*) | (= term term) | (not f) | (and f*)
//             | (or f*) | (=> f f) | (iff f f) | (distinct term+)
//             | (forall ((x Sort)+) f) | (exists ((x Sort)+) f)
//
// `implies` and `<=>` are accepted as input aliases. `distinct` is expanded to
// pairwise disequalities on input and never printed.

#ifndef FOP_TEXT_HPP
#define FOP_TEXT_HPP

#include <map>
#include <string>
#include <string_view>

#include "fop/fol.hpp"
#include "fop/sexpr.hpp"

namespace fop {

SExpr to_sexpr(const Term& t);
SExpr to_sexpr(const Formula& f);
std::string to_text(const Term& t);
std::string to_text(const Formula& f);
// Line-broken rendering for dumps.
std::string to_pretty_text(const Formula& f, std::size_t width = 100);

// Free-variable environment for parsing. Identifiers resolve to a bound
// variable first, then to `vars`, then to a declared constant. With
// `implicit_proc_vars`, remaining unknown identifiers become fresh Proc
// variables and are recorded in `vars`.
struct ParseScope {
  std::map<std::string, Sort> vars;
  bool implicit_proc_vars = false;
};

// Throw ParseError (with source position) on syntax, resolution or sort errors.
Term parse_term(const SExpr& e, const Signature& sig, ParseScope& scope);
Formula parse_formula(const SExpr& e, const Signature& sig, ParseScope& scope);
Formula parse_formula(std::string_view text, const Signature& sig, ParseScope& scope);
Formula parse_formula(std::string_view text, const Signature& sig);
Term parse_term(std::string_view text, const Signature& sig, ParseScope& scope);

}  // namespace fop

#endif  // FOP_TEXT_HPP
