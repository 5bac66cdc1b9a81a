// Normal forms and the structural comparison used by golden tests. None of
// these are applied implicitly anywhere in the pipeline.

#ifndef FOP_NORMALIZE_HPP
#define FOP_NORMALIZE_HPP

#include "fop/fol.hpp"

namespace fop {

// Negation normal form: only and/or/quantifiers above literals; => and iff
// are expanded.
Formula nnf(const Formula& f);

// Prenex form of nnf(f); bound variables are renamed apart where needed.
Formula prenex(const Formula& f);

// Canonical representative modulo: associativity, commutativity and
// idempotence of and/or, unit absorption, symmetry of =, nested quantifier
// blocks, alpha-renaming of bound variables, and removal of literals inside
// a disjunct that already occur as siblings of the enclosing disjunction.
Formula ac_normalize(const Formula& f);
bool ac_equal(const Formula& a, const Formula& b);

}  // namespace fop

#endif  // FOP_NORMALIZE_HPP
