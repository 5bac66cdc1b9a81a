// Shared fixtures for the unit, property and acceptance tests.

#ifndef FOP_TESTS_SUPPORT_HPP
#define FOP_TESTS_SUPPORT_HPP

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "fop/fol.hpp"
#include "fop/protocol_file.hpp"
#include "fop/topology.hpp"

namespace fop::test {

std::string source_path(std::string_view relative);
std::string protocol_path(std::string_view file);
std::string read_file(const std::string& path);
ProtocolDocument load_protocol(std::string_view file);
// Parses a shipped protocol after textual replacement of one fragment.
ProtocolDocument load_mutated(std::string_view file, std::string_view from, std::string_view to);
bool solver_available();
// Parses a formula whose unknown identifiers are Proc variables.
Formula parse_in(const Signature& sig, std::string_view text);
Term parse_term_in(const Signature& sig, std::string_view text);

// The statements of one class (Red or Black) of the shipped ring protocol as
// stated by hand: initiation, then consecution for an actor of the other
// colour and for an actor of the same colour.
std::vector<Formula> rbr_class_statements(const Protocol& p, const CandidateInvariant& inv, std::string_view cls);
// AC-equality of two statements that also holds premise and conclusion apart,
// so statements with a trivial conclusion are not all identified.
bool same_statement(const Formula& a, const Formula& b);

// ---- reference topology semantics ----------------------------------------
//
// Written directly from the family definitions, without the library's graph
// classes, so oracle answers can be checked against an independent source.

struct RefRing {
  std::string family;  // rbr, uniring or btw
  int nodes;

  int edge(std::string_view label, int node) const;
  bool holds(std::string_view cls, const std::vector<int>& tuple) const;
};

// Rings of the family with at most `max_nodes` nodes, smallest first.
std::vector<RefRing> ref_instances(std::string_view family, int max_nodes);

int ref_term(const RefRing& g, const Term& t, const std::map<std::string, int>& asg);
// Literal conjunctions only: atoms, equalities, negations, and/or, ⊤/⊥.
bool ref_holds(const RefRing& g, const Formula& f, const std::map<std::string, int>& asg);
// Whether some assignment of `vars` on some instance satisfies every literal.
bool ref_realizable(std::string_view family, const std::vector<Formula>& literals, const std::vector<Var>& vars,
                    int max_nodes);

// ---- generators -----------------------------------------------------------

using Rng = std::mt19937_64;

inline int pick(Rng& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

// A signature with Proc, Value and Id sorts, topology, state and background
// symbols, used by the random formula generator.
Signature generator_signature();
// Random well-sorted formula over generator_signature() whose free variables
// range over `free` (Proc-sorted).
Formula random_formula(Rng& rng, const Signature& sig, const std::vector<Var>& free, int depth);
Term random_term(Rng& rng, const Signature& sig, const Sort& sort, const std::vector<Var>& vars, int depth);

// ---- property suites -----------------------------------------------------

struct PropertyReport {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;

  bool ok() const { return failures == 0 && cases > 0; }
  void fail(const std::string& what) {
    if (failures++ == 0) first_failure = what;
  }
};

PropertyReport property_round_trip(std::size_t cases, std::uint64_t seed);
PropertyReport property_eqclass(std::size_t cases, std::uint64_t seed);
PropertyReport property_frame(std::size_t cases, std::uint64_t seed);
// Requires a solver; cases counts invalid verdicts whose models were checked.
PropertyReport property_countermodel(std::size_t cases, std::uint64_t seed);
PropertyReport property_completable(std::size_t cases, std::uint64_t seed);

}  // namespace fop::test

#endif  // FOP_TESTS_SUPPORT_HPP
