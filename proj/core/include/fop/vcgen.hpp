// Verification-condition suites for candidate per-class invariants.

#ifndef FOP_VCGEN_HPP
#define FOP_VCGEN_HPP

#include <string>
#include <vector>

#include "fop/chi.hpp"
#include "fop/protocol.hpp"
#include "fop/sexpr.hpp"

namespace fop {

enum class VCKind { kInit, kStep, kBad };
std::string_view to_string(VCKind k);

struct VCStatement {
  std::string id;  // e.g. init.Red, step.Red.2, bundled.Red, bad
  VCKind kind = VCKind::kInit;
  Formula sentence;
  std::string top_class;   // empty for the Bad statement
  SExpr descriptor;        // the local case the statement covers
  bool vacuous = false;    // emitted although its EqClass is ⊥
};

struct VCOptions {
  enum class InitForm { kCross, kSeparate };
  InitForm init_form = InitForm::kCross;
  // One CrossInv statement per class instead of one statement per local case.
  bool bundled = false;
  bool check_bad = false;
  // k = 1 only: also emit the ⊥-EqClass colourings as (trivially valid) statements.
  bool include_vacuous = false;
};

struct VCSuite {
  std::string protocol;
  std::string protocol_hash;
  int oracle_bound = 0;
  std::vector<VCStatement> statements;
};

std::vector<VCStatement> gen_init_vcs(const Protocol& p, const CandidateInvariant& inv, Oracle& oracle,
                                      VCOptions::InitForm form = VCOptions::InitForm::kCross);
std::vector<VCStatement> gen_step_vcs(const Protocol& p, const CandidateInvariant& inv, Oracle& oracle,
                                      bool bundled = false, bool include_vacuous = false);
VCStatement gen_bad_vc(const Protocol& p, const CandidateInvariant& inv, Oracle& oracle);
VCSuite gen_suite(const Protocol& p, const CandidateInvariant& inv, Oracle& oracle, const VCOptions& opts = {});

// Mod(p) ordered as a term set, and the actor/class variables used in statements.
TermSet mod_terms(const Protocol& p);
std::vector<Term> qvec_terms(const Protocol& p);

// FNV-1a 64 over the canonical text of the protocol and invariant, as hex.
std::string protocol_digest(const Protocol& p, const CandidateInvariant& inv);

SExpr to_sexpr(const VCStatement& s);
// Deterministic multi-line dump of the suite.
std::string dump_suite(const VCSuite& suite);

}  // namespace fop

#endif  // FOP_VCGEN_HPP
