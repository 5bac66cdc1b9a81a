// Discharging verification conditions with an external SMT solver.

#ifndef FOP_SMT_BACKEND_HPP
#define FOP_SMT_BACKEND_HPP

#include <optional>
#include <string>
#include <vector>

#include "fop/protocol.hpp"
#include "fop/smt_model.hpp"
#include "fop/vcgen.hpp"

namespace fop {

struct SolverConfig {
  std::vector<std::string> command{"z3", "-in"};
  double timeout_seconds = 30.0;
  std::string logic = "UF";
  std::optional<int> cardinality_bound;
  std::vector<std::string> options;  // extra (set-option ...) lines, verbatim
  int jobs = 1;
  std::string emit_dir;  // when set, each script is also written there

  // FOP_SOLVER overrides the default command when set.
  static SolverConfig from_env();
};

enum class Verdict { kValid, kInvalid, kUnknown, kTimeout, kError };
std::string_view to_string(Verdict v);

enum class Fidelity { kNotApplicable, kConfirmed, kFailed, kSkipped };
std::string_view to_string(Fidelity f);

struct CheckResult {
  std::string statement_id;
  Verdict verdict = Verdict::kError;
  std::optional<ModelStructure> countermodel;
  std::string model_text;  // raw solver output for invalid verdicts
  Fidelity fidelity = Fidelity::kNotApplicable;
  std::string note;  // error or fidelity diagnostics
  double wall_seconds = 0;
  std::optional<int> cardinality_bound;
};

struct RawVerdict {
  std::string status;  // sat, unsat, unknown, timeout
  std::string model_text;
  std::string stderr_text;
  double wall_seconds = 0;
};

// Deterministic script asserting the protocol axioms and the negation of the statement.
std::string emit_script(const VCStatement& st, const Protocol& p, const SolverConfig& cfg);

// Throws SolverNotFound and SolverCrashed.
RawVerdict run_solver(const std::string& script, const SolverConfig& cfg);

// One independent check; solver errors become kError results.
CheckResult check_statement(const VCStatement& st, const Protocol& p, const SolverConfig& cfg);
// Results in statement order; up to cfg.jobs solver processes at once.
std::vector<CheckResult> check_suite(const VCSuite& suite, const Protocol& p, const SolverConfig& cfg);

// |Mod(p)| + k.
int small_model_bound(const Protocol& p);
// check_suite with Proc restricted to small_model_bound(p) elements. Throws
// UnsupportedBackground when a declared sort is an interpreted infinite theory.
std::vector<CheckResult> check_small_model(const VCSuite& suite, const Protocol& p, SolverConfig cfg);

bool all_valid(const std::vector<CheckResult>& results);

}  // namespace fop

#endif  // FOP_SMT_BACKEND_HPP
