#include "fop/smt_backend.hpp"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "fop/error.hpp"
#include "fop/smtlib.hpp"
#include "fop/subprocess.hpp"

namespace fop {

SolverConfig SolverConfig::from_env() {
  SolverConfig cfg;
  if (const char* s = std::getenv("FOP_SOLVER"); s && *s) cfg.command = split_command(s);
  return cfg;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kValid: return "valid";
    case Verdict::kInvalid: return "invalid";
    case Verdict::kUnknown: return "unknown";
    case Verdict::kTimeout: return "timeout";
    case Verdict::kError: return "error";
  }
  return "?";
}

std::string_view to_string(Fidelity f) {
  switch (f) {
    case Fidelity::kNotApplicable: return "n/a";
    case Fidelity::kConfirmed: return "confirmed";
    case Fidelity::kFailed: return "failed";
    case Fidelity::kSkipped: return "skipped";
  }
  return "?";
}

std::string emit_script(const VCStatement& st, const Protocol& p, const SolverConfig& cfg) {
  EmissionOptions opts;
  opts.logic = cfg.logic;
  opts.cardinality_bound = cfg.cardinality_bound;
  std::ostringstream out;
  out << "; statement " << st.id << '\n';
  out << "(set-option :produce-models true)\n";
  for (const auto& o : cfg.options) out << o << '\n';
  out << "(set-logic " << cfg.logic << ")\n";
  out << smt_declarations(p.sig, opts);
  for (const auto& a : p.axioms) out << "(assert " << smt_formula(a) << ")\n";
  out << "(assert (not " << smt_formula(st.sentence) << "))\n";
  out << "(check-sat)\n(get-model)\n";
  return out.str();
}

RawVerdict run_solver(const std::string& script, const SolverConfig& cfg) {
  ProcessResult pr = run_process(cfg.command, script, std::chrono::duration<double>(cfg.timeout_seconds));
  RawVerdict rv;
  rv.wall_seconds = pr.wall.count();
  rv.stderr_text = pr.err;
  if (pr.timed_out) {
    rv.status = "timeout";
    return rv;
  }
  if (pr.term_signal != 0)
    throw SolverCrashed("solver killed by signal " + std::to_string(pr.term_signal));
  std::istringstream lines(pr.out);
  std::string first;
  while (std::getline(lines, first)) {
    if (first.find_first_not_of(" \t\r") != std::string::npos) break;
  }
  while (!first.empty() && (first.back() == '\r' || first.back() == ' ')) first.pop_back();
  if (first == "sat" || first == "unsat" || first == "unknown") {
    rv.status = first;
    std::string rest((std::istreambuf_iterator<char>(lines)), std::istreambuf_iterator<char>());
    if (first == "sat") rv.model_text = rest;
    return rv;
  }
  std::string detail = pr.out.empty() ? pr.err : pr.out;
  if (detail.size() > 400) detail.resize(400);
  throw SolverCrashed("solver exited with code " + std::to_string(pr.exit_code) + ": " + detail);
}

CheckResult check_statement(const VCStatement& st, const Protocol& p, const SolverConfig& cfg) {
  CheckResult r;
  r.statement_id = st.id;
  r.cardinality_bound = cfg.cardinality_bound;
  const std::string script = emit_script(st, p, cfg);
  if (!cfg.emit_dir.empty()) {
    std::filesystem::create_directories(cfg.emit_dir);
    std::string suffix = cfg.cardinality_bound ? ".card" + std::to_string(*cfg.cardinality_bound) : "";
    std::ofstream(std::filesystem::path(cfg.emit_dir) / (st.id + suffix + ".smt2")) << script;
  }
  RawVerdict rv;
  try {
    rv = run_solver(script, cfg);
  } catch (const SolverNotFound&) {
    throw;
  } catch (const Error& e) {
    r.note = e.what();
    return r;
  }
  r.wall_seconds = rv.wall_seconds;
  if (rv.status == "unsat") {
    r.verdict = Verdict::kValid;
  } else if (rv.status == "timeout") {
    r.verdict = Verdict::kTimeout;
  } else if (rv.status == "unknown") {
    r.verdict = Verdict::kUnknown;
  } else {
    r.verdict = Verdict::kInvalid;
    r.model_text = rv.model_text;
    try {
      ModelStructure m = ModelStructure::parse(rv.model_text, p.sig);
      std::vector<Formula> claim = p.axioms;
      claim.push_back(neg(st.sentence));
      Truth t = evaluate(conj(std::move(claim)), m);
      r.fidelity = t == Truth::kTrue ? Fidelity::kConfirmed : Fidelity::kFailed;
      if (t != Truth::kTrue) r.note = "countermodel does not satisfy the negated statement";
      r.countermodel = std::move(m);
    } catch (const Error& e) {
      r.fidelity = Fidelity::kSkipped;
      r.note = std::string("model not checked: ") + e.what();
    }
  }
  return r;
}

std::vector<CheckResult> check_suite(const VCSuite& suite, const Protocol& p, const SolverConfig& cfg) {
  // Fail fast on a missing solver rather than once per statement.
  if (cfg.command.empty() || !find_executable(cfg.command.front()))
    throw SolverNotFound("solver not found: " + (cfg.command.empty() ? std::string("<empty>") : cfg.command.front()));
  std::vector<CheckResult> results(suite.statements.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t i; (i = next++) < suite.statements.size();) {
      try {
        results[i] = check_statement(suite.statements[i], p, cfg);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(suite.statements.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

int small_model_bound(const Protocol& p) { return static_cast<int>(p.mod.size()) + p.arity(); }

std::vector<CheckResult> check_small_model(const VCSuite& suite, const Protocol& p, SolverConfig cfg) {
  for (const auto& s : p.sig.sorts())
    if (s.name() == "Int" || s.name() == "Real")
      throw UnsupportedBackground("sort " + s.name() + " has no finite models; the small-model check needs pure UF");
  cfg.cardinality_bound = small_model_bound(p);
  return check_suite(suite, p, cfg);
}

bool all_valid(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (r.verdict != Verdict::kValid) return false;
  return true;
}

}  // namespace fop
