#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fop/chi.hpp"
#include "fop/concrete.hpp"
#include "fop/error.hpp"
#include "fop/protocol_file.hpp"
#include "fop/smt_backend.hpp"
#include "fop/smtlib.hpp"
#include "fop/subprocess.hpp"
#include "fop/text.hpp"
#include "fop/vcgen.hpp"

namespace fop::cli {

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Options {
  std::string file;
  std::string solver;
  double timeout = 30.0;
  int bound = 0;
  int cardinality = 0;
  bool small_model = false;
  bool bundled = false;
  bool check_bad = false;
  bool include_vacuous = false;
  int jobs = 1;
  std::string json_out;
  std::string init_vc = "cross";
  std::string emit_dir;
  std::string oracle_log;
  std::string format = "sexpr";
  std::string cls;
  std::string family;
  std::string query;
  int size = 0;
  std::vector<std::string> domains;
  std::size_t cap = kDefaultStateCap;
  std::string out_dir;
};

// A path on disk, or the name of a shipped example.
ProtocolDocument load(const std::string& file) {
  if (std::filesystem::exists(file)) return parse_protocol_file(file);
  if (const std::string* text = find_builtin_example(std::filesystem::path(file).filename().string()))
    return parse_protocol_text(*text, std::filesystem::path(file).stem().string());
  throw ParseError("cannot read " + file, 0, 0);
}

int oracle_bound(const Options& o, const Protocol& p) { return o.bound > 0 ? o.bound : p.default_oracle_bound(); }

VCOptions vc_options(const Options& o) {
  VCOptions v;
  v.bundled = o.bundled;
  v.check_bad = o.check_bad;
  v.include_vacuous = o.include_vacuous;
  v.init_form = o.init_vc == "separate" ? VCOptions::InitForm::kSeparate : VCOptions::InitForm::kCross;
  return v;
}

SolverConfig solver_config(const Options& o) {
  SolverConfig cfg = SolverConfig::from_env();
  if (!o.solver.empty()) cfg.command = split_command(o.solver);
  cfg.timeout_seconds = o.timeout;
  cfg.jobs = o.jobs;
  cfg.emit_dir = o.emit_dir;
  if (o.cardinality > 0) cfg.cardinality_bound = o.cardinality;
  return cfg;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << text;
}

void write_oracle_log(const Options& o, const Oracle& oracle) {
  if (o.oracle_log.empty()) return;
  std::ofstream f(o.oracle_log);
  if (!f) throw Error("cannot write " + o.oracle_log);
  oracle.write_log(f);
}

json results_json(const VCSuite& suite, const std::vector<CheckResult>& results, const Signature& sig) {
  json arr = json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    const auto& st = suite.statements[i];
    json j;
    j["id"] = r.statement_id;
    j["kind"] = std::string(to_string(st.kind));
    j["class"] = st.top_class;
    j["verdict"] = std::string(to_string(r.verdict));
    j["cardinality_bound"] = r.cardinality_bound ? json(*r.cardinality_bound) : json(nullptr);
    j["wall_seconds"] = r.wall_seconds;
    j["fidelity"] = std::string(to_string(r.fidelity));
    j["note"] = r.note;
    if (r.countermodel) {
      j["countermodel"] = to_pretty_string(r.countermodel->to_sexpr(sig), 100);
    } else if (!r.model_text.empty()) {
      j["countermodel_raw"] = r.model_text;
    }
    arr.push_back(std::move(j));
  }
  return arr;
}

std::string overall_of(const std::vector<CheckResult>& rs) {
  bool invalid = false, failed = false;
  for (const auto& r : rs) {
    invalid |= r.verdict == Verdict::kInvalid;
    failed |= r.verdict != Verdict::kValid && r.verdict != Verdict::kInvalid;
  }
  return invalid ? "invalid" : failed ? "solver-failure" : "valid";
}

int cmd_check(const Options& o, std::ostream& out) {
  const auto t0 = Clock::now();
  ProtocolDocument doc = load(o.file);
  const Protocol& p = *doc.protocol;
  Oracle oracle(p.family, oracle_bound(o, p));
  VCSuite suite = gen_suite(p, doc.invariant, oracle, vc_options(o));
  const double vcgen_s = seconds_since(t0);
  write_oracle_log(o, oracle);

  SolverConfig cfg = solver_config(o);
  const auto t1 = Clock::now();
  std::vector<CheckResult> results = check_suite(suite, p, cfg);
  std::vector<CheckResult> small;
  if (o.small_model) small = check_small_model(suite, p, cfg);
  const double solve_s = seconds_since(t1);

  std::string overall = overall_of(results);
  if (!small.empty() && overall == "valid") overall = overall_of(small);
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    out << r.statement_id << ": " << to_string(r.verdict);
    if (!small.empty()) out << " (cardinality " << small_model_bound(p) << ": " << to_string(small[i].verdict) << ")";
    if (r.verdict == Verdict::kInvalid) out << " [countermodel " << to_string(r.fidelity) << "]";
    if (!r.note.empty()) out << " - " << r.note;
    out << '\n';
  }
  out << "overall: " << overall << " (" << results.size() << " statements, oracle bound " << oracle.bound() << ")\n";

  if (!o.json_out.empty()) {
    json rep;
    rep["schema"] = kReportSchema;
    rep["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    rep["input"] = {{"protocol", p.name}, {"source", o.file}, {"digest", suite.protocol_hash}};
    rep["oracle"] = {{"family", p.family->name()},
                     {"bound", oracle.bound()},
                     {"queries", oracle.query_count()},
                     {"distinct_queries", oracle.distinct_queries()}};
    rep["options"] = {{"bundled", o.bundled},
                      {"check_bad", o.check_bad},
                      {"init_vc", o.init_vc},
                      {"include_vacuous", o.include_vacuous},
                      {"solver", cfg.command},
                      {"timeout_seconds", cfg.timeout_seconds},
                      {"cardinality_bound", cfg.cardinality_bound ? json(*cfg.cardinality_bound) : json(nullptr)},
                      {"jobs", cfg.jobs}};
    rep["statements"] = results_json(suite, results, p.sig);
    if (o.small_model) rep["small_model"] = results_json(suite, small, p.sig);
    rep["timings"] = {{"vcgen_seconds", vcgen_s}, {"solve_seconds", solve_s}, {"total_seconds", seconds_since(t0)}};
    rep["overall"] = overall;
    write_text(o.json_out, rep.dump(2) + "\n", out);
  }
  if (overall == "valid") return kExitOk;
  return overall == "invalid" ? kExitInvalid : kExitSolver;
}

int cmd_vc(const Options& o, std::ostream& out) {
  ProtocolDocument doc = load(o.file);
  const Protocol& p = *doc.protocol;
  Oracle oracle(p.family, oracle_bound(o, p));
  VCSuite suite = gen_suite(p, doc.invariant, oracle, vc_options(o));
  write_oracle_log(o, oracle);
  SolverConfig cfg = solver_config(o);
  if (o.format == "smt2") {
    for (const auto& st : suite.statements) out << emit_script(st, p, cfg) << '\n';
  } else {
    out << dump_suite(suite);
  }
  if (!o.emit_dir.empty()) {
    std::filesystem::create_directories(o.emit_dir);
    for (const auto& st : suite.statements)
      std::ofstream(std::filesystem::path(o.emit_dir) / (st.id + ".smt2")) << emit_script(st, p, cfg);
  }
  return kExitOk;
}

int cmd_chi(const Options& o, std::ostream& out) {
  ProtocolDocument doc = load(o.file);
  const Protocol& p = *doc.protocol;
  const auto& classes = p.family->class_preds();
  auto it = std::find_if(classes.begin(), classes.end(), [&](const Symbol& s) { return s.name() == o.cls; });
  if (it == classes.end()) throw ValidationError(ValidationError::Kind::kUnknownClass, "unknown class " + o.cls);
  Oracle oracle(p.family, oracle_bound(o, p));
  const std::vector<Term> q = qvec_terms(p);
  out << "; oracle bound " << oracle.bound() << '\n';
  out << to_pretty_string(to_sexpr(chi_of(oracle, *it, {}, q)), 100) << '\n';
  out << to_pretty_string(to_sexpr(chi_of(oracle, *it, mod_terms(p).terms(), q)), 100) << '\n';
  std::vector<Term> all = p.mod;
  all.insert(all.end(), q.begin(), q.end());
  TermSet ts(all);
  const std::size_t qi = ts.tuple_index([&] {
    std::vector<int> idx;
    for (const auto& t : q) idx.push_back(static_cast<int>(*ts.index_of(t)));
    return idx;
  }());
  const int top_idx = static_cast<int>(it - classes.begin());
  for (const auto& c : enumerate_colorings(ts, classes, p.arity(), q)) {
    if (c.sigma[qi] != top_idx) continue;
    EqClassFormula e = eqclass_of(oracle, c, ts);
    out << to_string(SExpr::make_list({SExpr::make_atom("eqclass"), to_sexpr(c, ts, classes, p.arity()), to_sexpr(e)}))
        << '\n';
  }
  write_oracle_log(o, oracle);
  return kExitOk;
}

int cmd_oracle(const Options& o, std::ostream& out) {
  auto fam = find_family(o.family);
  if (!fam) throw ValidationError(ValidationError::Kind::kOther, "unknown topology family " + o.family);
  GroundQuery q = GroundQuery::parse(*fam, o.query);
  Oracle oracle(fam, o.bound > 0 ? o.bound : fam->default_bound());
  OracleVerdict v = oracle.realizable(q);
  if (v.realizable) {
    out << "realizable (instance " << v.witness->param << ", " << v.witness->size << " nodes:";
    for (std::size_t i = 0; i < q.vars.size(); ++i) out << ' ' << q.vars[i].name << '=' << v.witness->assignment[i];
    out << ")\n";
  } else {
    out << "unrealizable-up-to-bound " << v.bound_used << '\n';
  }
  write_oracle_log(o, oracle);
  return kExitOk;
}

json trace_json(const ConcreteInstance& inst, const std::vector<TraceStep>& trace) {
  json arr = json::array();
  for (const auto& step : trace)
    arr.push_back({{"actor", step.actor}, {"state", to_string(inst.state_sexpr(step.state))}});
  return arr;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  ProtocolDocument doc = load(o.file);
  DomainSpec domains = doc.concrete;
  for (const auto& d : o.domains) {
    auto eq = d.find('=');
    if (eq == std::string::npos) throw ParseError("--domain expects Sort=spec: " + d, 0, 0);
    domains.override_sort(d.substr(0, eq), d.substr(eq + 1));
  }
  const Protocol& p = *doc.protocol;
  const int size = o.size > 0 ? o.size : p.family->min_param();
  ConcreteInstance inst(doc.protocol, size, domains);
  ConcreteVerdict inv = check_invok_concrete(inst, doc.invariant, o.cap);
  out << "instance " << size << " (" << inst.nodes() << " nodes)\n";
  out << "invok: " << (inv.invok_holds ? "holds" : "violated (" + inv.failed_part + ")") << " after "
      << inv.states_explored << " states\n";
  for (const auto& s : inv.trace)
    out << "  actor " << s.actor << ": " << to_string(inst.state_sexpr(s.state)) << '\n';
  std::optional<ConcreteVerdict> bad;
  if (p.bad) {
    bad = check_bad_reachability(inst, o.cap);
    out << "bad: " << (bad->bad_reachable ? "reachable" : "unreachable") << " (" << bad->states_explored
        << " reachable states)\n";
    for (const auto& s : bad->trace)
      out << "  actor " << s.actor << ": " << to_string(inst.state_sexpr(s.state)) << '\n';
  }
  if (!o.json_out.empty()) {
    json rep;
    rep["schema"] = "fop-simulation/1";
    rep["protocol"] = p.name;
    rep["instance"] = size;
    rep["nodes"] = inst.nodes();
    rep["domains"] = to_string(domains.to_sexpr());
    rep["invok"] = {{"holds", inv.invok_holds}, {"failed_part", inv.failed_part},
                    {"states", inv.states_explored}, {"trace", trace_json(inst, inv.trace)}};
    if (bad)
      rep["bad"] = {{"reachable", bad->bad_reachable}, {"states", bad->states_explored},
                    {"trace", trace_json(inst, bad->trace)}};
    write_text(o.json_out, rep.dump(2) + "\n", out);
  }
  return inv.invok_holds && !(bad && bad->bad_reachable) ? kExitOk : kExitInvalid;
}

int cmd_examples(const Options& o, std::ostream& out) {
  for (const auto& [name, text] : builtin_examples()) {
    if (o.out_dir.empty()) {
      out << name << '\n';
      continue;
    }
    std::filesystem::create_directories(o.out_dir);
    std::ofstream(std::filesystem::path(o.out_dir) / name, std::ios::binary) << text;
    out << (std::filesystem::path(o.out_dir) / name).string() << '\n';
  }
  return kExitOk;
}

void add_oracle_flags(CLI::App* c, Options& o) {
  c->add_option("--bound", o.bound, "Oracle bound in nodes (default 2*(|Mod|+k)+2)")->check(CLI::PositiveNumber);
  c->add_option("--oracle-log", o.oracle_log, "Write the oracle query log to a file");
}

void add_vc_flags(CLI::App* c, Options& o) {
  add_oracle_flags(c, o);
  c->add_flag("--bundled", o.bundled, "One bundled step statement per class");
  c->add_flag("--check-bad", o.check_bad, "Add the Inv => not Bad statement");
  c->add_flag("--include-vacuous", o.include_vacuous, "Also emit statements whose EqClass is bottom (k = 1)");
  c->add_option("--init-vc", o.init_vc, "Initial statement form")->check(CLI::IsMember({"cross", "separate"}));
}

void add_solver_flags(CLI::App* c, Options& o) {
  c->add_option("--solver", o.solver, "Solver command (default: $FOP_SOLVER or 'z3 -in')");
  c->add_option("--timeout", o.timeout, "Per-statement timeout in seconds")->check(CLI::PositiveNumber);
  c->add_option("--cardinality", o.cardinality, "Restrict Proc to at most N elements")->check(CLI::PositiveNumber);
  c->add_option("--emit-dir", o.emit_dir, "Write one SMT-LIB2 script per statement");
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Modular verification of first-order protocols over implicit topologies", kToolName};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  Options o;

  auto* check = app.add_subcommand("check", "Generate and discharge the verification conditions");
  check->add_option("file", o.file, "Protocol file or shipped example name")->required();
  add_vc_flags(check, o);
  add_solver_flags(check, o);
  check->add_flag("--small-model", o.small_model, "Also check at Proc cardinality |Mod(p)|+k");
  check->add_option("--jobs", o.jobs, "Concurrent solver processes")->check(CLI::PositiveNumber);
  check->add_option("--json", o.json_out, "Write the JSON report ('-' for stdout)");

  auto* vc = app.add_subcommand("vc", "Dump the verification-condition suite");
  vc->add_option("file", o.file, "Protocol file or shipped example name")->required();
  add_vc_flags(vc, o);
  vc->add_option("--format", o.format, "Output form")->check(CLI::IsMember({"sexpr", "smt2"}));
  vc->add_option("--cardinality", o.cardinality, "Restrict Proc in emitted scripts")->check(CLI::PositiveNumber);
  vc->add_option("--emit-dir", o.emit_dir, "Write one SMT-LIB2 script per statement");

  auto* chi = app.add_subcommand("chi", "Dump characteristic formulas and EqClass tables");
  chi->add_option("file", o.file, "Protocol file or shipped example name")->required();
  chi->add_option("--class", o.cls, "Topological class")->required();
  add_oracle_flags(chi, o);

  auto* orc = app.add_subcommand("oracle", "Answer one realizability query");
  orc->add_option("family", o.family, "Topology family (rbr, uniring, btw)")->required();
  orc->add_option("--query", o.query, "Conjunction of literals, e.g. \"(and (Red p) (Red (left p)))\"")->required();
  add_oracle_flags(orc, o);

  auto* sim = app.add_subcommand("simulate", "Explicit-state checks on one concrete instance");
  sim->add_option("file", o.file, "Protocol file or shipped example name")->required();
  sim->add_option("--size", o.size, "Instance parameter")->check(CLI::PositiveNumber);
  sim->add_option("--domain", o.domains, "Override a value domain, e.g. Id=0..3 or Value=null,r,b");
  sim->add_option("--cap", o.cap, "State cap");
  sim->add_option("--json", o.json_out, "Write the JSON result ('-' for stdout)");

  auto* ex = app.add_subcommand("examples", "List or write the shipped protocol files");
  ex->add_option("--out", o.out_dir, "Directory to write them to");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (check->parsed()) return cmd_check(o, out);
    if (vc->parsed()) return cmd_vc(o, out);
    if (chi->parsed()) return cmd_chi(o, out);
    if (orc->parsed()) return cmd_oracle(o, out);
    if (sim->parsed()) return cmd_simulate(o, out);
    if (ex->parsed()) return cmd_examples(o, out);
  } catch (const ParseError& e) {
    err << "parse error: " << o.file << ":" << e.what() << '\n';
    return kExitParse;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const SortError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const SectionError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const SolverNotFound& e) {
    err << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const SolverCrashed& e) {
    err << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const UnsupportedBackground& e) {
    err << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitParse;
}

}  // namespace fop::cli
