#include <gtest/gtest.h>

#include "fop/error.hpp"
#include "fop/smt_backend.hpp"
#include "fop/subprocess.hpp"
#include "fop/text.hpp"
#include "support.hpp"

namespace fop {
namespace {

#define REQUIRE_SOLVER() \
  if (!test::solver_available()) GTEST_SKIP() << "z3 not on PATH"

struct Checked {
  ProtocolDocument doc;
  VCSuite suite;
  std::vector<CheckResult> results;
};

Checked check_file(const std::string& file, const VCOptions& opts = {}) {
  Checked c{test::load_protocol(file), {}, {}};
  Oracle o(c.doc.protocol->family, c.doc.protocol->default_oracle_bound());
  c.suite = gen_suite(*c.doc.protocol, c.doc.invariant, o, opts);
  c.results = check_suite(c.suite, *c.doc.protocol, SolverConfig::from_env());
  return c;
}

VCStatement statement(std::string id, Formula f) {
  VCStatement s;
  s.id = std::move(id);
  s.sentence = std::move(f);
  return s;
}

TEST(SmtScript, InitStatementScript) {
  const auto doc = test::load_protocol("rbr.fop");
  Oracle o(doc.protocol->family, 10);
  const auto init = gen_init_vcs(*doc.protocol, doc.invariant, o);
  const std::string s = emit_script(init[0], *doc.protocol, {});
  for (const char* needle : {"(declare-sort Proc 0)", "(declare-sort Value 0)", "(declare-fun var (Proc) Value)",
                             "(declare-fun |var'| (Proc) Value)", "(declare-fun null () Value)",
                             "(declare-fun r () Value)", "(declare-fun b () Value)", "(assert (not (forall",
                             "(check-sat)", "(get-model)"})
    EXPECT_NE(s.find(needle), std::string::npos) << needle;
  EXPECT_LT(s.find("(set-option :produce-models true)"), s.find("(set-logic UF)"));
}

TEST(SmtScript, LeaderScriptCarriesOrderAxioms) {
  const auto doc = test::load_protocol("leader.fop");
  Oracle o(doc.protocol->family, 12);
  const auto init = gen_init_vcs(*doc.protocol, doc.invariant, o);
  const std::string s = emit_script(init[0], *doc.protocol, {});
  EXPECT_NE(s.find("(le a a)"), std::string::npos);
  EXPECT_NE(s.find("(le zero a)"), std::string::npos);
}

TEST(SmtScript, CardinalityBoundEnumeratesProc) {
  const auto doc = test::load_protocol("rbr.fop");
  SolverConfig cfg;
  cfg.cardinality_bound = 4;
  const std::string s = emit_script(statement("t", Formula::top()), *doc.protocol, cfg);
  EXPECT_NE(s.find("|Proc#3|"), std::string::npos);
  EXPECT_EQ(s.find("|Proc#4|"), std::string::npos);
}

TEST(SmtScript, EmissionIsDeterministic) {
  const auto doc = test::load_protocol("rbr.fop");
  Oracle o(doc.protocol->family, 10);
  const auto steps = gen_step_vcs(*doc.protocol, doc.invariant, o);
  for (const auto& st : steps) EXPECT_EQ(emit_script(st, *doc.protocol, {}), emit_script(st, *doc.protocol, {}));
}

TEST(SmtBound, SmallModelBounds) {
  EXPECT_EQ(small_model_bound(*test::load_protocol("rbr.fop").protocol), 4);
  EXPECT_EQ(small_model_bound(*test::load_protocol("leader.fop").protocol), 5);
}

TEST(SmtProcess, SplitCommand) {
  EXPECT_EQ(split_command("z3 -in -T:5"), (std::vector<std::string>{"z3", "-in", "-T:5"}));
  EXPECT_EQ(split_command("'my solver' \"-a b\""), (std::vector<std::string>{"my solver", "-a b"}));
}

TEST(SmtProcess, MissingSolverThrows) {
  SolverConfig cfg;
  cfg.command = {"/nonexistent/solver-binary"};
  EXPECT_THROW(run_solver("(check-sat)\n", cfg), SolverNotFound);
}

TEST(SmtProcess, SlowSolverTimesOut) {
  SolverConfig cfg;
  cfg.command = {"sh", "-c", "sleep 10"};
  cfg.timeout_seconds = 1;
  const auto doc = test::load_protocol("rbr.fop");
  const CheckResult r = check_statement(statement("slow", Formula::top()), *doc.protocol, cfg);
  EXPECT_EQ(r.verdict, Verdict::kTimeout);
  EXPECT_LT(r.wall_seconds, 5.0);
}

TEST(SmtProcess, GarbageOutputIsAnError) {
  SolverConfig cfg;
  cfg.command = {"sh", "-c", "cat >/dev/null; echo '(error \"boom\")'; exit 1"};
  const auto doc = test::load_protocol("rbr.fop");
  const CheckResult r = check_statement(statement("bad", Formula::top()), *doc.protocol, cfg);
  EXPECT_EQ(r.verdict, Verdict::kError);
  EXPECT_NE(r.note.find("boom"), std::string::npos);
}

TEST(SmtSolver, UnsatIsValid) {
  REQUIRE_SOLVER();
  const RawVerdict v = run_solver("(declare-const a Bool)(assert (and a (not a)))(check-sat)\n", SolverConfig::from_env());
  EXPECT_EQ(v.status, "unsat");
}

TEST(SmtSolver, SatCarriesModel) {
  REQUIRE_SOLVER();
  const RawVerdict v = run_solver("(declare-const a Bool)(assert a)(check-sat)(get-model)\n", SolverConfig::from_env());
  EXPECT_EQ(v.status, "sat");
  EXPECT_NE(v.model_text.find("define-fun a"), std::string::npos);
}

TEST(SmtModel, ParsesUniverseAndDefinitions) {
  const auto doc = test::load_protocol("rbr.fop");
  const Signature& sig = doc.protocol->sig;
  const std::string text =
      "(\n"
      "  ;; universe for Proc:\n"
      "  ;;   Proc!val!0 Proc!val!1\n"
      "  (declare-fun Proc!val!0 () Proc)\n"
      "  (declare-fun Proc!val!1 () Proc)\n"
      "  (declare-fun Value!val!0 () Value)\n"
      "  (declare-fun Value!val!1 () Value)\n"
      "  (define-fun null () Value Value!val!0)\n"
      "  (define-fun b () Value Value!val!1)\n"
      "  (define-fun var ((x!0 Proc)) Value (ite (= x!0 Proc!val!1) Value!val!1 Value!val!0))\n"
      ")\n";
  const ModelStructure m = ModelStructure::parse(text, sig);
  EXPECT_EQ(m.domain_size(Sort::proc()), 2);
  EXPECT_EQ(m.domain_size(Sort("Value")), 2);
  const int p1[] = {1};
  const int p0[] = {0};
  EXPECT_EQ(m.apply(sig.get("var"), p1), m.apply(sig.get("b"), {}));
  EXPECT_EQ(m.apply(sig.get("var"), p0), m.apply(sig.get("null"), {}));
  EXPECT_EQ(evaluate(test::parse_in(sig, "(exists ((p Proc)) (= (var p) b))"), m), Truth::kTrue);
  EXPECT_THROW(ModelStructure::parse("sat sat", sig), ParseError);
}

TEST(SmtCheck, RedBlackRingIsInductive) {
  REQUIRE_SOLVER();
  const Checked c = check_file("rbr.fop");
  ASSERT_EQ(c.results.size(), 6u);
  for (const auto& r : c.results) EXPECT_EQ(r.verdict, Verdict::kValid) << r.statement_id << " " << r.note;
}

TEST(SmtCheck, BrokenInvariantHasConfirmedCountermodel) {
  REQUIRE_SOLVER();
  const Checked c = check_file("rbr-broken.fop");
  bool found = false;
  for (const auto& r : c.results)
    if (r.verdict == Verdict::kInvalid) {
      found = true;
      EXPECT_TRUE(r.countermodel.has_value()) << r.statement_id;
      EXPECT_EQ(r.fidelity, Fidelity::kConfirmed) << r.statement_id;
    }
  EXPECT_TRUE(found);
  EXPECT_FALSE(all_valid(c.results));
}

TEST(SmtCheck, LeaderElectionIsInductive) {
  REQUIRE_SOLVER();
  VCOptions opts;
  opts.check_bad = true;
  const Checked c = check_file("leader.fop", opts);
  for (const auto& r : c.results) EXPECT_EQ(r.verdict, Verdict::kValid) << r.statement_id << " " << r.note;
}

TEST(SmtCheck, VacuousStatementsDoNotChangeVerdicts) {
  REQUIRE_SOLVER();
  for (const char* f : {"rbr.fop", "rbr-broken.fop"}) {
    VCOptions opts;
    opts.include_vacuous = true;
    const Checked plain = check_file(f);
    const Checked all = check_file(f, opts);
    EXPECT_EQ(all_valid(plain.results), all_valid(all.results)) << f;
    for (std::size_t i = 0; i < all.results.size(); ++i)
      if (all.suite.statements[i].vacuous) EXPECT_EQ(all.results[i].verdict, Verdict::kValid);
  }
}

TEST(SmtCheck, SmallModelAgreesOnRing) {
  REQUIRE_SOLVER();
  for (const char* f : {"rbr.fop", "rbr-broken.fop"}) {
    const Checked c = check_file(f);
    const auto bounded = check_small_model(c.suite, *c.doc.protocol, SolverConfig::from_env());
    ASSERT_EQ(bounded.size(), c.results.size());
    for (std::size_t i = 0; i < bounded.size(); ++i) {
      EXPECT_EQ(bounded[i].verdict, c.results[i].verdict) << f << " " << bounded[i].statement_id;
      EXPECT_EQ(bounded[i].cardinality_bound, 4);
    }
  }
}

TEST(SmtCheck, TrivialSuiteValidAtEveryBound) {
  REQUIRE_SOLVER();
  auto doc = test::load_mutated("rbr.fop", "(Red (not (= (var p) b)))", "(Red true)");
  doc.protocol->trloc = Formula::top();
  Oracle o(doc.protocol->family, 10);
  const VCSuite s = gen_suite(*doc.protocol, doc.invariant, o);
  EXPECT_TRUE(all_valid(check_suite(s, *doc.protocol, SolverConfig::from_env())));
  for (int n = 1; n <= 4; ++n) {
    SolverConfig cfg = SolverConfig::from_env();
    cfg.cardinality_bound = n;
    EXPECT_TRUE(all_valid(check_suite(s, *doc.protocol, cfg))) << n;
  }
}

TEST(SmtCheck, ParallelMatchesSerial) {
  REQUIRE_SOLVER();
  const auto doc = test::load_protocol("rbr-broken.fop");
  Oracle o(doc.protocol->family, 10);
  const VCSuite s = gen_suite(*doc.protocol, doc.invariant, o);
  SolverConfig cfg = SolverConfig::from_env();
  const auto serial = check_suite(s, *doc.protocol, cfg);
  cfg.jobs = 3;
  const auto parallel = check_suite(s, *doc.protocol, cfg);
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(serial[i].statement_id, parallel[i].statement_id);
    EXPECT_EQ(serial[i].verdict, parallel[i].verdict);
  }
}

}  // namespace
}  // namespace fop
