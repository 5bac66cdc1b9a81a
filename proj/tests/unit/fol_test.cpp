#include <gtest/gtest.h>

#include "fop/error.hpp"
#include "fop/fol.hpp"
#include "fop/normalize.hpp"
#include "fop/smtlib.hpp"
#include "fop/text.hpp"
#include "support.hpp"

namespace fop {
namespace {

using test::parse_in;
using test::parse_term_in;

class FolTest : public ::testing::Test {
 protected:
  void SetUp() override { sig_ = test::load_protocol("rbr.fop").protocol->sig; }
  Signature sig_;
};

TEST_F(FolTest, StateApplicationIsWellSorted) {
  const Term t = parse_term_in(sig_, "(var p)");
  EXPECT_NO_THROW(check_well_sorted(t, sig_));
  EXPECT_EQ(t.sort().name(), "Value");
}

TEST_F(FolTest, ApplicationToWrongSortIsRejected) {
  const Symbol& var = sig_.get("var");
  const Symbol& b = sig_.get("b");
  const Term bad = Term::app(var, {Term::constant(b)});
  EXPECT_THROW(check_well_sorted(bad, sig_), SortError);
  EXPECT_THROW(parse_term_in(sig_, "(var b)"), ParseError);
}

TEST_F(FolTest, SortErrorReportsPath) {
  const Symbol& var = sig_.get("var");
  const Formula f = Formula::conjunction(
      {Formula::top(), Formula::eq(Term::app(var, {Term::constant(sig_.get("b"))}), Term::constant(sig_.get("r")))});
  try {
    check_well_sorted(f, sig_);
    FAIL() << "expected SortError";
  } catch (const SortError& e) {
    EXPECT_NE(e.path().find("and[1]"), std::string::npos) << e.path();
  }
}

TEST_F(FolTest, BackgroundSymbolsTakeNoProcArguments) {
  Signature sig;
  EXPECT_THROW(sig.declare(Symbol::function("f", {Sort::proc()}, Sort("Value"), Section::kBackground)), SectionError);
  EXPECT_THROW(sig.declare(Symbol::function("g", {Sort("Value")}, Sort("Value"), Section::kState)), SectionError);
  EXPECT_THROW(sig.declare(Symbol::function("h", {Sort::proc(), Sort::proc()}, Sort::proc(), Section::kTopoEdge)),
               SectionError);
  EXPECT_THROW(sig.declare(Symbol::function("s", {Sort::proc(), Sort::proc()}, Sort("V"), Section::kState)),
               SectionError);
}

TEST_F(FolTest, DuplicateDeclarationIsRejected) {
  EXPECT_THROW(sig_.declare(Symbol::function("var", {Sort::proc()}, Sort("Value"), Section::kState)), Error);
}

TEST_F(FolTest, SubstituteFreeOccurrence) {
  const Formula f = parse_in(sig_, "(= (var p) null)");
  const Formula g = substitute(f, {{Var{"p", Sort::proc()}, Term::var("q", Sort::proc())}});
  EXPECT_EQ(to_text(g), "(= (var q) null)");
}

TEST_F(FolTest, SubstituteLeavesBoundOccurrence) {
  const Formula f = parse_in(sig_, "(forall ((p Proc)) (Red p))");
  const Formula g = substitute(f, {{Var{"p", Sort::proc()}, Term::var("q", Sort::proc())}});
  EXPECT_EQ(g, f);
}

TEST_F(FolTest, SubstituteInstantiatesInvariantAtNeighbour) {
  const Formula inv = parse_in(sig_, "(not (= (var x) b))");
  const Formula g = substitute(inv, {{Var{"x", Sort::proc()}, parse_term_in(sig_, "(left p)")}});
  EXPECT_EQ(to_text(g), "(not (= (var (left p)) b))");
}

TEST_F(FolTest, SubstituteAvoidsCapture) {
  const Formula f = parse_in(sig_, "(forall ((q Proc)) (= (var q) (var p)))");
  const Formula g = substitute(f, {{Var{"p", Sort::proc()}, Term::var("q", Sort::proc())}});
  const auto fv = free_vars(g);
  ASSERT_EQ(fv.size(), 1u);
  EXPECT_EQ(fv.begin()->name, "q");
  ASSERT_TRUE(g.is(Formula::Kind::kForall));
  EXPECT_NE(g.bound()[0].name, "q");
}

TEST_F(FolTest, SubstituteRejectsSortChange) {
  const Formula f = parse_in(sig_, "(= (var p) null)");
  EXPECT_THROW(substitute(f, {{Var{"p", Sort::proc()}, Term::constant(sig_.get("b"))}}), SortError);
}

TEST_F(FolTest, PrimeStateSymbol) {
  const auto scope = std::set<std::string>{"var"};
  EXPECT_EQ(to_text(prime(parse_in(sig_, "(= (var p) b)"), scope, sig_)), "(= (var' p) b)");
}

TEST_F(FolTest, PrimeLeavesTopology) {
  const auto scope = std::set<std::string>{"var"};
  const Formula red = parse_in(sig_, "(Red p)");
  EXPECT_EQ(prime(red, scope, sig_), red);
}

TEST_F(FolTest, PrimeInvariantInstance) {
  const auto scope = std::set<std::string>{"var"};
  EXPECT_EQ(to_text(prime(parse_in(sig_, "(not (= (var q) b))"), scope, sig_)), "(not (= (var' q) b))");
}

TEST_F(FolTest, PrimeNeverDoublePrimes) {
  const auto scope = std::set<std::string>{"var", "b"};
  const Formula once = prime(parse_in(sig_, "(= (var p) b)"), scope, sig_);
  EXPECT_EQ(prime(once, scope, sig_), once);
}

TEST_F(FolTest, PrimeWithoutRegisteredCopyThrows) {
  Signature sig;
  sig.add_sort(Sort("V"));
  sig.declare(Symbol::function("f", {Sort::proc()}, Sort("V"), Section::kState));
  Signature other;
  other.add_sort(Sort("V"));
  const Formula f = Formula::eq(Term::app(sig.get("f"), {Term::var("p", Sort::proc())}),
                                Term::app(sig.get("f"), {Term::var("q", Sort::proc())}));
  EXPECT_THROW(prime(f, {"f"}, other), MissingPrimedCopy);
}

TEST_F(FolTest, FreeVariables) {
  EXPECT_TRUE(free_vars(parse_in(sig_, "(forall ((p Proc)) (= (var p) null))")).empty());
  const auto fv = free_vars(parse_in(sig_, "(= (var p) (var q))"));
  ASSERT_EQ(fv.size(), 2u);
  EXPECT_EQ(fv.begin()->name, "p");
  const auto p = test::load_protocol("rbr.fop").protocol;
  EXPECT_TRUE(free_vars(build_tau(*p)).empty());
}

TEST_F(FolTest, SmtlibTrivialAssertion) {
  EmissionOptions opts;
  opts.preamble = false;
  EXPECT_EQ(to_smtlib(Formula::top(), sig_, opts), "(assert true)\n");
}

TEST_F(FolTest, SmtlibQuantifiedAssertion) {
  const std::string s = to_smtlib(parse_in(sig_, "(forall ((p Proc)) (= (var p) null))"), sig_, {});
  EXPECT_NE(s.find("(declare-sort Proc 0)"), std::string::npos);
  EXPECT_NE(s.find("(assert (forall ((p Proc)) (= (var p) null)))"), std::string::npos);
}

TEST_F(FolTest, SmtlibCardinalityBound) {
  EmissionOptions opts;
  opts.cardinality_bound = 4;
  const std::string s = to_smtlib(Formula::top(), sig_, opts);
  for (int i = 0; i < 4; ++i) EXPECT_NE(s.find("|Proc#" + std::to_string(i) + "| () Proc"), std::string::npos);
  EXPECT_EQ(s.find("|Proc#4|"), std::string::npos);
}

TEST_F(FolTest, SmtlibIsDeterministic) {
  const Formula f = parse_in(sig_, "(forall ((q Proc)) (=> (Red q) (not (= (var' q) b))))");
  EXPECT_EQ(to_smtlib(f, sig_, {}), to_smtlib(f, sig_, {}));
}

TEST_F(FolTest, SmtlibQuotesUnusualSymbols) {
  EXPECT_EQ(smt_symbol("var'"), "|var'|");
  EXPECT_EQ(smt_symbol("var"), "var");
  EXPECT_EQ(smt_symbol("1x"), "|1x|");
}

TEST_F(FolTest, DistinctExpandsPairwise) {
  const Formula f = parse_in(sig_, "(distinct (left p) p (right p))");
  ASSERT_TRUE(f.is(Formula::Kind::kAnd));
  EXPECT_EQ(f.children().size(), 3u);
}

TEST_F(FolTest, AcEqualityIgnoresOrderAndOrientation) {
  const Formula a = parse_in(sig_, "(and (Red q) (not (= p q)) (Black p))");
  const Formula b = parse_in(sig_, "(and (Black p) (and (Red q)) (not (= q p)))");
  EXPECT_TRUE(ac_equal(a, b));
  EXPECT_FALSE(ac_equal(a, parse_in(sig_, "(and (Red q) (Black p))")));
}

TEST_F(FolTest, AcEqualityRenamesBoundVariables) {
  EXPECT_TRUE(ac_equal(parse_in(sig_, "(forall ((p Proc)) (Red p))"), parse_in(sig_, "(forall ((q Proc)) (Red q))")));
}

TEST_F(FolTest, NnfPushesNegations) {
  const Formula f = nnf(parse_in(sig_, "(not (and (Red p) (=> (Black q) (Red q))))"));
  EXPECT_TRUE(ac_equal(f, parse_in(sig_, "(or (not (Red p)) (and (Black q) (not (Red q))))")));
}

TEST_F(FolTest, PrenexHoistsQuantifiers) {
  const Formula f = prenex(parse_in(sig_, "(and (forall ((y Proc)) (Red y)) (Black p))"));
  ASSERT_TRUE(f.is(Formula::Kind::kForall));
  EXPECT_EQ(free_vars(f).size(), 1u);
}

TEST_F(FolTest, ProcDepth) {
  EXPECT_EQ(parse_term_in(sig_, "p").proc_depth(), 0);
  EXPECT_EQ(parse_term_in(sig_, "(left p)").proc_depth(), 1);
  EXPECT_EQ(parse_term_in(sig_, "(left (right p))").proc_depth(), 2);
}

}  // namespace
}  // namespace fop
