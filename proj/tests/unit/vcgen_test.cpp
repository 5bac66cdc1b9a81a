#include <gtest/gtest.h>

#include "fop/normalize.hpp"
#include "fop/text.hpp"
#include "fop/vcgen.hpp"
#include "support.hpp"

namespace fop {
namespace {

class VcgenTest : public ::testing::Test {
 protected:
  void SetUp() override {
    doc_ = test::load_protocol("rbr.fop");
    oracle_ = std::make_unique<Oracle>(doc_.protocol->family, doc_.protocol->default_oracle_bound());
  }
  const Protocol& p() const { return *doc_.protocol; }
  ProtocolDocument doc_;
  std::unique_ptr<Oracle> oracle_;
};

std::vector<std::string> ids(const std::vector<VCStatement>& sts) {
  std::vector<std::string> out;
  for (const auto& s : sts) out.push_back(s.id);
  return out;
}

TEST_F(VcgenTest, SuiteShape) {
  const VCSuite s = gen_suite(p(), doc_.invariant, *oracle_);
  EXPECT_EQ(ids(s.statements),
            (std::vector<std::string>{"init.Red", "init.Black", "step.Red.1", "step.Red.2", "step.Black.1", "step.Black.2"}));
  EXPECT_EQ(s.oracle_bound, 10);
  EXPECT_EQ(s.protocol, "rbr");
  for (const auto& st : s.statements) {
    EXPECT_TRUE(free_vars(st.sentence).empty()) << st.id;
    EXPECT_NO_THROW(check_well_sorted(st.sentence, p().sig)) << st.id;
  }
}

TEST_F(VcgenTest, ClassStatementsMatchHandDerivation) {
  const VCSuite s = gen_suite(p(), doc_.invariant, *oracle_);
  for (const char* cls : {"Red", "Black"}) {
    const auto want = test::rbr_class_statements(p(), doc_.invariant, cls);
    std::vector<Formula> got;
    for (const auto& st : s.statements)
      if (st.top_class == cls) got.push_back(st.sentence);
    ASSERT_EQ(got.size(), 3u) << cls;
    // Every hand-derived statement is matched by exactly one generated statement.
    for (const auto& w : want) {
      int matches = 0;
      for (const auto& g : got) matches += test::same_statement(g, w) ? 1 : 0;
      EXPECT_EQ(matches, 1) << cls << " " << to_text(w);
    }
  }
}

TEST_F(VcgenTest, BlackStatementsAreSymmetric) {
  const VCSuite s = gen_suite(p(), doc_.invariant, *oracle_);
  for (const auto& st : s.statements) {
    if (st.top_class != "Black" || st.kind != VCKind::kStep) continue;
    const std::string text = to_text(st.sentence);
    EXPECT_NE(text.find("(Black q)"), std::string::npos);
  }
}

TEST_F(VcgenTest, TrivialInvariantInitStatementStillEmitted) {
  const auto init = gen_init_vcs(p(), doc_.invariant, *oracle_);
  ASSERT_EQ(init.size(), 2u);
  EXPECT_EQ(init[1].id, "init.Black");
  EXPECT_EQ(to_text(init[1].sentence), "(forall ((q Proc)) (=> (= (var q) null) true))");
}

TEST_F(VcgenTest, SeparateInitForm) {
  const auto init = gen_init_vcs(p(), doc_.invariant, *oracle_, VCOptions::InitForm::kSeparate);
  ASSERT_FALSE(init.empty());
  for (const auto& st : init) EXPECT_TRUE(free_vars(st.sentence).empty());
}

TEST_F(VcgenTest, AllRedColoringProducesNoStatement) {
  const auto steps = gen_step_vcs(p(), doc_.invariant, *oracle_);
  for (const auto& st : steps) {
    const std::string d = to_string(st.descriptor);
    EXPECT_FALSE(d.find("(Red (left p))") != std::string::npos && d.find("(Red p)") != std::string::npos) << d;
  }
}

TEST_F(VcgenTest, VacuousColoringsOnRequest) {
  const auto plain = gen_step_vcs(p(), doc_.invariant, *oracle_);
  const auto all = gen_step_vcs(p(), doc_.invariant, *oracle_, false, true);
  EXPECT_GT(all.size(), plain.size());
  std::size_t vac = 0;
  for (const auto& st : all) vac += st.vacuous ? 1 : 0;
  EXPECT_EQ(all.size() - vac, plain.size());
}

TEST_F(VcgenTest, BundledStatementPerClass) {
  const auto steps = gen_step_vcs(p(), doc_.invariant, *oracle_, true);
  EXPECT_EQ(ids(steps), (std::vector<std::string>{"bundled.Red", "bundled.Black"}));
}

TEST_F(VcgenTest, BadStatementIsClosed) {
  const VCStatement bad = gen_bad_vc(p(), doc_.invariant, *oracle_);
  EXPECT_EQ(bad.id, "bad");
  EXPECT_TRUE(free_vars(bad.sentence).empty());
}

TEST_F(VcgenTest, DigestAndDumpAreStable) {
  const VCSuite a = gen_suite(p(), doc_.invariant, *oracle_);
  Oracle fresh(p().family, 10);
  const VCSuite b = gen_suite(p(), doc_.invariant, fresh);
  EXPECT_EQ(dump_suite(a), dump_suite(b));
  EXPECT_EQ(a.protocol_hash.size(), 16u);
  auto other = test::load_protocol("rbr-broken.fop");
  EXPECT_NE(protocol_digest(*other.protocol, other.invariant), a.protocol_hash);
}

TEST_F(VcgenTest, ModTermsAndClassVector) {
  const TermSet m = mod_terms(p());
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(to_text(m[0]), "(left p)");
  ASSERT_EQ(qvec_terms(p()).size(), 1u);
  EXPECT_EQ(to_text(qvec_terms(p())[0]), "q");
}

TEST(VcgenLeader, StatementsRangeOverTheClassTriple) {
  const auto doc = test::load_protocol("leader.fop");
  Oracle o(doc.protocol->family, doc.protocol->default_oracle_bound());
  const VCSuite s = gen_suite(*doc.protocol, doc.invariant, o);
  EXPECT_EQ(s.oracle_bound, 12);
  ASSERT_GT(s.statements.size(), 2u);
  for (const auto& st : s.statements) {
    EXPECT_EQ(st.top_class, "btw");
    if (st.kind == VCKind::kStep) {
      const std::string text = to_text(st.sentence);
      EXPECT_NE(text.find("(btw x y z)"), std::string::npos) << st.id;
      EXPECT_NE(text.find("(next p)"), std::string::npos) << st.id;
    }
  }
}

}  // namespace
}  // namespace fop
