#include <gtest/gtest.h>

#include <set>

#include "fop/chi.hpp"
#include "fop/error.hpp"
#include "fop/normalize.hpp"
#include "fop/text.hpp"
#include "support.hpp"

namespace fop {
namespace {

using test::parse_in;
using test::parse_term_in;

class ChiTest : public ::testing::Test {
 protected:
  void SetUp() override {
    fam_ = find_family("rbr");
    fam_->declare_into(sig_);
    oracle_ = std::make_unique<Oracle>(fam_, fam_->default_bound());
    red_ = *fam_->find_symbol("Red");
    black_ = *fam_->find_symbol("Black");
  }
  Term t(const char* text) { return parse_term_in(sig_, text); }
  std::vector<Term> mod() { return {t("(left p)"), t("p"), t("(right p)")}; }
  TermSet neighbourhood() { return TermSet({t("(left p)"), t("p"), t("q"), t("(right p)")}); }

  std::shared_ptr<const TopologyFamily> fam_;
  Signature sig_;
  std::unique_ptr<Oracle> oracle_;
  Symbol red_, black_;
};

TEST_F(ChiTest, TermOrderFollowsCallNotation) {
  const TermSet ts = neighbourhood();
  ASSERT_EQ(ts.size(), 4u);
  EXPECT_EQ(to_text(ts[0]), "(left p)");
  EXPECT_EQ(to_text(ts[1]), "p");
  EXPECT_EQ(to_text(ts[2]), "q");
  EXPECT_EQ(to_text(ts[3]), "(right p)");
  EXPECT_EQ(ts.vars().size(), 2u);
}

TEST_F(ChiTest, ColoringCounts) {
  EXPECT_EQ(enumerate_colorings(neighbourhood(), fam_->class_preds(), 1, {t("q")}).size(), 81u);
  EXPECT_EQ(count_colorings(4, 2, 1), 81u);
  EXPECT_EQ(enumerate_colorings(TermSet({t("p")}), {red_}, 1, {t("p")}).size(), 2u);
}

TEST_F(ChiTest, BetweennessColoringsColourOnlyTheClassTuple) {
  auto fam = find_family("btw");
  Signature sig;
  fam->declare_into(sig);
  const std::vector<Term> q{parse_term_in(sig, "x"), parse_term_in(sig, "y"), parse_term_in(sig, "z")};
  const TermSet ts({parse_term_in(sig, "p"), parse_term_in(sig, "(next p)"), q[0], q[1], q[2]});
  const auto cs = enumerate_colorings(ts, fam->class_preds(), 3, q);
  // {btw, ⊤} on q⃗ times the 52 partitions of 5 terms.
  EXPECT_EQ(cs.size(), 104u);
  const std::size_t qt = ts.tuple_index({static_cast<int>(*ts.index_of(q[0])), static_cast<int>(*ts.index_of(q[1])),
                                         static_cast<int>(*ts.index_of(q[2]))});
  for (const auto& c : cs) {
    ASSERT_EQ(c.partition.size(), 5u);
    for (std::size_t i = 0; i < c.sigma.size(); ++i)
      if (i != qt) EXPECT_EQ(c.sigma[i], -1);
  }
}

TEST_F(ChiTest, ColoringGuard) { EXPECT_THROW(enumerate_colorings(neighbourhood(), fam_->class_preds(), 1, {t("q")}, 10), ExplosionGuard); }

TEST_F(ChiTest, EqClassOfMixedNeighbourhood) {
  // p and q red, both neighbours of p black.
  const Coloring c{{1, 0, 0, 1}, {}};
  const TermSet ts = neighbourhood();
  const EqClassFormula e = eqclass_of(*oracle_, c, ts);
  ASSERT_FALSE(e.bottom);
  std::set<std::string> got;
  for (const auto& l : e.literals) got.insert(to_text(l));
  const std::set<std::string> want{"(not (= (left p) p))", "(not (= (left p) q))", "(not (= (left p) (right p)))",
                                   "(not (= p (right p)))", "(not (= q (right p)))"};
  EXPECT_EQ(got, want);
  EXPECT_EQ(e.witnesses.size(), 2u);  // p = q is left open
}

TEST_F(ChiTest, EqClassOfAllRedIsBottom) {
  const EqClassFormula e = eqclass_of(*oracle_, Coloring{{0, 0, 0, 0}, {}}, neighbourhood());
  EXPECT_TRUE(e.bottom);
  EXPECT_EQ(e.to_formula(), Formula::bottom());
}

TEST_F(ChiTest, EqClassOfSingleTermIsTop) {
  const EqClassFormula e = eqclass_of(*oracle_, Coloring{{0}, {}}, TermSet({t("p")}));
  EXPECT_FALSE(e.bottom);
  EXPECT_TRUE(e.literals.empty());
  EXPECT_EQ(e.to_formula(), Formula::top());
}

TEST_F(ChiTest, CharacteristicWithoutNeighbourhood) {
  const Characteristic c = chi_of(*oracle_, red_, {}, {t("q")});
  EXPECT_EQ(to_text(c.to_formula()), "(Red q)");
}

TEST_F(ChiTest, CharacteristicOfRedOverMod) {
  const Characteristic c = chi_of(*oracle_, red_, mod(), {t("q")});
  const Formula want = parse_in(sig_,
                                "(and (Red q) (distinct (left p) p (right p))"
                                "  (or (and (Red (left p)) (Black p) (Red (right p)) (not (= p q)))"
                                "      (and (Black (left p)) (Red p) (Black (right p)) (distinct (left p) (right p) q))))");
  EXPECT_TRUE(ac_equal(c.to_formula(), want)) << to_text(c.to_formula());
  EXPECT_EQ(c.branches.size(), 2u);
  EXPECT_EQ(c.bound_used, 10);
}

TEST_F(ChiTest, CharacteristicRejectsForeignClass) {
  const Symbol other = Symbol::predicate("Green", {Sort::proc()}, Section::kTopoClass);
  EXPECT_THROW(chi_of(*oracle_, other, mod(), {t("q")}), Error);
}

TEST_F(ChiTest, BranchWitnessesRealizeTheirBlocks) {
  for (const Symbol& top : {red_, black_}) {
    const Characteristic c = chi_of(*oracle_, top, mod(), {t("q")});
    const auto vars = std::vector<Var>{{"p", Sort::proc()}, {"q", Sort::proc()}};
    for (const auto& b : c.branches) {
      test::RefRing g{"rbr", b.witness.size};
      std::map<std::string, int> asg;
      for (std::size_t i = 0; i < vars.size(); ++i) asg[vars[i].name] = b.witness.assignment[i];
      EXPECT_TRUE(test::ref_holds(g, conj({c.anchor.to_formula(), b.to_formula()}), asg)) << to_text(b.to_formula());
    }
  }
}

TEST_F(ChiTest, EveryRealizableNeighbourhoodSatisfiesCharacteristic) {
  // Exhaustive check on every ring within the bound: whenever Top(q) holds,
  // the characteristic holds at that assignment.
  for (const Symbol& top : {red_, black_}) {
    const Formula chi = chi_of(*oracle_, top, mod(), {t("q")}).to_formula();
    for (const auto& g : test::ref_instances("rbr", 10))
      for (int p = 0; p < g.nodes; ++p)
        for (int q = 0; q < g.nodes; ++q) {
          if (!g.holds(top.name(), {q})) continue;
          EXPECT_TRUE(test::ref_holds(g, chi, {{"p", p}, {"q", q}})) << top.name() << " n=" << g.nodes;
        }
  }
}

TEST_F(ChiTest, BranchesAgreeWithMaximalColorings) {
  const TermSet ts = neighbourhood();
  const std::size_t qi = *ts.index_of(t("q"));
  for (std::size_t top = 0; top < 2; ++top) {
    const Symbol& cls = fam_->class_preds()[top];
    std::set<std::string> from_colorings;
    for (const auto& c : enumerate_colorings(ts, fam_->class_preds(), 1, {t("q")})) {
      if (c.sigma[qi] != static_cast<int>(top)) continue;
      if (std::find(c.sigma.begin(), c.sigma.end(), -1) != c.sigma.end()) continue;
      const EqClassFormula e = eqclass_of(*oracle_, c, ts);
      if (e.bottom) continue;
      from_colorings.insert(to_text(ac_normalize(conj({chi_sigma(c, ts, fam_->class_preds(), 1), e.to_formula()}))));
    }
    std::set<std::string> from_branches;
    const Characteristic ch = chi_of(*oracle_, cls, mod(), {t("q")});
    for (const auto& b : ch.branches)
      from_branches.insert(to_text(ac_normalize(conj({ch.anchor.to_formula(), b.to_formula()}))));
    EXPECT_EQ(from_colorings, from_branches) << cls.name();
  }
}

TEST_F(ChiTest, DumpsAreDeterministic) {
  const Characteristic a = chi_of(*oracle_, red_, mod(), {t("q")});
  Oracle fresh(fam_, fam_->default_bound());
  const Characteristic b = chi_of(fresh, red_, mod(), {t("q")});
  EXPECT_EQ(to_string(to_sexpr(a)), to_string(to_sexpr(b)));
}

TEST_F(ChiTest, BetweennessCharacteristicBranchesAreRealizable) {
  auto fam = find_family("btw");
  Signature sig;
  fam->declare_into(sig);
  Oracle o(fam, fam->default_bound());
  const std::vector<Term> q{parse_term_in(sig, "x"), parse_term_in(sig, "y"), parse_term_in(sig, "z")};
  const Characteristic c = chi_of(o, *fam->find_symbol("btw"), {parse_term_in(sig, "p"), parse_term_in(sig, "(next p)")}, q);
  ASSERT_FALSE(c.unrealizable);
  EXPECT_EQ(to_text(c.anchor.classes.front().atom()), "(btw x y z)");
  EXPECT_GT(c.branches.size(), 1u);
  const std::vector<std::string> vars{"p", "x", "y", "z"};
  for (const auto& b : c.branches) {
    test::RefRing g{"btw", b.witness.size};
    std::map<std::string, int> asg;
    for (std::size_t i = 0; i < vars.size(); ++i) asg[vars[i]] = b.witness.assignment[i];
    EXPECT_TRUE(test::ref_holds(g, conj({c.anchor.to_formula(), b.to_formula()}), asg));
  }
}

}  // namespace
}  // namespace fop
