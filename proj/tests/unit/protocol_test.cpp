#include <gtest/gtest.h>

#include "fop/error.hpp"
#include "fop/normalize.hpp"
#include "fop/protocol.hpp"
#include "fop/protocol_file.hpp"
#include "fop/text.hpp"
#include "support.hpp"

namespace fop {
namespace {

using test::load_mutated;
using test::load_protocol;
using test::parse_in;

ValidationError::Kind validation_kind(const std::function<void()>& f) {
  try {
    f();
  } catch (const ValidationError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected ValidationError";
  return ValidationError::Kind::kOther;
}

TEST(Protocol, ShippedExamplesValidate) {
  for (const char* f : {"rbr.fop", "rbr-broken.fop", "leader.fop"}) {
    const auto doc = load_protocol(f);
    EXPECT_NO_THROW(validate_protocol(*doc.protocol, doc.invariant)) << f;
  }
}

TEST(Protocol, RedBlackRingShape) {
  const auto doc = load_protocol("rbr.fop");
  const Protocol& p = *doc.protocol;
  EXPECT_EQ(p.family->name(), "rbr");
  ASSERT_EQ(p.mod.size(), 3u);
  EXPECT_EQ(to_text(p.mod[0]), "p");
  EXPECT_TRUE(ac_equal(p.init_at(p.sig.get("Red"), {Term::var("q", Sort::proc())}), parse_in(p.sig, "(= (var q) null)")));
  EXPECT_EQ(p.mutable_scope(), (std::set<std::string>{"b", "null", "r", "var"}));
}

TEST(Protocol, TrlocOutsideModIsRejected) {
  const auto kind = validation_kind([] {
    load_mutated("rbr.fop", "(= (var' (right p)) b)", "(= (var' (left (left p))) b)");
  });
  EXPECT_EQ(kind, ValidationError::Kind::kModViolation);
}

TEST(Protocol, NestedModTermIsRejected) {
  const auto kind = validation_kind([] { load_mutated("rbr.fop", "(mod p (left p) (right p))", "(mod p (left (left p)))"); });
  EXPECT_EQ(kind, ValidationError::Kind::kModViolation);
}

TEST(Protocol, InitMentioningClassIsRejected) {
  const auto kind = validation_kind([] {
    load_mutated("rbr.fop", "(Red (= (var p) null))", "(Red (and (Red p) (= (var p) null)))");
  });
  EXPECT_EQ(kind, ValidationError::Kind::kInitShapeError);
}

TEST(Protocol, InvariantMentioningTopologyIsRejected) {
  const auto kind = validation_kind([] {
    load_mutated("rbr.fop", "(Red (not (= (var p) b)))", "(Red (not (= (var (left p)) b)))");
  });
  EXPECT_EQ(kind, ValidationError::Kind::kTopoSymbolInInvariant);
}

TEST(Protocol, InvariantWithStrayVariableIsRejected) {
  try {
    load_mutated("rbr.fop", "(Red (not (= (var p) b)))", "(Red (not (= (var q) b)))");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("'q'"), std::string::npos);
  }
}

TEST(Protocol, UnknownClassIsRejected) {
  EXPECT_THROW(load_mutated("rbr.fop", "(Black true))", "(Green true))"), Error);
}

TEST(Protocol, RedBlackFrame) {
  const auto doc = load_protocol("rbr.fop");
  const Protocol& p = *doc.protocol;
  const Formula expect = parse_in(p.sig,
                                  "(and (= null null') (= r r') (= b b')"
                                  "  (forall ((y Proc)) (=> (and (not (= y p)) (not (= y (left p))) (not (= y (right p))))"
                                  "                         (= (var' y) (var y)))))");
  EXPECT_TRUE(ac_equal(build_frame(p), expect)) << to_text(build_frame(p));
}

TEST(Protocol, LeaderFrame) {
  const auto doc = load_protocol("leader.fop");
  const Protocol& p = *doc.protocol;
  const Formula frame = build_frame(p);
  const auto syms = symbols_of(frame);
  std::set<std::string> names;
  for (const auto& s : syms) names.insert(s.full_name());
  EXPECT_EQ(names, (std::set<std::string>{"comp", "comp'", "id", "id'", "le", "le'", "next", "zero", "zero'"}));
  EXPECT_EQ(free_vars(frame).size(), 1u);
}

TEST(Protocol, FrameWithoutStateIsUnmod) {
  auto doc = load_protocol("rbr.fop");
  Protocol p;
  p.family = doc.protocol->family;
  p.sig.add_sort(Sort("Value"));
  p.family->declare_into(p.sig);
  p.sig.declare(Symbol::constant("c", Sort("Value"), Section::kBackground));
  p.mod = doc.protocol->mod;
  EXPECT_EQ(build_frame(p), build_unmod(p));
  EXPECT_EQ(to_text(build_unmod(p)), "(= c c')");
}

TEST(Protocol, FrameVariableAvoidsGivenNames) {
  const auto doc = load_protocol("rbr.fop");
  const Formula f = build_frame(*doc.protocol, {"y"});
  EXPECT_EQ(to_text(f).find("(y Proc)"), std::string::npos);
  EXPECT_NE(to_text(f).find("(y1 Proc)"), std::string::npos);
}

TEST(Protocol, TauIsExistentialOverTrlocAndFrame) {
  const auto doc = load_protocol("rbr.fop");
  const Protocol& p = *doc.protocol;
  const Formula tau = build_tau(p);
  ASSERT_TRUE(tau.is(Formula::Kind::kExists));
  EXPECT_EQ(tau.bound()[0].name, "p");
  EXPECT_TRUE(free_vars(tau).empty());
  EXPECT_TRUE(ac_equal(tau.body(), conj({p.trloc, build_frame(p)})));
}

TEST(Protocol, TauOfTrivialProtocolIsFrame) {
  auto doc = load_protocol("rbr.fop");
  Protocol p = *doc.protocol;
  p.trloc = Formula::top();
  EXPECT_TRUE(ac_equal(build_tau(p), exists({p.actor}, build_frame(p))));
}

TEST(Protocol, InvOkIsClosed) {
  for (const char* f : {"rbr.fop", "leader.fop"}) {
    const auto doc = load_protocol(f);
    const Formula ok = build_invok(*doc.protocol, doc.invariant);
    EXPECT_TRUE(free_vars(ok).empty()) << f;
    EXPECT_NO_THROW(check_well_sorted(ok, doc.protocol->sig)) << f;
  }
}

TEST(Protocol, InvariantInstantiation) {
  const auto doc = load_protocol("rbr.fop");
  const Protocol& p = *doc.protocol;
  const Formula f = inv_at(doc.invariant, p.sig.get("Red"), {test::parse_term_in(p.sig, "(left p)")});
  EXPECT_EQ(to_text(f), "(not (= (var (left p)) b))");
  EXPECT_EQ(inv_at(doc.invariant, p.sig.get("Black"), {Term::var("q", Sort::proc())}), Formula::top());
}

TEST(Protocol, ClassVariableNames) {
  EXPECT_EQ(class_vars(1)[0].name, "q");
  ASSERT_EQ(class_vars(3).size(), 3u);
  EXPECT_EQ(class_vars(3)[2].name, "z");
  EXPECT_EQ(class_vars(2)[1].name, "q2");
}

}  // namespace
}  // namespace fop
