#include <gtest/gtest.h>

#include "fop/error.hpp"
#include "fop/protocol_file.hpp"
#include "fop/sexpr.hpp"
#include "fop/text.hpp"
#include "support.hpp"

namespace fop {
namespace {

const char* kMinimal = R"((sorts Value)
(background (c () Value))
(state (v (Proc) Value))
(topology uniring)
(init (Node (= (v p) c)))
(mod p (next p))
(trloc (= (v' (next p)) (v p)))
(invariant (Node (= (v p) c)))
(concrete (Value (enum c d)))
)";

std::pair<std::size_t, std::size_t> parse_error_at(const std::string& text) {
  try {
    parse_protocol_text(text, "t");
  } catch (const ParseError& e) {
    return {e.line(), e.column()};
  }
  ADD_FAILURE() << "expected ParseError";
  return {0, 0};
}

TEST(SExpr, ReadsNestedListsWithPositions) {
  const auto xs = parse_sexprs("(a (b c))\n; note\n  |x y|");
  ASSERT_EQ(xs.size(), 2u);
  EXPECT_TRUE(xs[0].is_call("a"));
  EXPECT_EQ(xs[0][1][1].atom, "c");
  EXPECT_TRUE(xs[1].quoted);
  EXPECT_EQ(xs[1].atom, "x y");
  EXPECT_EQ(xs[1].line, 3u);
  EXPECT_EQ(xs[1].column, 3u);
  EXPECT_EQ(to_string(xs[1]), "|x y|");
}

TEST(SExpr, UnbalancedInputReportsPosition) {
  try {
    parse_sexprs("(a\n  (b)");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
  EXPECT_THROW(parse_sexprs(")"), ParseError);
  EXPECT_THROW(parse_sexpr("a b"), ParseError);
}

TEST(ProtocolFile, MinimalProtocol) {
  const auto doc = parse_protocol_text(kMinimal, "mini");
  EXPECT_EQ(doc.protocol->name, "mini");
  EXPECT_EQ(doc.protocol->family->name(), "uniring");
  EXPECT_TRUE(doc.has_concrete);
  ASSERT_TRUE(doc.invariant.per_class.find("Node"));
  EXPECT_EQ(to_text(doc.invariant.per_class.find("Node")->body), "(= (v p) c)");
}

TEST(ProtocolFile, ShippedFilesMatchBuiltins) {
  for (const auto& [name, text] : builtin_examples()) EXPECT_EQ(text, test::read_file(test::protocol_path(name))) << name;
  EXPECT_NE(find_builtin_example("leader.fop"), nullptr);
  EXPECT_EQ(find_builtin_example("nope.fop"), nullptr);
}

TEST(ProtocolFile, LeaderDescription) {
  const auto doc = test::load_protocol("leader.fop");
  const Protocol& p = *doc.protocol;
  EXPECT_EQ(p.family->name(), "btw");
  EXPECT_EQ(p.axioms.size(), 5u);
  ASSERT_TRUE(p.bad);
  EXPECT_EQ(p.bad->formals.size(), 3u);
  const ClassFormula* inv = doc.invariant.per_class.find("btw");
  ASSERT_TRUE(inv);
  EXPECT_EQ(inv->formals[0].name, "x");
}

TEST(ProtocolFile, UnknownSectionIsParseError) {
  const auto [line, col] = parse_error_at(std::string(kMinimal) + "\n(frobnicate 1)\n");
  EXPECT_EQ(line, 11u);
  EXPECT_EQ(col, 2u);  // the section head
}

TEST(ProtocolFile, DuplicateSectionIsParseError) { parse_error_at(std::string(kMinimal) + "(mod p)\n"); }

TEST(ProtocolFile, UnknownSymbolIsParseError) {
  std::string text = kMinimal;
  text.replace(text.find("(= (v' (next p)) (v p))"), 23, "(= (w' (next p)) (v p))");
  const auto [line, col] = parse_error_at(text);
  EXPECT_EQ(line, 7u);
}

TEST(ProtocolFile, UnknownTopologyIsRejected) {
  std::string text = kMinimal;
  text.replace(text.find("uniring"), 7, "torus");
  EXPECT_THROW(parse_protocol_text(text, "t"), Error);
}

TEST(ProtocolFile, NestedModIsValidationError) {
  std::string text = kMinimal;
  text.replace(text.find("(mod p (next p))"), 16, "(mod p (next (next p)))");
  try {
    parse_protocol_text(text, "t");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.kind(), ValidationError::Kind::kModViolation);
  }
}

TEST(ProtocolFile, ExplicitFormals) {
  std::string text = kMinimal;
  text.replace(text.find("(invariant (Node (= (v p) c)))"), 30, "(invariant (Node (u) (= (v u) c)))");
  const auto doc = parse_protocol_text(text, "t");
  EXPECT_EQ(doc.invariant.per_class.find("Node")->formals[0].name, "u");
}

TEST(ProtocolFile, ClassEntry) {
  const auto doc = test::load_protocol("rbr.fop");
  const auto [sym, f] = parse_class_entry(*doc.protocol, "(Red (= (var p) null))");
  EXPECT_EQ(sym.name(), "Red");
  EXPECT_EQ(to_text(f.body), "(= (var p) null)");
  EXPECT_THROW(parse_class_entry(*doc.protocol, "(Green true)"), Error);
}

TEST(ProtocolFile, DefaultFormals) {
  EXPECT_EQ(default_formals(1)[0].name, "p");
  EXPECT_EQ(default_formals(3)[1].name, "y");
}

TEST(ProtocolFile, ConcreteSectionRoundTrips) {
  const auto doc = test::load_protocol("leader.fop");
  const std::string text = to_string(doc.concrete.to_sexpr());
  EXPECT_NE(text.find("(Id (range 0 n))"), std::string::npos) << text;
  EXPECT_NE(text.find("(le <=)"), std::string::npos) << text;
}

}  // namespace
}  // namespace fop
