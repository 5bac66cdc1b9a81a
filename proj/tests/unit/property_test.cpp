#include <gtest/gtest.h>

#include "support.hpp"

namespace fop {
namespace {

void expect_ok(const test::PropertyReport& r) {
  EXPECT_TRUE(r.ok()) << r.failures << "/" << r.cases << " failed; first: " << r.first_failure;
}

TEST(Property, PrintParseRoundTrip) { expect_ok(test::property_round_trip(1000, 11)); }
TEST(Property, EqClassAgreesWithReferenceOracle) { expect_ok(test::property_eqclass(1000, 12)); }
TEST(Property, FrameConditionShape) { expect_ok(test::property_frame(1000, 13)); }

TEST(Property, CountermodelsRefuteTheirStatement) {
  if (!test::solver_available()) GTEST_SKIP() << "z3 not on PATH";
  expect_ok(test::property_countermodel(300, 14));
}

TEST(Property, ConsistentPartialStatesComplete) { expect_ok(test::property_completable(200, 15)); }

}  // namespace
}  // namespace fop
