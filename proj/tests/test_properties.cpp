#include "doctest.h"

#include "property_suites.hpp"

// The suites live in property_suites.hpp so the acceptance gate can run the
// exact same instances; here each one must come back with zero violations.

using propsuite::SuiteOutcome;

namespace {
constexpr int kRounds = 1000;

void expect_clean(const SuiteOutcome& r) {
  INFO(r.first);
  CHECK(r.failures == 0);
}
}  // namespace

TEST_CASE("puncturing the code is shortening the dual") {
  expect_clean(propsuite::suite_puncture_duality(kRounds));
}

TEST_CASE("generator and parity tensors annihilate under the double dot") {
  expect_clean(propsuite::suite_double_dot_zero(kRounds));
}

TEST_CASE("matrix action on the first axis threads through the double dot") {
  expect_clean(propsuite::suite_double_dot_action(kRounds));
}

TEST_CASE("axis multiplications compose along an axis and commute across") {
  expect_clean(propsuite::suite_axis_composition(kRounds));
}

TEST_CASE("coordinates over a rank-one basis weigh at least the rank") {
  expect_clean(propsuite::suite_coordinate_weight(kRounds));
}

TEST_CASE("tensor rank is blind to code equivalence") {
  expect_clean(propsuite::suite_equivalence_rank(kRounds));
}

TEST_CASE("profile entries stay inside the distance and rank envelope") {
  expect_clean(propsuite::suite_profile_envelope(kRounds));
}
