#include <gtest/gtest.h>

#include "properties.hpp"

using namespace igp::testkit;

namespace {

void expect_clean(const PropertyResult& r, int n) {
    EXPECT_EQ(r.draws, n);
    EXPECT_EQ(r.violations, 0) << r.name << ": " << r.first_violation;
}

constexpr int kDraws = 1000;

}  // namespace

TEST(Properties, Tau0VerdictsMatchRoots) { expect_clean(tau0_verdicts_match_roots(101, kDraws), kDraws); }

TEST(Properties, HypothesesMatchApplicability) { expect_clean(hypotheses_match_applicability(102, kDraws), kDraws); }

TEST(Properties, ConstantTermIdentity) { expect_clean(constant_term_identity(103, kDraws), kDraws); }

TEST(Properties, DelaySequenceSpacing) { expect_clean(delay_sequence_spacing(104, kDraws), kDraws); }

TEST(Properties, CrossingsAreRoots) { expect_clean(crossings_are_roots(105, kDraws), kDraws); }

TEST(Properties, E4SignPattern) { expect_clean(e4_sign_pattern(106, kDraws), kDraws); }

TEST(Properties, InvariantFaces) { expect_clean(invariant_faces(107, kDraws), kDraws); }
