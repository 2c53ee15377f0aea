#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "igp/model.hpp"
#include "igp/stability.hpp"
#include "test_support.hpp"

using namespace igp;

TEST(Rhs, VanishesAtE1OfExample1) {
    const auto r = rhs(example1_params(), {2.0, 0.0, 0.0}, 2.0);
    EXPECT_EQ(r, (StateTriple{0.0, 0.0, 0.0}));
}

TEST(Rhs, VanishesAtOrigin) {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 20; ++i) {
        EXPECT_EQ(rhs(testkit::random_params(rng), {0, 0, 0}, 0.0), (StateTriple{0.0, 0.0, 0.0}));
    }
}

TEST(Rhs, RoundedE4OfExample3HasSmallResidual) {
    const auto r = rhs(example3_params(), {0.7778, 0.5778, 0.0556}, 0.7778);
    EXPECT_LT(std::abs(r.x), 1e-3);
    EXPECT_LT(std::abs(r.y), 1e-3);
    EXPECT_LT(std::abs(r.z), 1e-3);
}

TEST(Rhs, UsesDelayedValueOnlyInResourceSelfLimitation) {
    const auto p = example1_params();
    const StateTriple s{1.0, 0.5, 0.25};
    const auto now = rhs(p, s, 1.0);
    const auto late = rhs(p, s, 1.5);
    EXPECT_DOUBLE_EQ(now.x - late.x, p.a1 * 0.5 * s.x);
    EXPECT_EQ(now.y, late.y);
    EXPECT_EQ(now.z, late.z);
}

TEST(Rhs, RejectsNonFiniteInput) {
    EXPECT_THROW((void)rhs(example1_params(), {NAN, 0, 0}, 0.0), Error);
    EXPECT_THROW((void)rhs(example1_params(), {1, 0, 0}, INFINITY), Error);
    try {
        (void)rhs(example1_params(), {1, 0, 0}, NAN);
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::invalid_input);
    }
}

TEST(Params, ValidationRejectsNonPositiveRatesAndNegativeDelay) {
    auto p = example1_params();
    EXPECT_NO_THROW(p.validate());
    p.c2 = 0.0;
    EXPECT_THROW(p.validate(), Error);
    p = example1_params();
    p.tau = -0.1;
    EXPECT_THROW(p.validate(), Error);
}

TEST(Equilibria, Example1HasOnlyBoundaryE1) {
    const auto eqs = equilibria(example1_params());
    ASSERT_EQ(eqs.size(), 5u);
    EXPECT_TRUE(eqs[0].exists);
    EXPECT_TRUE(eqs[1].exists);
    EXPECT_EQ(eqs[1].coords, (StateTriple{2.0, 0.0, 0.0}));
    EXPECT_FALSE(eqs[2].exists);
    EXPECT_DOUBLE_EQ(*eqs[2].get("A"), 3.0);
    EXPECT_FALSE(eqs[3].exists);
    EXPECT_NEAR(*eqs[3].get("C"), 10.0 / 3.0, 1e-15);
}

TEST(Equilibria, Example2HasE2) {
    const auto e2 = equilibrium(example2_params(), EquilibriumKind::E2);
    EXPECT_TRUE(e2.exists);
    EXPECT_NEAR(e2.coords.x, 1.50, 1e-15);
    EXPECT_NEAR(e2.coords.y, 0.25, 1e-15);
    EXPECT_EQ(e2.coords.z, 0.0);
}

TEST(Equilibria, Example3InteriorEquilibrium) {
    // P, Q, R, S and coordinates from tests/oracle/reference_values.py
    const auto k = constants(example3_params());
    EXPECT_NEAR(k.P, 0.035, 1e-15);
    EXPECT_NEAR(k.Q, 0.026, 1e-15);
    EXPECT_NEAR(k.R, 0.0025, 1e-15);
    EXPECT_NEAR(k.S, 0.045, 1e-15);
    const auto e4 = equilibrium(example3_params(), EquilibriumKind::E4);
    EXPECT_TRUE(e4.exists);
    EXPECT_NEAR(e4.coords.x, 0.77777777777777778, 1e-13);
    EXPECT_NEAR(e4.coords.y, 0.57777777777777778, 1e-13);
    EXPECT_NEAR(e4.coords.z, 0.055555555555555556, 1e-13);
}

TEST(Equilibria, DegenerateDenominatorMarksE4Undefined) {
    // S = a1 b3 c2 - a2 b3 c1 + a3 b1 c2 = 1 - 2 + 1 = 0
    ModelParams p;
    p.a2 = 2.0;
    const auto e4 = equilibrium(p, EquilibriumKind::E4);
    EXPECT_FALSE(e4.defined);
    EXPECT_FALSE(e4.exists);
    EXPECT_TRUE(std::isnan(e4.coords.x));
}

TEST(Equilibria, ExactZeroComponentIsNotExisting) {
    // B = (a0 b1 - a1 b0) / (a2 b1) = 0
    ModelParams p;
    const auto e2 = equilibrium(p, EquilibriumKind::E2);
    EXPECT_EQ(e2.coords.y, 0.0);
    EXPECT_FALSE(e2.exists);
}

TEST(Presets, EncodeTheWorkedExamples) {
    ASSERT_TRUE(find_preset("example2"));
    EXPECT_EQ(find_preset("example2")->params.b1, 0.5);
    EXPECT_EQ(find_preset("example3")->params.c1, 0.42);
    EXPECT_EQ(find_preset("example3")->history, (StateTriple{0.78, 0.58, 0.06}));
    EXPECT_EQ(find_preset("example1")->history, (StateTriple{2.0, 1.0, 1.0}));
    EXPECT_FALSE(find_preset("example4"));
}

// Properties over random positive parameters.

TEST(EquilibriaProperty, ExistingEquilibriaZeroTheRightHandSide) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 1000; ++i) {
        const auto p = testkit::random_params(rng);
        for (const auto& e : equilibria(p)) {
            if (!e.exists) continue;
            const double scale = std::max(1.0, e.coords.max_abs());
            EXPECT_LT(residual(p, e.coords), 1e-10 * scale * scale) << to_string(e.kind);
        }
    }
}

TEST(EquilibriaProperty, ExistenceEquivalences) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 1000; ++i) {
        const auto p = testkit::random_params(rng);
        const auto k = constants(p);
        EXPECT_EQ(k.B > 0.0, k.A < k.K);
        EXPECT_EQ(k.D > 0.0, k.C < k.K);
        EXPECT_EQ(k.B > 0.0, p.a0 * p.b1 > p.a1 * p.b0);
    }
}

TEST(EquilibriaProperty, SignCoherenceOfInteriorEquilibrium) {
    std::mt19937_64 rng(13);
    int seen = 0;
    for (int i = 0; i < 5000; ++i) {
        const auto p = testkit::random_params(rng);
        const auto k = constants(p);
        const auto e4 = equilibrium(p, EquilibriumKind::E4);
        if (!e4.exists) continue;
        ++seen;
        if (k.S > 0.0) {
            EXPECT_TRUE(k.P > 0.0 && k.Q > 0.0 && k.R > 0.0);
        } else {
            EXPECT_TRUE(k.P < 0.0 && k.Q < 0.0 && k.R < 0.0);
        }
    }
    EXPECT_GT(seen, 50);
}
