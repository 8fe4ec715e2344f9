#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "peerlens/decision.hpp"
#include "peerlens/propcheck.hpp"
#include "peerlens/random.hpp"

namespace peerlens {
namespace {

DecisionProblem matching() { return DecisionProblem({"claim 0", "claim 1"}, {{1.0, 0.0}, {0.0, 1.0}}); }

/// Best expected utility over all actions, by enumeration.
double best_expected_utility(const DecisionProblem& dp, const Belief& b) {
    double best = -1e300;
    for (std::size_t a = 0; a < dp.action_count(); ++a) {
        best = std::max(best, dp.expected_utility(a, b.probs()));
    }
    return best;
}

TEST(DecisionProblem, Validation) {
    EXPECT_THROW(DecisionProblem({}, {}), InvalidArgument);
    EXPECT_THROW(DecisionProblem({"a"}, {{1.0}}), InvalidArgument);
    EXPECT_THROW(DecisionProblem({"a", "b"}, {{1.0, 0.0}}), InvalidArgument);
    EXPECT_THROW(DecisionProblem({"a"}, {{1.0, INFINITY}}), InvalidArgument);
}

TEST(OptimalAction, ExamplesAndTieBreak) {
    EXPECT_EQ(optimal_action(matching(), Belief::binary(0.6)), 1u);
    EXPECT_EQ(optimal_action(matching(), Belief::binary(0.5)), 0u);
    const DecisionProblem flat({"x", "y", "z"}, {{0.3, 0.3}, {0.3, 0.3}, {0.3, 0.3}});
    EXPECT_EQ(optimal_action(flat, Belief::binary(0.9)), 0u);
}

TEST(InstrumentalValue, Examples) {
    const auto dp = matching();
    EXPECT_EQ(instrumental_value(dp, Belief::binary(0.6), Belief::binary(0.6)), 0.0);
    // a*(Q) = 0 earns 0.9; a*(P) = 1 earns 0.1 under Q.
    EXPECT_NEAR(instrumental_value(dp, Belief::binary(0.1), Belief::binary(0.6)), 0.8, 1e-15);
    EXPECT_EQ(instrumental_value(dp, Belief::binary(0.9), Belief::binary(0.6)), 0.0);
}

TEST(Uncertainty, Examples) {
    const auto dp = matching();
    EXPECT_EQ(uncertainty(dp, Belief::binary(1.0)), 0.0);
    EXPECT_NEAR(uncertainty(dp, Belief::binary(0.5)), 0.5, 1e-15);
    EXPECT_NEAR(uncertainty(dp, Belief::binary(0.7)), 0.3, 1e-15);
}

TEST(GeneralizedScoring, Examples) {
    const auto dp = matching();
    const auto p = Belief::binary(0.2);
    EXPECT_EQ(generalized_scoring(dp, p, p), uncertainty(dp, p));
    EXPECT_NEAR(generalized_scoring(dp, Belief::binary(0.9), p), 0.8, 1e-15);
    const auto r = Belief::binary(0.4);
    EXPECT_NEAR(generalized_scoring(dp, r, Belief::binary(0.5 * 0.1 + 0.5 * 0.7)),
                0.5 * generalized_scoring(dp, r, Belief::binary(0.1)) +
                    0.5 * generalized_scoring(dp, r, Belief::binary(0.7)),
                1e-15);
}

TEST(AnnouncementProblem, RecoversBrierDivergence) {
    const BrierScore brier;
    const auto dp = announcement_problem(brier, 101);
    EXPECT_EQ(dp.action_count(), 101u);
    EXPECT_EQ(instrumental_value(dp, Belief::binary(0.37), Belief::binary(0.37)), 0.0);
    EXPECT_NEAR(instrumental_value(dp, Belief::binary(0.7), Belief::binary(0.2)), 0.25, 1e-4);
    EXPECT_THROW(announcement_problem(brier, 2), InvalidArgument);
}

TEST(AnnouncementProblem, RecoversIgnoranceDivergenceOnGrid) {
    const IgnoranceScore ignorance;
    const auto dp = announcement_problem(ignorance, 101);
    for (double q : {0.1, 0.35, 0.9}) {
        for (double p : {0.05, 0.5, 0.72}) {
            EXPECT_NEAR(instrumental_value(dp, Belief::binary(q), Belief::binary(p)),
                        divergence(ignorance, Belief::binary(q), Belief::binary(p)), 1e-9);
        }
    }
}

TEST(AnnouncementProblem, CoarserGridNeverDoesBetter) {
    const BrierScore brier;
    const auto coarse = announcement_problem(brier, 11);
    const auto fine = announcement_problem(brier, 101);
    Rng rng(13);
    for (int i = 0; i < 1000; ++i) {
        const auto b = Belief::binary(rng.uniform());
        EXPECT_LE(best_expected_utility(coarse, b), best_expected_utility(fine, b) + 1e-15);
    }
}

TEST(DecisionProperties, RandomizedSuitePasses) {
    for (const auto& check : decision_properties(1000, 77)) {
        EXPECT_TRUE(check.passed()) << check.name << " failures=" << check.failures;
        EXPECT_EQ(check.cases, 1000u) << check.name;
    }
}

}  // namespace
}  // namespace peerlens
