#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "oracles.hpp"
#include "peerlens/random.hpp"
#include "peerlens/scoring.hpp"

namespace peerlens {
namespace {

const BrierScore kBrier;
const IgnoranceScore kIgnorance;

TEST(Score, Examples) {
    EXPECT_NEAR(score(kBrier, Belief::binary(0.7), 1), 0.09, 1e-15);
    const auto space = std::make_shared<const StateSpace>(std::vector<std::string>{"a", "b", "c", "d"});
    EXPECT_DOUBLE_EQ(score(kIgnorance, Belief(space, {0.25, 0.25, 0.25, 0.25}), "c"), 2.0);
    EXPECT_EQ(score(kBrier, Belief::binary(1.0), 1), 0.0);
    EXPECT_THROW(score(kIgnorance, Belief::binary(0.0), 1), InfiniteScore);
    EXPECT_THROW(score(kBrier, Belief::binary(0.5), 2), DomainMismatch);
}

TEST(Divergence, Examples) {
    for (double p : {0.0, 0.3, 1.0}) {
        EXPECT_EQ(divergence(kBrier, Belief::binary(p), Belief::binary(p)), 0.0);
        EXPECT_EQ(divergence(kIgnorance, Belief::binary(p), Belief::binary(p)), 0.0);
    }
    // 0.7 * (0.64 - 0.09) + 0.3 * (0.04 - 0.49)
    EXPECT_NEAR(divergence(kBrier, Belief::binary(0.7), Belief::binary(0.2)), 0.25, 1e-15);
    EXPECT_NEAR(divergence(kIgnorance, Belief::binary(0.5), Belief::binary(0.25)), 0.20751874963942185, 1e-15);
}

TEST(Divergence, IgnoranceSupportMismatchIsInfinite) {
    EXPECT_THROW(divergence(kIgnorance, Belief::binary(0.5), Belief::binary(0.0)), InfiniteScore);
    // The other direction is finite: the forecast covers the actual support.
    EXPECT_NEAR(divergence(kIgnorance, Belief::binary(0.0), Belief::binary(0.5)), 1.0, 1e-15);
}

TEST(Entropy, Examples) {
    EXPECT_NEAR(entropy(kBrier, Belief::binary(0.5)), 0.25, 1e-15);
    EXPECT_NEAR(entropy(kIgnorance, Belief::binary(0.5)), 1.0, 1e-15);
    EXPECT_EQ(entropy(kBrier, Belief::binary(1.0)), 0.0);
    EXPECT_EQ(entropy(kIgnorance, Belief::binary(0.0)), 0.0);
}

TEST(ScoringFunction, Examples) {
    const auto r = Belief::binary(0.2);
    const auto p = Belief::binary(0.7);
    EXPECT_NEAR(scoring_function(kBrier, p, p), entropy(kBrier, p), 1e-15);
    EXPECT_NEAR(scoring_function(kBrier, r, p), 0.46, 1e-15);
    EXPECT_NEAR(scoring_function(kBrier, r, p), entropy(kBrier, p) + divergence(kBrier, p, r), 1e-15);
    const double half = scoring_function(kBrier, r, Belief::binary(0.5 * 0.1 + 0.5 * 0.9));
    EXPECT_NEAR(half, 0.5 * scoring_function(kBrier, r, Belief::binary(0.1)) +
                          0.5 * scoring_function(kBrier, r, Belief::binary(0.9)),
                1e-15);
}

TEST(Brier, ReducesToSquaredErrorOnTwoStates) {
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        const double p = rng.uniform();
        EXPECT_NEAR(score(kBrier, Belief::binary(p), 1), (1 - p) * (1 - p), 1e-15);
        EXPECT_NEAR(score(kBrier, Belief::binary(p), 0), p * p, 1e-15);
    }
}

TEST(Properties, StrictProprietyClosedFormsAndDecomposition) {
    Rng rng(2024);
    for (int i = 0; i < 10000; ++i) {
        const double p1 = rng.uniform(1e-6, 1.0 - 1e-6);
        const double p2 = rng.uniform(1e-6, 1.0 - 1e-6);
        const auto b1 = Belief::binary(p1);
        const auto b2 = Belief::binary(p2);
        if (std::abs(p1 - p2) > 1e-6) {
            ASSERT_GT(divergence(kBrier, b2, b1), 0.0);
            ASSERT_GT(divergence(kIgnorance, b2, b1), 0.0);
        }
        ASSERT_NEAR(divergence(kBrier, b2, b1), (p1 - p2) * (p1 - p2), 1e-12);
        ASSERT_NEAR(divergence(kIgnorance, b2, b1), oracle::kl_bits(p2, p1), 1e-9);
        ASSERT_NEAR(entropy(kIgnorance, b1), oracle::shannon_bits(p1), 1e-12);
        for (const ScoringRule* rule : {static_cast<const ScoringRule*>(&kBrier), static_cast<const ScoringRule*>(&kIgnorance)}) {
            ASSERT_NEAR(scoring_function(*rule, b1, b2), entropy(*rule, b2) + divergence(*rule, b2, b1), 1e-12);
        }
    }
}

TEST(Properties, EntropyIsStrictlyConcave) {
    Rng rng(99);
    for (int i = 0; i < 5000; ++i) {
        const double p1 = rng.uniform();
        const double p2 = rng.uniform();
        const double lambda = rng.uniform(0.01, 0.99);
        for (const ScoringRule* rule : {static_cast<const ScoringRule*>(&kBrier), static_cast<const ScoringRule*>(&kIgnorance)}) {
            const double gap = entropy(*rule, Belief::binary(lambda * p1 + (1 - lambda) * p2)) -
                               lambda * entropy(*rule, Belief::binary(p1)) -
                               (1 - lambda) * entropy(*rule, Belief::binary(p2));
            ASSERT_GE(gap, -1e-15);
            if (std::abs(p1 - p2) > 0.05) {
                ASSERT_GT(gap, 1e-10);
            }
        }
    }
}

/// A strictly proper rule defined only by the interface: the spherical score,
/// negated so that larger means worse.
class NegatedSpherical final : public ScoringRule {
public:
    double score(std::span<const double> forecast, std::size_t realized) const override {
        double norm = 0.0;
        for (double p : forecast) {
            norm += p * p;
        }
        return 1.0 - forecast[realized] / std::sqrt(norm);
    }
    std::string_view name() const noexcept override { return "spherical"; }
};

TEST(ScoringRule, CustomRulesPlugIntoDerivedQuantities) {
    const NegatedSpherical rule;
    const auto p = Belief::binary(0.8);
    const auto r = Belief::binary(0.3);
    EXPECT_GT(divergence(rule, p, r), 0.0);
    EXPECT_NEAR(divergence(rule, p, p), 0.0, 1e-15);
    EXPECT_NEAR(scoring_function(rule, r, p), entropy(rule, p) + divergence(rule, p, r), 1e-15);
}

TEST(ScoringRule, LookupByName) {
    EXPECT_EQ(make_scoring_rule("brier")->name(), "brier");
    EXPECT_EQ(make_scoring_rule("ignorance")->name(), "ignorance");
    EXPECT_THROW(make_scoring_rule("crps"), InvalidArgument);
}

}  // namespace
}  // namespace peerlens
