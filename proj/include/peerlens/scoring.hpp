#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "peerlens/beliefs.hpp"
#include "peerlens/error.hpp"

namespace peerlens {

/// A strictly proper scoring rule S(P, x). Larger scores mean the realized
/// state was less consistent with the forecast.
///
/// Implementations see raw probability vectors so that the integration loops
/// in valuation.hpp can score posteriors without building Belief objects.
class ScoringRule {
public:
    virtual ~ScoringRule() = default;

    /// Throws InfiniteScore when the score is unbounded.
    virtual double score(std::span<const double> forecast, std::size_t realized) const = 0;
    virtual std::string_view name() const noexcept = 0;
};

/// Quadratic score, halved so that on two states it reduces to (x - p)^2.
class BrierScore final : public ScoringRule {
public:
    double score(std::span<const double> forecast, std::size_t realized) const override {
        double sum = 0.0;
        for (std::size_t j = 0; j < forecast.size(); ++j) {
            const double d = (j == realized ? 1.0 : 0.0) - forecast[j];
            sum += d * d;
        }
        return 0.5 * sum;
    }
    std::string_view name() const noexcept override { return "brier"; }
};

/// Surprisal in bits, -log2 p_x.
class IgnoranceScore final : public ScoringRule {
public:
    double score(std::span<const double> forecast, std::size_t realized) const override {
        const double p = forecast[realized];
        if (!(p > 0.0)) {
            throw InfiniteScore("ignorance score of an outcome forecast with probability 0");
        }
        return -std::log2(p);
    }
    std::string_view name() const noexcept override { return "ignorance"; }
};

/// Looks up a built-in rule by name ("brier" or "ignorance").
inline std::shared_ptr<const ScoringRule> make_scoring_rule(std::string_view name) {
    if (name == "brier") {
        return std::make_shared<const BrierScore>();
    }
    if (name == "ignorance") {
        return std::make_shared<const IgnoranceScore>();
    }
    throw InvalidArgument("unknown scoring rule '" + std::string(name) + "'");
}

// Span-level kernels. Terms carrying zero probability mass contribute
// nothing and are skipped, so an infinite score there never surfaces.

/// d(actual || forecast) = sum_x actual(x) * (S(forecast, x) - S(actual, x)).
inline double divergence(const ScoringRule& rule, std::span<const double> actual,
                         std::span<const double> forecast) {
    double d = 0.0;
    for (std::size_t x = 0; x < actual.size(); ++x) {
        if (actual[x] > 0.0) {
            d += actual[x] * (rule.score(forecast, x) - rule.score(actual, x));
        }
    }
    return d;
}

inline double scoring_function(const ScoringRule& rule, std::span<const double> issued,
                               std::span<const double> actual) {
    double s = 0.0;
    for (std::size_t x = 0; x < actual.size(); ++x) {
        if (actual[x] > 0.0) {
            s += actual[x] * rule.score(issued, x);
        }
    }
    return s;
}

inline double entropy(const ScoringRule& rule, std::span<const double> belief) {
    return scoring_function(rule, belief, belief);
}

namespace detail {
inline void require_same_space(const Belief& a, const Belief& b) {
    if (!same_space(a.space(), b.space())) {
        throw DomainMismatch("beliefs live on different state spaces");
    }
}
}  // namespace detail

inline double score(const ScoringRule& rule, const Belief& forecast, std::size_t realized) {
    if (realized >= forecast.size()) {
        throw DomainMismatch("realized state out of range");
    }
    return rule.score(forecast.probs(), realized);
}

inline double score(const ScoringRule& rule, const Belief& forecast, std::string_view realized) {
    return rule.score(forecast.probs(), forecast.space()->index_of(realized));
}

/// Loss in predictive fidelity d(actual || forecast): the expected score
/// penalty from forecasting with `forecast` when the state follows `actual`.
/// Throws InfiniteScore for the ignorance score when `forecast` rules out a
/// state that `actual` allows.
inline double divergence(const ScoringRule& rule, const Belief& actual, const Belief& forecast) {
    detail::require_same_space(actual, forecast);
    return divergence(rule, actual.probs(), forecast.probs());
}

/// Generalized entropy e(P): the expected self-score.
inline double entropy(const ScoringRule& rule, const Belief& belief) { return entropy(rule, belief.probs()); }

/// Expected score of issuing `issued` when the state follows `actual`.
inline double scoring_function(const ScoringRule& rule, const Belief& issued, const Belief& actual) {
    detail::require_same_space(issued, actual);
    return scoring_function(rule, issued.probs(), actual.probs());
}

}  // namespace peerlens
