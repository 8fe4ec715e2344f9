#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "peerlens/beliefs.hpp"
#include "peerlens/decision.hpp"
#include "peerlens/random.hpp"
#include "peerlens/scenarios.hpp"
#include "peerlens/scoring.hpp"

namespace peerlens {

/// Outcome of one randomized property: how many cases ran, how many broke
/// the property, and the worst observed slack (negative means violated).
struct PropertyCheck {
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
    double worst_slack = std::numeric_limits<double>::infinity();

    bool passed() const { return failures == 0; }

    void record(bool ok, double slack) {
        ++cases;
        if (!ok) {
            ++failures;
        }
        worst_slack = std::min(worst_slack, slack);
    }
};

namespace detail {

/// Kullback-Leibler divergence in bits, written directly from its definition.
inline double kl_bits(double p, double q) {
    double d = 0.0;
    if (p > 0.0) {
        d += p * std::log(p / q);
    }
    if (p < 1.0) {
        d += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
    }
    return d / std::log(2.0);
}

inline double interior(Rng& rng, double margin) { return rng.uniform(margin, 1.0 - margin); }

inline std::vector<double> random_simplex(Rng& rng, std::size_t n) {
    std::vector<double> p(n);
    double total = 0.0;
    for (double& v : p) {
        v = -std::log(1.0 - rng.uniform());
        total += v;
    }
    for (double& v : p) {
        v /= total;
    }
    return p;
}

inline DecisionProblem random_decision_problem(Rng& rng, std::size_t actions, std::size_t states) {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> u(actions, std::vector<double>(states));
    for (std::size_t a = 0; a < actions; ++a) {
        labels.push_back("a" + std::to_string(a));
        for (double& v : u[a]) {
            v = rng.uniform(-1.0, 1.0);
        }
    }
    return DecisionProblem(std::move(labels), std::move(u));
}

}  // namespace detail

/// Scoring-rule properties over `trials` random binary pairs per rule.
inline std::vector<PropertyCheck> scoring_properties(std::size_t trials, std::uint64_t seed) {
    const BrierScore brier;
    const IgnoranceScore ignorance;
    const ScoringRule* rules[] = {&brier, &ignorance};
    std::vector<PropertyCheck> out;
    Rng rng = Rng::substream(seed, 1);

    for (const ScoringRule* rule : rules) {
        const std::string name(rule->name());
        PropertyCheck propriety{name + ": divergence > 0 for distinct beliefs"};
        PropertyCheck concavity{name + ": entropy strictly concave"};
        PropertyCheck decomposition{name + ": S(R,P) = e(P) + d(P||R) to 1e-12"};
        for (std::size_t t = 0; t < trials; ++t) {
            const double p1 = detail::interior(rng, 1e-3);
            const double p2 = detail::interior(rng, 1e-3);
            const auto b1 = Belief::binary(p1);
            const auto b2 = Belief::binary(p2);
            if (std::abs(p1 - p2) > 1e-6) {
                const double d = divergence(*rule, b2, b1);
                propriety.record(d > 0.0, d);
            }

            const double lambda = rng.uniform(0.01, 0.99);
            const double mixed = entropy(*rule, Belief::binary(lambda * p1 + (1.0 - lambda) * p2));
            const double chord = lambda * entropy(*rule, b1) + (1.0 - lambda) * entropy(*rule, b2);
            const double gap = mixed - chord;
            const double needed = std::abs(p1 - p2) > 0.05 ? 1e-10 : -1e-15;
            concavity.record(gap > needed, gap - needed);

            const double residual =
                std::abs(scoring_function(*rule, b1, b2) - entropy(*rule, b2) - divergence(*rule, b2, b1));
            decomposition.record(residual < 1e-12, 1e-12 - residual);
        }
        out.push_back(propriety);
        out.push_back(concavity);
        out.push_back(decomposition);
    }

    PropertyCheck closed_form{"brier: divergence = (p1 - p2)^2 to 1e-12"};
    PropertyCheck kl{"ignorance: divergence = KL divergence to 1e-9"};
    for (std::size_t t = 0; t < trials; ++t) {
        const double p1 = rng.uniform();
        const double p2 = rng.uniform();
        const double residual = std::abs(divergence(brier, Belief::binary(p2), Belief::binary(p1)) - (p1 - p2) * (p1 - p2));
        closed_form.record(residual < 1e-12, 1e-12 - residual);

        const double q1 = detail::interior(rng, 1e-6);
        const double q2 = detail::interior(rng, 1e-6);
        const double kl_residual =
            std::abs(divergence(ignorance, Belief::binary(q2), Belief::binary(q1)) - detail::kl_bits(q2, q1));
        kl.record(kl_residual < 1e-9, 1e-9 - kl_residual);
    }
    out.push_back(closed_form);
    out.push_back(kl);
    return out;
}

/// Decision-theoretic properties over `trials` random problems and beliefs.
inline std::vector<PropertyCheck> decision_properties(std::size_t trials, std::uint64_t seed) {
    Rng rng = Rng::substream(seed, 2);
    PropertyCheck nonnegative{"decision: instrumental value >= 0"};
    PropertyCheck concave{"decision: uncertainty weakly concave"};
    PropertyCheck dominance{"decision: C(R,P) >= c(P)"};
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t states = 2 + t % 2;
        const auto dp = detail::random_decision_problem(rng, 2 + t % 4, states);
        const auto space = states == 2 ? StateSpace::binary()
                                       : std::make_shared<const StateSpace>(std::vector<std::string>{"0", "1", "2"});
        const Belief p(space, detail::random_simplex(rng, states));
        const Belief q(space, detail::random_simplex(rng, states));

        const double v = instrumental_value(dp, q, p);
        nonnegative.record(v >= -1e-12, v + 1e-12);

        const double lambda = rng.uniform();
        std::vector<double> mix(states);
        for (std::size_t x = 0; x < states; ++x) {
            mix[x] = lambda * p.prob(x) + (1.0 - lambda) * q.prob(x);
        }
        const double gap = uncertainty(dp, Belief(space, mix)) -
                           (lambda * uncertainty(dp, p) + (1.0 - lambda) * uncertainty(dp, q));
        concave.record(gap >= -1e-12, gap + 1e-12);

        const double excess = generalized_scoring(dp, q, p) - uncertainty(dp, p);
        dominance.record(excess >= -1e-12, excess + 1e-12);
    }

    PropertyCheck recovery{"decision: announcement problem recovers Brier divergence to 1e-3"};
    const BrierScore brier;
    constexpr std::size_t kGrid = 101;
    const auto announce = announcement_problem(brier, kGrid);
    for (std::size_t t = 0; t < trials; ++t) {
        const auto i = static_cast<double>(rng.next() % kGrid) / (kGrid - 1);
        const auto j = static_cast<double>(rng.next() % kGrid) / (kGrid - 1);
        const auto q = Belief::binary(i);
        const auto p = Belief::binary(j);
        const double err = std::abs(instrumental_value(announce, q, p) - divergence(brier, q, p));
        recovery.record(err <= 1e-3, 1e-3 - err);
    }
    return {nonnegative, concave, dominance, recovery};
}

/// Belief heterogeneity lowers reviewer-private value and raises
/// reviewer-public value, for both built-in rules.
inline std::vector<PropertyCheck> heterogeneity_properties(std::size_t trials, std::uint64_t seed) {
    std::vector<PropertyCheck> out;
    std::uint64_t stream = 3;
    for (const char* name : {"brier", "ignorance"}) {
        Rng rng = Rng::substream(seed, stream++);
        const auto report = heterogeneity_theorem_check(make_scoring_rule(name), trials, rng);
        PropertyCheck check{std::string(name) + ": private < e(mean) < public under heterogeneity"};
        check.cases = report.trials;
        check.failures = report.violations;
        if (report.separated_trials > 0 && !(report.min_separated_margin > HeterogeneityReport::kMinMargin)) {
            ++check.failures;
        }
        check.worst_slack = std::min(report.min_private_margin, report.min_public_margin);
        out.push_back(check);
    }
    return out;
}

/// Everything above, in a fixed order.
inline std::vector<PropertyCheck> run_property_suite(std::size_t trials, std::uint64_t seed) {
    auto all = scoring_properties(trials, seed);
    for (auto& c : decision_properties(trials, seed)) {
        all.push_back(std::move(c));
    }
    for (auto& c : heterogeneity_properties(trials, seed)) {
        all.push_back(std::move(c));
    }
    return all;
}

}  // namespace peerlens
