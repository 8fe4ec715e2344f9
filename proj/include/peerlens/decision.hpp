#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "peerlens/beliefs.hpp"
#include "peerlens/error.hpp"
#include "peerlens/scoring.hpp"

namespace peerlens {

/// Beliefs offered as announcements are kept at least this far from 0 and 1
/// so that every utility stays finite.
inline constexpr double kBeliefClamp = 1e-9;

/// A finite decision problem (A, u): utility[a][x] is the payoff of action a
/// in state x.
class DecisionProblem {
public:
    DecisionProblem(std::vector<std::string> actions, std::vector<std::vector<double>> utility)
        : actions_(std::move(actions)), utility_(std::move(utility)) {
        if (actions_.empty()) {
            throw InvalidArgument("decision problem needs at least one action");
        }
        if (utility_.size() != actions_.size()) {
            throw InvalidArgument("utility needs one row per action");
        }
        n_states_ = utility_.front().size();
        if (n_states_ < 2) {
            throw InvalidArgument("utility needs at least 2 state columns");
        }
        for (const auto& row : utility_) {
            if (row.size() != n_states_) {
                throw InvalidArgument("utility rows differ in length");
            }
            for (double u : row) {
                if (!std::isfinite(u)) {
                    throw InvalidArgument("utility entries must be finite");
                }
            }
        }
    }

    std::size_t action_count() const noexcept { return actions_.size(); }
    std::size_t state_count() const noexcept { return n_states_; }
    const std::vector<std::string>& actions() const noexcept { return actions_; }
    double utility(std::size_t a, std::size_t x) const { return utility_.at(a).at(x); }

    double expected_utility(std::size_t a, std::span<const double> belief) const {
        double s = 0.0;
        for (std::size_t x = 0; x < n_states_; ++x) {
            s += utility_[a][x] * belief[x];
        }
        return s;
    }

    /// Index of the expected-utility-maximizing action; ties go to the lowest index.
    std::size_t optimal_action(std::span<const double> belief) const {
        if (belief.size() != n_states_) {
            throw DomainMismatch("belief does not match the decision problem's states");
        }
        std::size_t best = 0;
        double best_u = expected_utility(0, belief);
        for (std::size_t a = 1; a < actions_.size(); ++a) {
            const double u = expected_utility(a, belief);
            if (u > best_u) {
                best = a;
                best_u = u;
            }
        }
        return best;
    }

    /// Action chosen when the state is known to be x.
    std::size_t informed_action(std::size_t x) const {
        std::vector<double> delta(n_states_, 0.0);
        delta.at(x) = 1.0;
        return optimal_action(delta);
    }

private:
    std::vector<std::string> actions_;
    std::vector<std::vector<double>> utility_;
    std::size_t n_states_ = 0;
};

inline std::size_t optimal_action(const DecisionProblem& dp, const Belief& belief) {
    return dp.optimal_action(belief.probs());
}

/// Utility gain V(Q, P) the decision-maker perceives from updating P to Q.
inline double instrumental_value(const DecisionProblem& dp, const Belief& posterior, const Belief& prior) {
    const std::size_t aq = dp.optimal_action(posterior.probs());
    const std::size_t ap = dp.optimal_action(prior.probs());
    double v = 0.0;
    for (std::size_t x = 0; x < dp.state_count(); ++x) {
        v += posterior.prob(x) * (dp.utility(aq, x) - dp.utility(ap, x));
    }
    return v;
}

/// Utility loss C(R, P) of acting on R instead of knowing x, assessed by
/// someone who believes P.
inline double generalized_scoring(const DecisionProblem& dp, const Belief& issued, const Belief& actual) {
    const std::size_t ar = dp.optimal_action(issued.probs());
    if (actual.size() != dp.state_count()) {
        throw DomainMismatch("belief does not match the decision problem's states");
    }
    double c = 0.0;
    for (std::size_t x = 0; x < dp.state_count(); ++x) {
        c += actual.prob(x) * (dp.utility(dp.informed_action(x), x) - dp.utility(ar, x));
    }
    return c;
}

/// c(P): expected utility loss from not knowing the state.
inline double uncertainty(const DecisionProblem& dp, const Belief& belief) {
    return generalized_scoring(dp, belief, belief);
}

/// The belief-announcement problem behind a scoring rule, on a binary state:
/// actions are announced beliefs p = i / (grid_size - 1) (clamped to
/// [1e-9, 1 - 1e-9]) and u(a, x) = S(delta_x, x) - S(a, x).
inline DecisionProblem announcement_problem(const ScoringRule& rule, std::size_t grid_size) {
    if (grid_size < 3) {
        throw InvalidArgument("announcement grid needs at least 3 points");
    }
    std::vector<std::string> actions;
    std::vector<std::vector<double>> utility;
    for (std::size_t i = 0; i < grid_size; ++i) {
        const double p = std::clamp(static_cast<double>(i) / static_cast<double>(grid_size - 1), kBeliefClamp,
                                    1.0 - kBeliefClamp);
        const double announced[2] = {1.0 - p, p};
        std::vector<double> row(2);
        for (std::size_t x = 0; x < 2; ++x) {
            const double certain[2] = {x == 0 ? 1.0 : 0.0, x == 1 ? 1.0 : 0.0};
            row[x] = rule.score(certain, x) - rule.score(announced, x);
        }
        actions.push_back("p=" + std::to_string(static_cast<double>(i) / static_cast<double>(grid_size - 1)));
        utility.push_back(std::move(row));
    }
    return DecisionProblem(std::move(actions), std::move(utility));
}

}  // namespace peerlens
