#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "peerlens/beliefs.hpp"
#include "peerlens/error.hpp"
#include "peerlens/experiments.hpp"
#include "peerlens/scoring.hpp"

namespace peerlens {

/// v(y, P) = d(Q(P, y) || P): the observer's gain in predictive fidelity.
struct DivergenceValue {
    std::shared_ptr<const ScoringRule> rule;
};

/// v(y, P) = 1 when the observer gave the revealed state less than even odds,
/// else 0. Only meaningful for definitive experiments.
struct SurpriseIndicator {};

using ValueModel = std::variant<DivergenceValue, SurpriseIndicator>;

inline ValueModel divergence_value(std::shared_ptr<const ScoringRule> rule) {
    if (!rule) {
        throw InvalidArgument("divergence value needs a scoring rule");
    }
    return DivergenceValue{std::move(rule)};
}

/// Evaluates outcome values and predictive weights on the integration
/// backbone of one experiment. All four valuation criteria are finite sums
/// over these nodes.
class ValuationGrid {
public:
    ValuationGrid(ValueModel model, Experiment exp, std::size_t n_states)
        : model_(std::move(model)),
          exp_(std::move(exp)),
          n_states_(n_states),
          nodes_(outcome_nodes(exp_, n_states)),
          lik_(likelihood_table(exp_, nodes_, n_states)),
          buffer_(n_states) {
        if (std::holds_alternative<SurpriseIndicator>(model_) && !exp_.is_definitive()) {
            throw InvalidArgument("the surprise indicator only applies to definitive experiments");
        }
        if (const auto* d = std::get_if<DivergenceValue>(&model_); d && !d->rule) {
            throw InvalidArgument("divergence value needs a scoring rule");
        }
    }

    std::size_t size() const noexcept { return nodes_.size(); }
    const std::vector<OutcomeNode>& nodes() const noexcept { return nodes_; }

    /// Quadrature weight times predictive density under `belief`, per node.
    std::vector<double> predictive_weights(std::span<const double> belief) const {
        check(belief);
        std::vector<double> out(nodes_.size(), 0.0);
        for (std::size_t k = 0; k < nodes_.size(); ++k) {
            double f = 0.0;
            for (std::size_t x = 0; x < n_states_; ++x) {
                f += belief[x] * lik_[x][k];
            }
            out[k] = nodes_[k].weight * f;
        }
        return out;
    }

    /// v(y_k, P) for one node.
    double value_at(std::span<const double> observer, std::size_t k) const {
        check(observer);
        return value(observer, nodes_[k].y);
    }

    double value(std::span<const double> observer, const Outcome& y) const {
        if (std::holds_alternative<SurpriseIndicator>(model_)) {
            const std::size_t yi = detail::discrete_outcome(y, n_states_);
            return observer[yi] < 0.5 ? 1.0 : 0.0;
        }
        const auto& rule = *std::get<DivergenceValue>(model_).rule;
        posterior_into(exp_, observer, y, buffer_);
        return divergence(rule, std::span<const double>(buffer_), observer);
    }

    /// v(y_k, P) at every node where `mask` is positive; zero elsewhere.
    std::vector<double> values(std::span<const double> observer, std::span<const double> mask) const {
        std::vector<double> out(nodes_.size(), 0.0);
        for (std::size_t k = 0; k < nodes_.size(); ++k) {
            if (mask[k] > 0.0) {
                out[k] = value_at(observer, k);
            }
        }
        return out;
    }

private:
    void check(std::span<const double> belief) const {
        if (belief.size() != n_states_) {
            throw DomainMismatch("belief does not match the experiment's state count");
        }
    }

    ValueModel model_;
    Experiment exp_;
    std::size_t n_states_;
    std::vector<OutcomeNode> nodes_;
    std::vector<std::vector<double>> lik_;
    // Posterior scratch space; makes a grid unsafe to share across threads.
    mutable std::vector<double> buffer_;
};

namespace detail {

inline double weighted_sum(std::span<const double> weights, std::span<const double> values) {
    double s = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        if (weights[k] > 0.0) {
            s += weights[k] * values[k];
        }
    }
    return s;
}

/// v(y) = sum_i w_i v(y, P_i) at every node where `mask` is positive.
inline std::vector<double> community_values(const ValuationGrid& grid, const CommunityBeliefs& community,
                                            std::span<const double> mask) {
    std::vector<double> total(grid.size(), 0.0);
    for (const auto& m : community.members()) {
        const auto v = grid.values(m.belief.probs(), mask);
        for (std::size_t k = 0; k < total.size(); ++k) {
            total[k] += m.weight * v[k];
        }
    }
    return total;
}

}  // namespace detail

/// v(y, P): how much an observer holding `observer` learns from outcome y.
inline double outcome_value(const ValueModel& model, const Experiment& exp, const Belief& observer,
                            const Outcome& y) {
    const ValuationGrid grid(model, exp, observer.size());
    return grid.value(observer.probs(), y);
}

/// v(y): the community-average value of outcome y.
inline double community_outcome_value(const ValueModel& model, const Experiment& exp,
                                      const CommunityBeliefs& community, const Outcome& y) {
    const ValuationGrid grid(model, exp, community.space()->size());
    double v = 0.0;
    for (const auto& m : community.members()) {
        v += m.weight * grid.value(m.belief.probs(), y);
    }
    return v;
}

/// Expected shift in the investigator's own beliefs:
/// integral of v(y, P) dF(y; P).
inline double private_value_investigator(const ValueModel& model, const Experiment& exp, const Belief& investigator) {
    const ValuationGrid grid(model, exp, investigator.size());
    const auto w = grid.predictive_weights(investigator.probs());
    return detail::weighted_sum(w, grid.values(investigator.probs(), w));
}

/// Expected shift in the community's beliefs, with outcomes anticipated
/// under the investigator's belief: integral of v(y) dF(y; P).
inline double public_value_investigator(const ValueModel& model, const Experiment& exp, const Belief& investigator,
                                        const CommunityBeliefs& community) {
    if (!same_space(investigator.space(), community.space())) {
        throw DomainMismatch("investigator and community live on different state spaces");
    }
    const ValuationGrid grid(model, exp, investigator.size());
    const auto w = grid.predictive_weights(investigator.probs());
    return detail::weighted_sum(w, detail::community_values(grid, community, w));
}

/// Average over reviewers of each reviewer's expected private belief shift.
inline double private_value_reviewers(const ValueModel& model, const Experiment& exp,
                                      const CommunityBeliefs& community) {
    const ValuationGrid grid(model, exp, community.space()->size());
    double total = 0.0;
    for (const auto& m : community.members()) {
        const auto w = grid.predictive_weights(m.belief.probs());
        total += m.weight * detail::weighted_sum(w, grid.values(m.belief.probs(), w));
    }
    return total;
}

/// Average over reviewers of the expected shift in community beliefs,
/// computed in its single-integral form: integral of v(y) dF(y).
inline double public_value_reviewers(const ValueModel& model, const Experiment& exp,
                                     const CommunityBeliefs& community) {
    const ValuationGrid grid(model, exp, community.space()->size());
    const auto w = grid.predictive_weights(mean_belief(community).probs());
    return detail::weighted_sum(w, detail::community_values(grid, community, w));
}

/// The same quantity as public_value_reviewers, evaluated as the double
/// integral sum_i w_i * integral of v(y) dF(y; P_i).
inline double public_value_reviewers_nested(const ValueModel& model, const Experiment& exp,
                                            const CommunityBeliefs& community) {
    double total = 0.0;
    for (const auto& m : community.members()) {
        total += m.weight * public_value_investigator(model, exp, m.belief, community);
    }
    return total;
}

}  // namespace peerlens
