#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "peerlens/error.hpp"

namespace peerlens {

/// Probability vectors must sum to one within this tolerance once stored.
inline constexpr double kProbabilityTolerance = 1e-12;
/// Inputs whose sum is off by more than this are rejected rather than normalized.
inline constexpr double kNormalizeTolerance = 1e-9;

/// Ordered, finite set of competing states of nature.
class StateSpace {
public:
    explicit StateSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
        if (labels_.size() < 2) {
            throw InvalidArgument("state space needs at least 2 states");
        }
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            for (std::size_t j = i + 1; j < labels_.size(); ++j) {
                if (labels_[i] == labels_[j]) {
                    throw InvalidArgument("duplicate state label '" + labels_[i] + "'");
                }
            }
        }
    }

    /// The shared two-state space {"0", "1"} used by every binary scenario.
    static std::shared_ptr<const StateSpace> binary() {
        static const auto space = std::make_shared<const StateSpace>(std::vector<std::string>{"0", "1"});
        return space;
    }

    std::size_t size() const noexcept { return labels_.size(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::string& label(std::size_t i) const { return labels_.at(i); }

    std::size_t index_of(std::string_view label) const {
        auto it = std::find(labels_.begin(), labels_.end(), label);
        if (it == labels_.end()) {
            throw DomainMismatch("unknown state label '" + std::string(label) + "'");
        }
        return static_cast<std::size_t>(it - labels_.begin());
    }

    friend bool operator==(const StateSpace& a, const StateSpace& b) { return a.labels_ == b.labels_; }

private:
    std::vector<std::string> labels_;
};

inline bool same_space(const std::shared_ptr<const StateSpace>& a, const std::shared_ptr<const StateSpace>& b) {
    return a == b || *a == *b;
}

/// Validates a probability vector and rescales it so that it sums to one.
/// Throws when the input is off by more than kNormalizeTolerance.
inline std::vector<double> normalized_probabilities(std::vector<double> probs) {
    double total = 0.0;
    for (double p : probs) {
        if (!std::isfinite(p) || p < 0.0 || p > 1.0 + kNormalizeTolerance) {
            throw InvalidArgument("probability entry outside [0, 1]");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > kNormalizeTolerance) {
        throw InvalidArgument("probabilities sum to " + std::to_string(total) + ", not 1");
    }
    // A sum off by rounding only is left alone so exact inputs stay exact.
    if (std::abs(total - 1.0) > 4.0 * std::numeric_limits<double>::epsilon()) {
        for (double& p : probs) {
            p = std::min(p / total, 1.0);
        }
    }
    return probs;
}

/// A probability distribution over a StateSpace.
class Belief {
public:
    Belief(std::shared_ptr<const StateSpace> space, std::vector<double> probs)
        : space_(std::move(space)), probs_(normalized_probabilities(std::move(probs))) {
        if (!space_) {
            throw InvalidArgument("belief needs a state space");
        }
        if (probs_.size() != space_->size()) {
            throw InvalidArgument("belief has " + std::to_string(probs_.size()) + " entries for " +
                                  std::to_string(space_->size()) + " states");
        }
    }

    /// Binary belief with Pr[X = 1] = p.
    static Belief binary(double p) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw InvalidArgument("binary belief p outside [0, 1]");
        }
        return Belief(StateSpace::binary(), {1.0 - p, p});
    }

    static Belief point_mass(std::shared_ptr<const StateSpace> space, std::size_t state) {
        std::vector<double> probs(space->size(), 0.0);
        probs.at(state) = 1.0;
        return Belief(std::move(space), std::move(probs));
    }

    const std::shared_ptr<const StateSpace>& space() const noexcept { return space_; }
    std::size_t size() const noexcept { return probs_.size(); }
    std::span<const double> probs() const noexcept { return probs_; }
    double prob(std::size_t state) const { return probs_.at(state); }
    double prob(std::string_view label) const { return probs_[space_->index_of(label)]; }

    bool is_binary() const noexcept { return probs_.size() == 2; }
    /// Pr[X = 1] for binary beliefs.
    double p() const { return probs_.at(1); }

    friend bool operator==(const Belief& a, const Belief& b) {
        return same_space(a.space_, b.space_) && a.probs_ == b.probs_;
    }

private:
    std::shared_ptr<const StateSpace> space_;
    std::vector<double> probs_;
};

/// A finite weighted mixture of beliefs: the distribution of beliefs held
/// across a community of peers.
class CommunityBeliefs {
public:
    struct Member {
        double weight;
        Belief belief;
    };

    explicit CommunityBeliefs(std::vector<Member> members) : members_(std::move(members)) {
        if (members_.empty()) {
            throw InvalidArgument("community needs at least one member");
        }
        std::vector<double> weights;
        weights.reserve(members_.size());
        for (const auto& m : members_) {
            if (!(m.weight > 0.0)) {
                throw InvalidArgument("community weights must be positive");
            }
            if (!same_space(m.belief.space(), members_.front().belief.space())) {
                throw InvalidArgument("community beliefs must share one state space");
            }
            weights.push_back(m.weight);
        }
        weights = normalized_probabilities(std::move(weights));
        for (std::size_t i = 0; i < members_.size(); ++i) {
            members_[i].weight = weights[i];
        }
    }

    /// Everyone holds the same belief.
    static CommunityBeliefs homogeneous(Belief belief) { return CommunityBeliefs({{1.0, std::move(belief)}}); }

    /// Two camps over a binary claim; a camp with zero weight is dropped.
    static CommunityBeliefs two_camps(double weight_a, double p_a, double p_b) {
        if (!(weight_a > 0.0 && weight_a <= 1.0)) {
            throw InvalidArgument("camp weight outside (0, 1]");
        }
        std::vector<Member> members{{weight_a, Belief::binary(p_a)}};
        if (weight_a < 1.0) {
            members.push_back({1.0 - weight_a, Belief::binary(p_b)});
        }
        return CommunityBeliefs(std::move(members));
    }

    const std::vector<Member>& members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }
    const std::shared_ptr<const StateSpace>& space() const noexcept { return members_.front().belief.space(); }

private:
    std::vector<Member> members_;
};

/// Weight-averaged belief of the community.
inline Belief mean_belief(const CommunityBeliefs& community) {
    std::vector<double> mean(community.space()->size(), 0.0);
    for (const auto& m : community.members()) {
        for (std::size_t x = 0; x < mean.size(); ++x) {
            mean[x] += m.weight * m.belief.prob(x);
        }
    }
    return Belief(community.space(), std::move(mean));
}

struct BeliefStats {
    double mean;
    double sd;
};

/// Mean and standard deviation across the community of the probability
/// assigned to one claim.
inline BeliefStats belief_stats(const CommunityBeliefs& community, std::size_t claim) {
    if (claim >= community.space()->size()) {
        throw DomainMismatch("claim index out of range");
    }
    double mean = 0.0;
    for (const auto& m : community.members()) {
        mean += m.weight * m.belief.prob(claim);
    }
    // Centered second moment; the raw-moment form cancels badly near sd = 0.
    double var = 0.0;
    for (const auto& m : community.members()) {
        const double d = m.belief.prob(claim) - mean;
        var += m.weight * d * d;
    }
    return {mean, std::sqrt(std::max(var, 0.0))};
}

inline BeliefStats belief_stats(const CommunityBeliefs& community, std::string_view claim) {
    return belief_stats(community, community.space()->index_of(claim));
}

}  // namespace peerlens
