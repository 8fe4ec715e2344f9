#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "peerlens/beliefs.hpp"
#include "peerlens/error.hpp"
#include "peerlens/quadrature.hpp"

namespace peerlens {

/// Continuous outcomes integrate over [min(mu) - k sigma, max(mu) + k sigma].
inline constexpr double kTailSigmas = 8.0;
inline constexpr std::size_t kQuadratureNodes = 4001;

/// Binary state; the outcome is Normal(mu_x, sigma_y) given state x.
struct GaussianBinary {
    double mu0 = 0.0;
    double mu1 = 2.0;
    double sigma_y = 1.0;

    /// sigma_y = |mu0 - mu1| / 2.
    static GaussianBinary with_default_sigma(double mu0, double mu1) {
        return {mu0, mu1, std::abs(mu0 - mu1) / 2.0};
    }

    void validate() const {
        if (!std::isfinite(mu0) || !std::isfinite(mu1) || mu0 == mu1) {
            throw InvalidArgument("Gaussian experiment needs finite, distinct state means");
        }
        if (!(sigma_y > 0.0) || !std::isfinite(sigma_y)) {
            throw InvalidArgument("Gaussian experiment needs sigma_y > 0");
        }
    }

    double mean(std::size_t state) const { return state == 0 ? mu0 : mu1; }
};

/// The outcome reveals the state: Y = X.
struct Definitive {};

/// Discrete outcomes with a row-stochastic table: table[x][y] = F(y | x).
struct FiniteOutcome {
    std::vector<std::vector<double>> table;

    void validate() const {
        if (table.size() < 2) {
            throw InvalidArgument("outcome table needs a row per state (>= 2)");
        }
        const std::size_t cols = table.front().size();
        if (cols == 0) {
            throw InvalidArgument("outcome table needs at least one outcome");
        }
        for (const auto& row : table) {
            if (row.size() != cols) {
                throw InvalidArgument("outcome table rows differ in length");
            }
            double sum = 0.0;
            for (double v : row) {
                if (!(v >= 0.0 && v <= 1.0)) {
                    throw InvalidArgument("outcome table entries must lie in [0, 1]");
                }
                sum += v;
            }
            if (std::abs(sum - 1.0) > kProbabilityTolerance) {
                throw InvalidArgument("outcome table rows must sum to 1");
            }
        }
    }
};

/// An outcome is a real number for continuous experiments and an index for
/// discrete ones.
using Outcome = std::variant<double, std::size_t>;

/// A likelihood family F(y | x) shared by every observer.
class Experiment {
public:
    using Model = std::variant<GaussianBinary, Definitive, FiniteOutcome>;

    Experiment(GaussianBinary g) : model_(g) { g.validate(); }
    Experiment(Definitive d) : model_(d) {}
    Experiment(FiniteOutcome f) : model_((f.validate(), std::move(f))) {}

    const Model& model() const noexcept { return model_; }
    bool is_continuous() const noexcept { return std::holds_alternative<GaussianBinary>(model_); }
    bool is_definitive() const noexcept { return std::holds_alternative<Definitive>(model_); }

    /// Throws DomainMismatch when the experiment cannot act on `n_states` states.
    void check_states(std::size_t n_states) const {
        if (const auto* f = std::get_if<FiniteOutcome>(&model_); f && f->table.size() != n_states) {
            throw DomainMismatch("outcome table has " + std::to_string(f->table.size()) + " rows for " +
                                 std::to_string(n_states) + " states");
        }
        if (is_continuous() && n_states != 2) {
            throw DomainMismatch("Gaussian experiment needs a binary state space");
        }
    }

    std::size_t outcome_count(std::size_t n_states) const {
        if (const auto* f = std::get_if<FiniteOutcome>(&model_)) {
            return f->table.front().size();
        }
        return n_states;
    }

private:
    Model model_;
};

namespace detail {

inline double normal_log_density(double y, double mean, double sd) {
    const double z = (y - mean) / sd;
    return -0.5 * z * z - std::log(sd) - 0.5 * std::log(2.0 * std::numbers::pi);
}

inline double continuous_outcome(const Outcome& y) {
    if (const auto* v = std::get_if<double>(&y)) {
        return *v;
    }
    throw DomainMismatch("Gaussian experiment needs a real-valued outcome");
}

inline std::size_t discrete_outcome(const Outcome& y, std::size_t count) {
    const auto* v = std::get_if<std::size_t>(&y);
    if (!v) {
        throw DomainMismatch("discrete experiment needs an outcome index");
    }
    if (*v >= count) {
        throw DomainMismatch("outcome index out of range");
    }
    return *v;
}

}  // namespace detail

/// Density (continuous) or mass (discrete) of outcome y when the state is x.
inline double likelihood(const Experiment& exp, const Outcome& y, std::size_t x, std::size_t n_states = 2) {
    exp.check_states(n_states);
    if (x >= n_states) {
        throw DomainMismatch("state index out of range");
    }
    return std::visit(
        [&](const auto& m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, GaussianBinary>) {
                return std::exp(detail::normal_log_density(detail::continuous_outcome(y), m.mean(x), m.sigma_y));
            } else if constexpr (std::is_same_v<M, Definitive>) {
                return detail::discrete_outcome(y, n_states) == x ? 1.0 : 0.0;
            } else {
                return m.table[x][detail::discrete_outcome(y, m.table.front().size())];
            }
        },
        exp.model());
}

/// Writes the Bayesian posterior of `prior` after observing y into `out`.
/// Gaussian likelihoods are combined in log space so posteriors stay exact
/// far out in the tails. Throws ImpossibleEvidence if y has zero predictive mass.
inline void posterior_into(const Experiment& exp, std::span<const double> prior, const Outcome& y,
                           std::span<double> out) {
    const std::size_t n = prior.size();
    std::visit(
        [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, GaussianBinary>) {
                const double yv = detail::continuous_outcome(y);
                double ll[2];
                for (std::size_t x = 0; x < 2; ++x) {
                    ll[x] = prior[x] > 0.0 ? detail::normal_log_density(yv, m.mean(x), m.sigma_y)
                                           : -std::numeric_limits<double>::infinity();
                }
                const double top = std::max(ll[0], ll[1]);
                if (!std::isfinite(top)) {
                    throw ImpossibleEvidence("prior assigns no mass to any state");
                }
                for (std::size_t x = 0; x < 2; ++x) {
                    out[x] = prior[x] > 0.0 ? prior[x] * std::exp(ll[x] - top) : 0.0;
                }
            } else if constexpr (std::is_same_v<M, Definitive>) {
                const std::size_t yi = detail::discrete_outcome(y, n);
                for (std::size_t x = 0; x < n; ++x) {
                    out[x] = x == yi ? prior[x] : 0.0;
                }
            } else {
                const std::size_t yi = detail::discrete_outcome(y, m.table.front().size());
                for (std::size_t x = 0; x < n; ++x) {
                    out[x] = prior[x] * m.table[x][yi];
                }
            }
        },
        exp.model());
    double total = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
        total += out[x];
    }
    if (!(total > 0.0)) {
        throw ImpossibleEvidence("observed outcome has zero predictive probability");
    }
    for (std::size_t x = 0; x < n; ++x) {
        out[x] /= total;
    }
}

/// Posterior belief Q(P, y).
inline Belief posterior(const Experiment& exp, const Belief& prior, const Outcome& y) {
    exp.check_states(prior.size());
    std::vector<double> out(prior.size());
    posterior_into(exp, prior.probs(), y, out);
    return Belief(prior.space(), std::move(out));
}

/// One node of the integration backbone: an outcome and the weight it
/// carries in sums over outcomes (a Simpson weight, or 1 for discrete outcomes).
struct OutcomeNode {
    Outcome y;
    double weight;
};

/// The shared integration backbone for expectations over outcomes. Discrete
/// experiments enumerate every outcome; Gaussian experiments use a composite
/// Simpson rule on [min(mu) - 8 sigma, max(mu) + 8 sigma] with 4001 nodes.
inline std::vector<OutcomeNode> outcome_nodes(const Experiment& exp, std::size_t n_states) {
    exp.check_states(n_states);
    std::vector<OutcomeNode> nodes;
    if (const auto* g = std::get_if<GaussianBinary>(&exp.model())) {
        const double lo = std::min(g->mu0, g->mu1) - kTailSigmas * g->sigma_y;
        const double hi = std::max(g->mu0, g->mu1) + kTailSigmas * g->sigma_y;
        const auto rule = simpson_rule(lo, hi, kQuadratureNodes);
        nodes.reserve(rule.nodes.size());
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
            nodes.push_back({rule.nodes[k], rule.weights[k]});
        }
    } else {
        const std::size_t count = exp.outcome_count(n_states);
        nodes.reserve(count);
        for (std::size_t y = 0; y < count; ++y) {
            nodes.push_back({y, 1.0});
        }
    }
    return nodes;
}

/// Likelihood of every backbone node under every state: table[x][k].
inline std::vector<std::vector<double>> likelihood_table(const Experiment& exp, std::span<const OutcomeNode> nodes,
                                                         std::size_t n_states) {
    std::vector<std::vector<double>> table(n_states, std::vector<double>(nodes.size()));
    for (std::size_t x = 0; x < n_states; ++x) {
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            table[x][k] = likelihood(exp, nodes[k].y, x, n_states);
        }
    }
    return table;
}

/// Distribution of the outcome Y anticipated under a belief about X: the
/// mixture sum_x P(x) F(y | x).
class OutcomeDistribution {
public:
    OutcomeDistribution(Experiment exp, Belief mixing) : exp_(std::move(exp)), mixing_(std::move(mixing)) {
        exp_.check_states(mixing_.size());
    }

    const Experiment& experiment() const noexcept { return exp_; }
    const Belief& mixing() const noexcept { return mixing_; }

    /// Density (continuous) or mass (discrete) at y.
    double density(const Outcome& y) const {
        double f = 0.0;
        for (std::size_t x = 0; x < mixing_.size(); ++x) {
            if (mixing_.prob(x) > 0.0) {
                f += mixing_.prob(x) * likelihood(exp_, y, x, mixing_.size());
            }
        }
        return f;
    }

    /// Expectation of g(y) over the integration backbone.
    template <typename Fn>
    double expect(Fn&& g) const {
        double sum = 0.0;
        for (const auto& node : outcome_nodes(exp_, mixing_.size())) {
            const double f = density(node.y);
            if (f > 0.0) {
                sum += node.weight * f * g(node.y);
            }
        }
        return sum;
    }

    double total_mass() const {
        return expect([](const Outcome&) { return 1.0; });
    }

private:
    Experiment exp_;
    Belief mixing_;
};

/// F(y; P), the outcome distribution anticipated by someone who believes P.
inline OutcomeDistribution predictive(const Experiment& exp, const Belief& prior) { return {exp, prior}; }

/// F(y), the outcome distribution averaged across the community; by linearity
/// this is the predictive distribution of the mean belief.
inline OutcomeDistribution community_predictive(const Experiment& exp, const CommunityBeliefs& community) {
    return {exp, mean_belief(community)};
}

}  // namespace peerlens
