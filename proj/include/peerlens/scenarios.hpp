#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "peerlens/beliefs.hpp"
#include "peerlens/decision.hpp"
#include "peerlens/error.hpp"
#include "peerlens/experiments.hpp"
#include "peerlens/parallel.hpp"
#include "peerlens/random.hpp"
#include "peerlens/scoring.hpp"
#include "peerlens/valuation.hpp"

namespace peerlens {

/// Criteria an investigator can use to rank candidate questions.
enum class Criterion {
    InvestigatorPublic,  ///< shift in peers' beliefs, anticipated with their own belief
    ReviewerPrivate,     ///< reviewers' expected shift in their own beliefs
    ReviewerPublic,      ///< reviewers' expected shift in the community's beliefs
};

inline std::string_view to_string(Criterion c) {
    switch (c) {
        case Criterion::InvestigatorPublic: return "investigator-public";
        case Criterion::ReviewerPrivate: return "reviewer-private";
        case Criterion::ReviewerPublic: return "reviewer-public";
    }
    return "unknown";
}

inline Criterion parse_criterion(std::string_view name) {
    for (auto c : {Criterion::InvestigatorPublic, Criterion::ReviewerPrivate, Criterion::ReviewerPublic}) {
        if (to_string(c) == name) {
            return c;
        }
    }
    throw InvalidArgument("unknown criterion '" + std::string(name) + "'");
}

/// A binary question whose community splits into a majority camp (fraction
/// m in [0.5, 1]) and a minority camp, each holding a common belief Pr[X = 1].
struct Question {
    double majority_fraction;
    double majority_belief;
    double minority_belief;

    void validate() const {
        if (!(majority_fraction >= 0.5 && majority_fraction <= 1.0)) {
            throw InvalidArgument("majority fraction outside [0.5, 1]");
        }
        for (double b : {majority_belief, minority_belief}) {
            if (!(b >= 0.0 && b <= 1.0)) {
                throw InvalidArgument("camp belief outside [0, 1]");
            }
        }
    }

    CommunityBeliefs community() const {
        validate();
        return CommunityBeliefs::two_camps(majority_fraction, majority_belief, minority_belief);
    }
};

// ---------------------------------------------------------------------------
// Worked two-camp example with definitive evidence and 0/1 learning values.

struct MarsValues {
    double private_inv;         ///< investigator convinced there is no life
    double public_inv_no_life;  ///< same investigator, valuing their peers' learning
    double public_inv_life;     ///< investigator convinced there is life
    double private_rev;
    double public_rev;
};

/// States {"no life", "life"}; 70% of peers are convinced (up to eps) there
/// is no life, 30% that there is.
inline MarsValues mars_scenario(double eps = kBeliefClamp) {
    const auto space = std::make_shared<const StateSpace>(std::vector<std::string>{"no life", "life"});
    // Built from explicit vectors so both camps carry exactly eps of doubt.
    const Belief sure_no_life(space, {1.0 - eps, eps});
    const Belief sure_life(space, {eps, 1.0 - eps});
    const CommunityBeliefs peers({{0.7, sure_no_life}, {0.3, sure_life}});
    const Experiment exp{Definitive{}};
    const ValueModel model{SurpriseIndicator{}};
    return {
        private_value_investigator(model, exp, sure_no_life),
        public_value_investigator(model, exp, sure_no_life, peers),
        public_value_investigator(model, exp, sure_life, peers),
        private_value_reviewers(model, exp, peers),
        public_value_reviewers(model, exp, peers),
    };
}

// ---------------------------------------------------------------------------
// Lone-wolf landscapes.

struct CurvePoint {
    double p;
    double value;
};

struct SurfacePoint {
    double p;
    double r;
    double value;
};

inline ValueModel brier_divergence_value() { return divergence_value(std::make_shared<const BrierScore>()); }

/// Uniform grid i / (n - 1) on [0, 1].
inline std::vector<double> unit_grid(std::size_t n) {
    if (n < 2) {
        throw InvalidArgument("grid needs at least 2 points");
    }
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return g;
}

/// Private value of the experiment to an investigator with belief p, for p
/// on a uniform grid.
inline std::vector<CurvePoint> lone_wolf_private_landscape(std::size_t grid, const Experiment& exp = GaussianBinary{},
                                                           const ValueModel& model = brier_divergence_value()) {
    if (grid < 3) {
        throw InvalidArgument("landscape grid needs at least 3 points");
    }
    const auto ps = unit_grid(grid);
    std::vector<CurvePoint> out(grid);
    parallel_for(grid, [&](std::size_t i) {
        out[i] = {ps[i], private_value_investigator(model, exp, Belief::binary(ps[i]))};
    });
    return out;
}

/// Public value to an investigator with belief p when every peer believes r;
/// row-major with p outer.
inline std::vector<SurfacePoint> lone_wolf_public_landscape(std::size_t grid, const Experiment& exp = GaussianBinary{},
                                                            const ValueModel& model = brier_divergence_value()) {
    if (grid < 3) {
        throw InvalidArgument("landscape grid needs at least 3 points");
    }
    const auto ps = unit_grid(grid);
    std::vector<SurfacePoint> out(grid * grid);
    parallel_for(grid, [&](std::size_t i) {
        const auto investigator = Belief::binary(ps[i]);
        for (std::size_t j = 0; j < grid; ++j) {
            const auto peers = CommunityBeliefs::homogeneous(Belief::binary(ps[j]));
            out[i * grid + j] = {ps[i], ps[j], public_value_investigator(model, exp, investigator, peers)};
        }
    });
    return out;
}

// ---------------------------------------------------------------------------
// Question-pool simulation.

/// Anything that yields uniform draws on [0, 1).
template <typename R>
concept UniformSource = requires(R& r) {
    { r.uniform() } -> std::convertible_to<double>;
};

/// m = 0.5 + 0.5 u1, majority belief u2, minority belief u3.
template <UniformSource R>
Question sample_question(R& rng) {
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    const double u3 = rng.uniform();
    return {0.5 + 0.5 * u1, u2, u3};
}

/// Draws the investigator into the majority camp with probability m.
template <UniformSource R>
double assign_investigator_belief(const Question& q, R& rng) {
    return rng.uniform() < q.majority_fraction ? q.majority_belief : q.minority_belief;
}

struct SimulationConfig {
    std::size_t n_investigators = 50;
    std::size_t n_candidates = 15;
    Criterion criterion = Criterion::ReviewerPublic;
    GaussianBinary experiment{};
    std::shared_ptr<const ScoringRule> rule = std::make_shared<const BrierScore>();
    std::uint64_t seed = 42;

    void validate() const {
        if (n_investigators < 1 || n_candidates < 1) {
            throw InvalidArgument("simulation counts must be >= 1");
        }
        if (!rule) {
            throw InvalidArgument("simulation needs a scoring rule");
        }
        experiment.validate();
    }
};

/// The claim an investigator favors: state 1 when their Pr[X = 1] >= 0.5.
inline std::size_t favored_claim(double investigator_belief) { return investigator_belief >= 0.5 ? 1 : 0; }

struct ChoiceRecord {
    Question question;
    double investigator_belief;  ///< Pr[X = 1]
    std::size_t favored_claim;
    double community_mean;  ///< mean community belief in the favored claim
    double community_sd;
    double criterion_value;
};

inline ChoiceRecord make_record(const Question& q, double investigator_belief, double value) {
    const std::size_t claim = favored_claim(investigator_belief);
    const auto stats = belief_stats(q.community(), claim);
    return {q, investigator_belief, claim, stats.mean, stats.sd, value};
}

/// Value of a question under a criterion. Reviewer criteria ignore the
/// investigator's belief.
inline double criterion_value(Criterion criterion, const ValueModel& model, const Experiment& exp, const Question& q,
                              double investigator_belief) {
    const auto community = q.community();
    switch (criterion) {
        case Criterion::InvestigatorPublic:
            return public_value_investigator(model, exp, Belief::binary(investigator_belief), community);
        case Criterion::ReviewerPrivate: return private_value_reviewers(model, exp, community);
        case Criterion::ReviewerPublic: return public_value_reviewers(model, exp, community);
    }
    throw InvalidArgument("unknown criterion");
}

struct Candidate {
    Question question;
    double investigator_belief;
};

/// The candidates investigator `index` draws: per candidate, a question and
/// then their belief, all from substream (seed, index).
inline std::vector<Candidate> sample_candidates(const SimulationConfig& cfg, std::size_t index) {
    Rng rng = Rng::substream(cfg.seed, index);
    std::vector<Candidate> out;
    out.reserve(cfg.n_candidates);
    for (std::size_t c = 0; c < cfg.n_candidates; ++c) {
        const Question q = sample_question(rng);
        out.push_back({q, assign_investigator_belief(q, rng)});
    }
    return out;
}

/// Every investigator picks the highest-scoring of their candidates (first
/// sampled wins ties). Output is independent of the thread count.
inline std::vector<ChoiceRecord> run_simulation(const SimulationConfig& cfg) {
    cfg.validate();
    const Experiment exp{cfg.experiment};
    const ValueModel model = divergence_value(cfg.rule);
    std::vector<ChoiceRecord> records(cfg.n_investigators);
    parallel_for(cfg.n_investigators, [&](std::size_t i) {
        const auto candidates = sample_candidates(cfg, i);
        std::size_t best = 0;
        double best_value = -std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            const double v = criterion_value(cfg.criterion, model, exp, candidates[c].question,
                                             candidates[c].investigator_belief);
            if (v > best_value) {
                best = c;
                best_value = v;
            }
        }
        records[i] = make_record(candidates[best].question, candidates[best].investigator_belief, best_value);
    });
    return records;
}

// ---------------------------------------------------------------------------
// Optimal questions.

/// Pairwise values K[a][b] = integral of v(y, q_b) dF(y; q_a) for binary
/// beliefs q on a grid. Every criterion on a finite two-camp community is a
/// weighted sum of these entries.
class PairValueKernel {
public:
    PairValueKernel(const ValueModel& model, const Experiment& exp, std::vector<double> beliefs)
        : beliefs_(std::move(beliefs)), k_(beliefs_.size() * beliefs_.size()) {
        const std::size_t n = beliefs_.size();
        std::vector<std::vector<double>> weights(n);
        std::vector<std::vector<double>> values(n);
        parallel_for(n, [&](std::size_t b) {
            const ValuationGrid grid(model, exp, 2);
            const double probs[2] = {1.0 - beliefs_[b], beliefs_[b]};
            weights[b] = grid.predictive_weights(probs);
            values[b] = grid.values(probs, std::vector<double>(grid.size(), 1.0));
        });
        parallel_for(n, [&](std::size_t a) {
            for (std::size_t b = 0; b < n; ++b) {
                k_[a * n + b] = detail::weighted_sum(weights[a], values[b]);
            }
        });
    }

    std::size_t size() const noexcept { return beliefs_.size(); }
    double belief(std::size_t i) const { return beliefs_.at(i); }
    double operator()(std::size_t investigator, std::size_t reviewer) const {
        return k_[investigator * beliefs_.size() + reviewer];
    }

    /// Criterion value for the community (m at belief a, 1 - m at belief b),
    /// with the investigator holding belief `inv`.
    double evaluate(Criterion c, double m, std::size_t a, std::size_t b, std::size_t inv) const {
        const auto& k = *this;
        switch (c) {
            case Criterion::InvestigatorPublic: return m * k(inv, a) + (1.0 - m) * k(inv, b);
            case Criterion::ReviewerPrivate: return m * k(a, a) + (1.0 - m) * k(b, b);
            case Criterion::ReviewerPublic:
                return m * m * k(a, a) + m * (1.0 - m) * (k(a, b) + k(b, a)) + (1.0 - m) * (1.0 - m) * k(b, b);
        }
        throw InvalidArgument("unknown criterion");
    }

private:
    std::vector<double> beliefs_;
    std::vector<double> k_;
};

struct OptimalQuestion {
    Question question;
    /// The investigator's Pr[X = 1]. For reviewer criteria, which ignore
    /// it, this is the majority belief.
    double investigator_belief;
    double value;
};

/// Exhaustive search over m = 0.5 + 0.5 i / (g - 1) and camp beliefs
/// j / (g - 1), all clamped to stay 1e-9 inside their ranges so both camps
/// keep positive weight and doubt. For investigator-public the investigator's
/// camp is searched too (majority first). The first optimum in lexicographic
/// order (m, majority, minority, camp) wins.
inline OptimalQuestion optimize_question(Criterion criterion, std::size_t grid, const Experiment& exp = GaussianBinary{},
                                         const ValueModel& model = brier_divergence_value()) {
    if (grid < 3) {
        throw InvalidArgument("optimization grid needs at least 3 points");
    }
    std::vector<double> beliefs = unit_grid(grid);
    for (double& q : beliefs) {
        q = std::clamp(q, kBeliefClamp, 1.0 - kBeliefClamp);
    }
    const PairValueKernel kernel(model, exp, beliefs);
    const auto ms = unit_grid(grid);
    const std::size_t camps = criterion == Criterion::InvestigatorPublic ? 2 : 1;

    OptimalQuestion best{{0.5, beliefs[0], beliefs[0]}, beliefs[0], -std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < grid; ++i) {
        const double m = std::min(0.5 + 0.5 * ms[i], 1.0 - kBeliefClamp);
        for (std::size_t a = 0; a < grid; ++a) {
            for (std::size_t b = 0; b < grid; ++b) {
                for (std::size_t camp = 0; camp < camps; ++camp) {
                    const std::size_t inv = camp == 0 ? a : b;
                    const double v = kernel.evaluate(criterion, m, a, b, inv);
                    if (v > best.value) {
                        best = {{m, beliefs[a], beliefs[b]}, beliefs[inv], v};
                    }
                }
            }
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Belief heterogeneity under definitive experiments.

struct HeterogeneityValues {
    double private_value;   ///< reviewers' own expected learning
    double homogeneous;     ///< e(mean belief): either criterion with no dissent
    double public_value;    ///< reviewers' expected community learning
};

/// Both reviewer criteria for a definitive experiment valued by divergence,
/// next to the homogeneous benchmark at the same mean belief.
inline HeterogeneityValues heterogeneity_values(std::shared_ptr<const ScoringRule> rule,
                                                const CommunityBeliefs& community) {
    const Experiment exp{Definitive{}};
    const ValueModel model = divergence_value(rule);
    return {private_value_reviewers(model, exp, community), entropy(*rule, mean_belief(community)),
            public_value_reviewers(model, exp, community)};
}

struct HeterogeneityReport {
    std::size_t trials = 0;
    std::size_t violations = 0;        ///< trials where a strict inequality failed
    std::size_t separated_trials = 0;  ///< trials whose camps differ by more than 0.05
    double min_private_margin = std::numeric_limits<double>::infinity();  ///< e(mean) - private
    double min_public_margin = std::numeric_limits<double>::infinity();   ///< public - e(mean)
    double min_separated_margin = std::numeric_limits<double>::infinity();

    static constexpr double kSeparation = 0.05;
    static constexpr double kMinMargin = 1e-6;

    bool passed() const {
        return violations == 0 && (separated_trials == 0 || min_separated_margin > kMinMargin);
    }
};

/// Random two-camp communities: first-camp weight uniform on [0.05, 0.95],
/// camp beliefs uniform on [0, 1] clamped to [1e-9, 1 - 1e-9]. Each trial
/// must satisfy private < e(mean) < public.
inline HeterogeneityReport heterogeneity_theorem_check(std::shared_ptr<const ScoringRule> rule, std::size_t trials,
                                                       Rng& rng) {
    HeterogeneityReport report;
    report.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        const double w = rng.uniform(0.05, 0.95);
        const double pa = std::clamp(rng.uniform(), kBeliefClamp, 1.0 - kBeliefClamp);
        const double pb = std::clamp(rng.uniform(), kBeliefClamp, 1.0 - kBeliefClamp);
        const auto values = heterogeneity_values(rule, CommunityBeliefs::two_camps(w, pa, pb));
        const double private_margin = values.homogeneous - values.private_value;
        const double public_margin = values.public_value - values.homogeneous;
        if (pa != pb && !(private_margin > 0.0 && public_margin > 0.0)) {
            ++report.violations;
        }
        report.min_private_margin = std::min(report.min_private_margin, private_margin);
        report.min_public_margin = std::min(report.min_public_margin, public_margin);
        if (std::abs(pa - pb) > HeterogeneityReport::kSeparation) {
            ++report.separated_trials;
            report.min_separated_margin = std::min({report.min_separated_margin, private_margin, public_margin});
        }
    }
    return report;
}

}  // namespace peerlens
