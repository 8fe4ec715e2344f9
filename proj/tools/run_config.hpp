#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>

#include "json.hpp"
#include "peerlens/peerlens.hpp"

namespace peerlens::cli {

/// Effective settings for one CLI invocation: defaults, then the JSON config
/// file, then command-line flags.
struct RunConfig {
    double mu0 = 0.0;
    double mu1 = 2.0;
    /// Unset means |mu0 - mu1| / 2.
    std::optional<double> sigma_y;
    std::string rule = "brier";
    std::size_t grid = 101;
    std::string mode = "private";
    std::string criterion = "reviewer-public";
    std::size_t investigators = 50;
    std::size_t candidates = 15;
    std::size_t trials = 1000;
    std::uint64_t seed = 42;
    std::string out;

    GaussianBinary experiment() const {
        GaussianBinary g = GaussianBinary::with_default_sigma(mu0, mu1);
        if (sigma_y) {
            g.sigma_y = *sigma_y;
        }
        return g;
    }

    void validate() const {
        experiment().validate();
        make_scoring_rule(rule);
        parse_criterion(criterion);
        if (grid < 3) {
            throw InvalidArgument("grid must be >= 3");
        }
        if (mode != "private" && mode != "public") {
            throw InvalidArgument("landscape mode must be 'private' or 'public'");
        }
        if (investigators < 1 || candidates < 1) {
            throw InvalidArgument("investigators and candidates must be >= 1");
        }
    }
};

inline nlohmann::json to_json(const RunConfig& c) {
    const auto g = c.experiment();
    return {
        {"experiment", {{"mu0", g.mu0}, {"mu1", g.mu1}, {"sigma_y", g.sigma_y}}},
        {"rule", c.rule},
        {"grid", c.grid},
        {"mode", c.mode},
        {"criterion", c.criterion},
        {"investigators", c.investigators},
        {"candidates", c.candidates},
        {"trials", c.trials},
        {"seed", c.seed},
        {"out", c.out},
    };
}

/// Overlays the keys present in `j` onto `c`. Unknown keys are rejected.
inline void apply_json(const nlohmann::json& j, RunConfig& c) {
    if (!j.is_object()) {
        throw InvalidArgument("config must be a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        if (key == "experiment") {
            for (const auto& [ek, ev] : value.items()) {
                if (ek == "mu0") {
                    c.mu0 = ev.get<double>();
                } else if (ek == "mu1") {
                    c.mu1 = ev.get<double>();
                } else if (ek == "sigma_y") {
                    c.sigma_y = ev.get<double>();
                } else {
                    throw InvalidArgument("unknown config key 'experiment." + ek + "'");
                }
            }
        } else if (key == "rule") {
            c.rule = value.get<std::string>();
        } else if (key == "grid") {
            c.grid = value.get<std::size_t>();
        } else if (key == "mode") {
            c.mode = value.get<std::string>();
        } else if (key == "criterion") {
            c.criterion = value.get<std::string>();
        } else if (key == "investigators") {
            c.investigators = value.get<std::size_t>();
        } else if (key == "candidates") {
            c.candidates = value.get<std::size_t>();
        } else if (key == "trials") {
            c.trials = value.get<std::size_t>();
        } else if (key == "seed") {
            c.seed = value.get<std::uint64_t>();
        } else if (key == "out") {
            c.out = value.get<std::string>();
        } else {
            throw InvalidArgument("unknown config key '" + key + "'");
        }
    }
}

inline void load_config_file(const std::string& path, RunConfig& c) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot read config file '" + path + "'");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument("config file '" + path + "': " + e.what());
    }
    try {
        apply_json(j, c);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument("config file '" + path + "': " + e.what());
    }
}

/// Command-line values; each one set overrides the config file.
struct Overrides {
    std::optional<double> mu0;
    std::optional<double> mu1;
    std::optional<double> sigma_y;
    std::optional<std::string> rule;
    std::optional<std::size_t> grid;
    std::optional<std::string> mode;
    std::optional<std::string> criterion;
    std::optional<std::size_t> investigators;
    std::optional<std::size_t> candidates;
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;

    void apply(RunConfig& c) const {
        auto set = [](auto& dst, const auto& src) {
            if (src) {
                dst = *src;
            }
        };
        set(c.mu0, mu0);
        set(c.mu1, mu1);
        if (sigma_y) {
            c.sigma_y = sigma_y;
        }
        set(c.rule, rule);
        set(c.grid, grid);
        set(c.mode, mode);
        set(c.criterion, criterion);
        set(c.investigators, investigators);
        set(c.candidates, candidates);
        set(c.trials, trials);
        set(c.seed, seed);
        set(c.out, out);
    }
};

}  // namespace peerlens::cli
