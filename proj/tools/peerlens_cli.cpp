// Command-line front end: `peerlens <mars|landscape|simulate|optimal|propcheck>`.

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "peerlens/peerlens.hpp"
#include "run_config.hpp"

namespace {

using peerlens::cli::RunConfig;
using nlohmann::json;

constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

class IoError : public peerlens::Error {
public:
    using Error::Error;
};

/// Writes `body` to cfg.out (plus a `.meta.json` sidecar holding the
/// effective config) or to stdout when no path is set.
void emit(const RunConfig& cfg, const std::string& command, const std::string& body) {
    if (cfg.out.empty()) {
        std::cout << body;
        return;
    }
    {
        std::ofstream file(cfg.out, std::ios::binary);
        if (!file || !(file << body) || !file.flush()) {
            throw IoError("cannot write '" + cfg.out + "'");
        }
    }
    std::ofstream meta(cfg.out + ".meta.json", std::ios::binary);
    const json sidecar = {{"command", command}, {"config", peerlens::cli::to_json(cfg)}};
    if (!meta || !(meta << sidecar.dump(2) << '\n')) {
        throw IoError("cannot write '" + cfg.out + ".meta.json'");
    }
}

std::string run_mars(const RunConfig&, bool as_json) {
    const auto m = peerlens::mars_scenario();
    const std::pair<const char*, double> rows[] = {
        {"private_inv", m.private_inv},         {"public_inv_no_life", m.public_inv_no_life},
        {"public_inv_life", m.public_inv_life}, {"private_rev", m.private_rev},
        {"public_rev", m.public_rev},
    };
    std::ostringstream os;
    if (as_json) {
        json j = json::object();
        for (const auto& [name, value] : rows) {
            j[name] = value;
        }
        os << j.dump(2) << '\n';
    } else {
        os << "name,value\n";
        for (const auto& [name, value] : rows) {
            os << name << ',' << peerlens::format_number(value) << '\n';
        }
    }
    return os.str();
}

std::string run_landscape(const RunConfig& cfg, bool as_json) {
    const peerlens::Experiment exp{cfg.experiment()};
    const auto model = peerlens::divergence_value(peerlens::make_scoring_rule(cfg.rule));
    std::ostringstream os;
    if (cfg.mode == "private") {
        const auto curve = peerlens::lone_wolf_private_landscape(cfg.grid, exp, model);
        if (as_json) {
            json j = json::array();
            for (const auto& pt : curve) {
                j.push_back({{"p", pt.p}, {"value", pt.value}});
            }
            os << j.dump(2) << '\n';
        } else {
            peerlens::write_curve_csv(os, curve);
        }
    } else {
        const auto surface = peerlens::lone_wolf_public_landscape(cfg.grid, exp, model);
        if (as_json) {
            json j = json::array();
            for (const auto& pt : surface) {
                j.push_back({{"p", pt.p}, {"r", pt.r}, {"value", pt.value}});
            }
            os << j.dump(2) << '\n';
        } else {
            peerlens::write_surface_csv(os, surface);
        }
    }
    return os.str();
}

json record_json(const peerlens::ChoiceRecord& r) {
    return {{"m", r.question.majority_fraction},
            {"q_maj", r.question.majority_belief},
            {"q_min", r.question.minority_belief},
            {"investigator_belief", r.investigator_belief},
            {"favored_claim", r.favored_claim},
            {"community_mean", r.community_mean},
            {"community_sd", r.community_sd},
            {"criterion_value", r.criterion_value}};
}

std::string run_simulate(const RunConfig& cfg, bool as_json) {
    peerlens::SimulationConfig sim;
    sim.n_investigators = cfg.investigators;
    sim.n_candidates = cfg.candidates;
    sim.criterion = peerlens::parse_criterion(cfg.criterion);
    sim.experiment = cfg.experiment();
    sim.rule = peerlens::make_scoring_rule(cfg.rule);
    sim.seed = cfg.seed;
    const auto records = peerlens::run_simulation(sim);
    std::ostringstream os;
    if (as_json) {
        json j = json::array();
        for (const auto& r : records) {
            j.push_back(record_json(r));
        }
        os << j.dump(2) << '\n';
    } else {
        peerlens::write_choices_csv(os, records);
    }
    return os.str();
}

std::string run_optimal(const RunConfig& cfg, bool as_json) {
    const auto criterion = peerlens::parse_criterion(cfg.criterion);
    const peerlens::Experiment exp{cfg.experiment()};
    const auto model = peerlens::divergence_value(peerlens::make_scoring_rule(cfg.rule));
    const auto best = peerlens::optimize_question(criterion, cfg.grid, exp, model);
    const auto record = peerlens::make_record(best.question, best.investigator_belief, best.value);
    std::ostringstream os;
    if (as_json) {
        json j = record_json(record);
        j["criterion"] = cfg.criterion;
        j["grid"] = cfg.grid;
        os << j.dump(2) << '\n';
    } else {
        os << "criterion," << peerlens::kChoiceColumns << '\n';
        std::ostringstream row;
        peerlens::write_choices_csv(row, std::span(&record, 1));
        const std::string text = row.str();
        os << cfg.criterion << ',' << text.substr(text.find('\n') + 1);
    }
    return os.str();
}

int run_propcheck(const RunConfig& cfg, bool as_json) {
    const auto checks = peerlens::run_property_suite(cfg.trials, cfg.seed);
    bool ok = true;
    std::ostringstream os;
    json j = json::array();
    for (const auto& c : checks) {
        ok = ok && c.passed();
        if (as_json) {
            j.push_back({{"name", c.name},
                         {"passed", c.passed()},
                         {"cases", c.cases},
                         {"failures", c.failures},
                         {"worst_slack", c.cases ? json(c.worst_slack) : json(nullptr)}});
        } else {
            os << (c.passed() ? "PASS " : "FAIL ") << c.name << " (cases=" << c.cases << ", failures=" << c.failures
               << ", worst_slack=" << (c.cases ? peerlens::format_number(c.worst_slack) : "n/a") << ")\n";
        }
    }
    if (as_json) {
        os << json{{"passed", ok}, {"checks", j}}.dump(2) << '\n';
    } else {
        os << (ok ? "all properties hold\n" : "property violations found\n");
    }
    emit(cfg, "propcheck", os.str());
    return ok ? 0 : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Valuation of experiments under ex ante and ex post peer review"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    bool as_json = false;
    peerlens::cli::Overrides over;

    app.add_option("--config", config_path, "JSON config file; flags override its values");
    app.add_flag("--json", as_json, "Emit JSON instead of CSV");

    auto add_experiment = [&](CLI::App* sub) {
        sub->add_option("--mu0", over.mu0, "Outcome mean when X = 0");
        sub->add_option("--mu1", over.mu1, "Outcome mean when X = 1");
        sub->add_option("--sigma-y", over.sigma_y, "Outcome SD (default |mu0 - mu1| / 2)");
        sub->add_option("--rule", over.rule, "Scoring rule: brier | ignorance");
    };
    auto add_out = [&](CLI::App* sub) { sub->add_option("--out,-o", over.out, "Output path (default stdout)"); };

    auto* mars = app.add_subcommand("mars", "Two-camp worked example with definitive evidence");
    add_out(mars);

    auto* landscape = app.add_subcommand("landscape", "Lone-wolf private (p) or public (p, r) value landscape");
    landscape->add_option("--mode", over.mode, "private | public");
    landscape->add_option("--grid", over.grid, "Points per axis (>= 3)");
    add_experiment(landscape);
    add_out(landscape);

    auto* simulate = app.add_subcommand("simulate", "Question-pool simulation, one row per investigator");
    simulate->add_option("--criterion", over.criterion, "investigator-public | reviewer-private | reviewer-public");
    simulate->add_option("--investigators", over.investigators, "Number of investigators");
    simulate->add_option("--candidates", over.candidates, "Candidate questions per investigator");
    simulate->add_option("--seed", over.seed, "Master RNG seed");
    add_experiment(simulate);
    add_out(simulate);

    auto* optimal = app.add_subcommand("optimal", "Grid search for the best question under a criterion");
    optimal->add_option("--criterion", over.criterion, "investigator-public | reviewer-private | reviewer-public");
    optimal->add_option("--grid", over.grid, "Points per axis (>= 3)");
    add_experiment(optimal);
    add_out(optimal);

    auto* propcheck = app.add_subcommand("propcheck", "Randomized checks of the scoring and decision identities");
    propcheck->add_option("--trials", over.trials, "Random cases per property");
    propcheck->add_option("--seed", over.seed, "Master RNG seed");
    add_out(propcheck);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    RunConfig cfg;
    try {
        if (!config_path.empty()) {
            if (!std::ifstream(config_path)) {
                throw IoError("cannot read config file '" + config_path + "'");
            }
            peerlens::cli::load_config_file(config_path, cfg);
        }
        over.apply(cfg);
        cfg.validate();

        if (mars->parsed()) {
            emit(cfg, "mars", run_mars(cfg, as_json));
        } else if (landscape->parsed()) {
            emit(cfg, "landscape", run_landscape(cfg, as_json));
        } else if (simulate->parsed()) {
            emit(cfg, "simulate", run_simulate(cfg, as_json));
        } else if (optimal->parsed()) {
            emit(cfg, "optimal", run_optimal(cfg, as_json));
        } else if (propcheck->parsed()) {
            return run_propcheck(cfg, as_json);
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return 0;
}
