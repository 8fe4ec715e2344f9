#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int status;
    std::string out;
};

/// Runs the CLI with `args`, capturing stdout; stderr is discarded.
RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(PEERLENS_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        return {-1, ""};
    }
    std::string out;
    char buf[4096];
    while (const std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) {
        out.append(buf, n);
    }
    const int raw = pclose(pipe);
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    for (std::string line; std::getline(is, line);) {
        out.push_back(line);
    }
    return out;
}

std::vector<std::string> split(const std::string& row) {
    std::vector<std::string> out;
    std::istringstream is(row);
    for (std::string cell; std::getline(is, cell, ',');) {
        out.push_back(cell);
    }
    return out;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("peerlens_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    fs::path dir_;
};

TEST_F(CliTest, MarsCsvAndJson) {
    const auto csv = run_cli("mars");
    ASSERT_EQ(csv.status, 0);
    const auto rows = lines(csv.out);
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(rows[0], "name,value");
    double public_rev = -1;
    for (const auto& row : rows) {
        const auto cells = split(row);
        if (cells[0] == "public_rev") {
            public_rev = std::stod(cells[1]);
        }
    }
    EXPECT_NEAR(public_rev, 0.42, 1e-9);

    const auto js = run_cli("--json mars");
    ASSERT_EQ(js.status, 0);
    const auto j = nlohmann::json::parse(js.out);
    EXPECT_NEAR(j.at("public_inv_life").get<double>(), 0.7, 1e-9);
}

TEST_F(CliTest, LandscapeShapesAndReproducibility) {
    const auto priv = run_cli("landscape --mode private --grid 3");
    ASSERT_EQ(priv.status, 0);
    const auto rows = lines(priv.out);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], "p,value");

    const auto pub = run_cli("landscape --mode public --grid 3");
    ASSERT_EQ(pub.status, 0);
    const auto prow = lines(pub.out);
    ASSERT_EQ(prow.size(), 10u);
    EXPECT_EQ(prow[0], "p,r,value");
    EXPECT_EQ(run_cli("landscape --mode public --grid 3").out, pub.out);
}

TEST_F(CliTest, SimulateRowsAndSeeds) {
    const auto a = run_cli("simulate --criterion reviewer-public --investigators 50 --candidates 3 --seed 7");
    ASSERT_EQ(a.status, 0);
    const auto rows = lines(a.out);
    ASSERT_EQ(rows.size(), 51u);
    EXPECT_EQ(rows[0], "m,q_maj,q_min,investigator_belief,favored_claim,community_mean,community_sd,criterion_value");
    EXPECT_EQ(split(rows[1]).size(), 8u);
    EXPECT_EQ(run_cli("simulate --criterion reviewer-public --investigators 50 --candidates 3 --seed 7").out, a.out);
    EXPECT_NE(run_cli("simulate --criterion reviewer-public --investigators 50 --candidates 3 --seed 8").out, a.out);
    EXPECT_EQ(run_cli("simulate --candidates 1 --investigators 4").status, 0);
}

TEST_F(CliTest, OptimalReviewerPrivate) {
    const auto r = run_cli("optimal --criterion reviewer-private --grid 11");
    ASSERT_EQ(r.status, 0);
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 2u);
    const auto header = split(rows[0]);
    const auto cells = split(rows[1]);
    ASSERT_EQ(header.size(), cells.size());
    EXPECT_EQ(cells[0], "reviewer-private");
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "community_mean") {
            EXPECT_NEAR(std::stod(cells[i]), 0.5, 1e-9);
        }
        if (header[i] == "community_sd") {
            EXPECT_NEAR(std::stod(cells[i]), 0.0, 1e-9);
        }
    }
}

TEST_F(CliTest, Propcheck) {
    const auto none = run_cli("propcheck --trials 0");
    EXPECT_EQ(none.status, 0);
    const auto some = run_cli("propcheck --trials 50 --seed 3");
    EXPECT_EQ(some.status, 0);
    EXPECT_NE(some.out.find("all properties hold"), std::string::npos);
}

TEST_F(CliTest, UsageErrors) {
    EXPECT_EQ(run_cli("simulate --criterion editor-private").status, 2);
    EXPECT_EQ(run_cli("landscape --grid 2").status, 2);
    EXPECT_EQ(run_cli("").status, 2);
    EXPECT_EQ(run_cli("mars --bogus").status, 2);
    EXPECT_EQ(run_cli("--config " + (dir_ / "missing.json").string() + " mars").status, 3);
}

TEST_F(CliTest, ConfigFileWithOverrideAndSidecar) {
    const auto config = dir_ / "run.json";
    std::ofstream(config) << R"({"grid": 5, "mode": "public", "experiment": {"mu0": 0, "mu1": 4}})";
    const auto out = dir_ / "surface.csv";
    const auto r = run_cli("--config " + config.string() + " landscape --grid 3 --out " + out.string());
    ASSERT_EQ(r.status, 0);
    EXPECT_TRUE(r.out.empty());
    EXPECT_EQ(lines(slurp(out)).size(), 10u);

    const auto meta = nlohmann::json::parse(slurp(out.string() + ".meta.json"));
    EXPECT_EQ(meta.at("command"), "landscape");
    EXPECT_EQ(meta.at("config").at("grid"), 3);
    EXPECT_EQ(meta.at("config").at("mode"), "public");
    EXPECT_DOUBLE_EQ(meta.at("config").at("experiment").at("sigma_y").get<double>(), 2.0);

    std::ofstream(dir_ / "bad.json") << R"({"grdi": 5})";
    EXPECT_EQ(run_cli("--config " + (dir_ / "bad.json").string() + " mars").status, 2);
}

TEST_F(CliTest, UnwritableOutputIsAnIoError) {
    EXPECT_EQ(run_cli("mars --out " + (dir_ / "no" / "such" / "dir.csv").string()).status, 3);
}

}  // namespace
