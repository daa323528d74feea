#include <doctest.h>

#include "common.hpp"
#include "config.hpp"
#include "pipeline.hpp"

#include <filesystem>
#include <fstream>

using namespace insurval;

TEST_SUITE_BEGIN("config");

TEST_CASE("full config parses with section scoping") {
    const std::string text = R"(
# benchmark run
[scenario]
example = section5
guarantee = 1.0

[market]
r = 0.01
mu = 0.02
sigma = 0.1
y1_0 = 1.0
delta = -0.5

[mortality]
lambda0 = 0.0087
c = 0.075
eta_mort = 0.000597
age_x = 55
l_x = 1000

[grid]
horizon = 10
substeps = 12
paths = 50000
seed = 42

[valuation]
coc_rate = 0.1
alpha = 0.95
tau = 0.998
second_loss = kb

[regressor]
kind = mlp
hidden = 10,10,10
epochs = 200
batch = 1024
step_size = 0.001
seed = 7
patience = 20

[output]
dir = out/section5
)";
    const RunConfig cfg = RunConfig::parse_text(text);
    CHECK(cfg.example == "section5");
    CHECK(cfg.market.delta == -0.5);
    CHECK(cfg.mortality.l_x == 1000);
    CHECK(cfg.grid.n_paths == 50000);
    CHECK(cfg.valuation.alpha == 0.95);
    CHECK(cfg.second_loss.kind == LossKind::KoenkerBassett);
    CHECK(cfg.second_loss.level == 0.95);
    CHECK(cfg.regressor.kind == RegressorKind::Mlp);
    CHECK(cfg.regressor.hidden == std::vector<int>{10, 10, 10});
    CHECK(cfg.regressor.training.seed == 7);
    CHECK(cfg.out_dir == "out/section5");
}

TEST_CASE("expectile second step takes its level from tau") {
    const RunConfig cfg = RunConfig::parse_text("[valuation]\ntau = 0.998\nsecond_loss = expectile\n");
    CHECK(cfg.second_loss.kind == LossKind::Expectile);
    CHECK(cfg.second_loss.level == 0.998);
}

TEST_CASE("strict parsing rejects unknown keys, sections and values") {
    CHECK_THROWS_WITH_AS(RunConfig::parse_text("[market]\nvol = 0.2\n"),
                         doctest::Contains("market.vol"), validation_error);
    CHECK_THROWS_WITH_AS(RunConfig::parse_text("[portfolio]\nx = 1\n"),
                         doctest::Contains("portfolio"), validation_error);
    CHECK_THROWS_AS(RunConfig::parse_text("r = 0.01\n"), validation_error);
    CHECK_THROWS_WITH_AS(RunConfig::parse_text("[market]\nr = abc\n"),
                         doctest::Contains("market.r"), validation_error);
    CHECK_THROWS_WITH_AS(RunConfig::parse_text("[scenario]\nexample = example9\n"),
                         doctest::Contains("example9"), validation_error);
    CHECK_THROWS_AS(RunConfig::parse_text("[market\nr = 0.01\n"), validation_error);
    CHECK_THROWS_AS(RunConfig::parse_text("[valuation]\nsecond_loss = huber\n"),
                    validation_error);
}

TEST_CASE("missing config files are reported") {
    CHECK_THROWS_WITH_AS(RunConfig::parse_file("/nonexistent/path.cfg"),
                         doctest::Contains("cannot open"), validation_error);
}

TEST_CASE("commands validate parameters by field name") {
    RunConfig cfg = RunConfig::parse_text("[market]\nsigma = -1\n[grid]\npaths = 100\nhorizon = 2\n");
    cfg.out_dir = (std::filesystem::temp_directory_path() / "insurval_cfg_test").string();
    CHECK_THROWS_WITH_AS(cmd_simulate(cfg), doctest::Contains("market.sigma"),
                         validation_error);

    RunConfig wrong = RunConfig::parse_text("[scenario]\nexample = example3\n");
    wrong.out_dir = cfg.out_dir;
    CHECK_THROWS_AS(cmd_value_one_period(wrong), validation_error);
    RunConfig wrong2 = RunConfig::parse_text("[scenario]\nexample = example1\n");
    wrong2.out_dir = cfg.out_dir;
    CHECK_THROWS_AS(cmd_value_dynamic(wrong2), validation_error);
    std::filesystem::remove_all(cfg.out_dir);
}

TEST_CASE("simulate and report round-trip through the output directory") {
    RunConfig cfg = RunConfig::parse_text(R"(
[grid]
horizon = 2
substeps = 4
paths = 50
seed = 9
)");
    const auto dir = std::filesystem::temp_directory_path() / "insurval_pipe_test";
    cfg.out_dir = dir.string();
    const std::string summary = cmd_simulate(cfg);
    CHECK(summary.find("checksum") != std::string::npos);
    CHECK(std::filesystem::exists(dir / "scenarios.csv"));
    CHECK(std::filesystem::exists(dir / "scenarios.csv.meta.json"));
    CHECK(std::filesystem::exists(dir / "summary.json"));

    // determinism: identical run, identical checksum line
    const std::string summary2 = cmd_simulate(cfg);
    CHECK(summary == summary2);

    const std::string report = cmd_report(cfg.out_dir);
    CHECK(report.find("simulate") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("one-period pipeline writes the spec'd csv set") {
    RunConfig cfg = RunConfig::parse_text(R"(
[scenario]
example = example2
[grid]
paths = 4000
seed = 3
[valuation]
coc_rate = 0.1
alpha = 0.99
tau = 0.998
)");
    const auto dir = std::filesystem::temp_directory_path() / "insurval_e2_test";
    cfg.out_dir = dir.string();
    cmd_value_one_period(cfg);
    for (const char* name : {"table1.csv", "fair_values.csv", "residual_stats.csv",
                             "residual_density.csv", "summary.json"})
        CHECK(std::filesystem::exists(dir / name));
    // table1 has a header plus six strategies
    std::ifstream in(dir / "table1.csv");
    std::string line;
    int rows = 0;
    std::getline(in, line);
    CHECK(line == "strategy,riskfree,risky,cost");
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 6);
    std::filesystem::remove_all(dir);
}

TEST_SUITE_END();
