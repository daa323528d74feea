#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// runs the built CLI via the shell, capturing stdout/stderr
RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path tmp = fs::temp_directory_path() / "insurval_cli_io";
    fs::create_directories(tmp);
    const fs::path out = tmp / ("out" + std::to_string(counter) + ".txt");
    const fs::path err = tmp / ("err" + std::to_string(counter) + ".txt");
    ++counter;
    const std::string cmd = std::string(INSURVAL_CLI_PATH) + " " + args + " >" + out.string() +
                            " 2>" + err.string();
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(raw);
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

fs::path write_config(const std::string& name, const std::string& text) {
    const fs::path dir = fs::temp_directory_path() / "insurval_cli_cfg";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    std::ofstream(p) << text;
    return p;
}

} // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("simulate writes scenarios and is deterministic") {
    const fs::path cfg = write_config("sim.cfg", R"(
[grid]
horizon = 2
substeps = 4
paths = 40
seed = 12
)");
    const fs::path out1 = fs::temp_directory_path() / "insurval_cli_sim1";
    const fs::path out2 = fs::temp_directory_path() / "insurval_cli_sim2";
    const RunResult a =
        run_cli("simulate --config " + cfg.string() + " --out " + out1.string());
    REQUIRE(a.exit_code == 0);
    CHECK(a.out.find("checksum") != std::string::npos);
    CHECK(fs::exists(out1 / "scenarios.csv"));
    CHECK(fs::exists(out1 / "scenarios.csv.meta.json"));

    const RunResult b =
        run_cli("simulate --config " + cfg.string() + " --out " + out2.string());
    REQUIRE(b.exit_code == 0);
    // identical checksum lines for identical configs
    CHECK(a.out == b.out);

    // a different seed changes the data
    const RunResult c = run_cli("simulate --config " + cfg.string() + " --out " +
                                out2.string() + " --seed 99");
    REQUIRE(c.exit_code == 0);
    CHECK(c.out != a.out);

    fs::remove_all(out1);
    fs::remove_all(out2);
}

TEST_CASE("config errors exit with code 2 and name the field") {
    const fs::path cfg = write_config("bad_sigma.cfg", R"(
[market]
sigma = -1
[grid]
paths = 50
horizon = 2
)");
    const fs::path out = fs::temp_directory_path() / "insurval_cli_bad";
    const RunResult r =
        run_cli("simulate --config " + cfg.string() + " --out " + out.string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("market.sigma") != std::string::npos);

    const fs::path cfg2 = write_config("bad_key.cfg", "[market]\nvol = 1\n");
    const RunResult r2 =
        run_cli("simulate --config " + cfg2.string() + " --out " + out.string());
    CHECK(r2.exit_code == 2);
    CHECK(r2.err.find("market.vol") != std::string::npos);

    const RunResult r3 = run_cli("simulate --config /missing.cfg --out " + out.string());
    CHECK(r3.exit_code == 2);

    const RunResult r4 = run_cli("simulate --nope");
    CHECK(r4.exit_code == 2);
    fs::remove_all(out);
}

TEST_CASE("value-one-period then report") {
    const fs::path cfg = write_config("e2.cfg", R"(
[scenario]
example = example2
[grid]
paths = 2000
seed = 8
[valuation]
coc_rate = 0.1
alpha = 0.99
tau = 0.998
)");
    const fs::path out = fs::temp_directory_path() / "insurval_cli_e2";
    const RunResult r = run_cli("value-one-period --config " + cfg.string() + " --out " +
                                out.string() + " --paths 1500");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("M=1500") != std::string::npos);
    CHECK(fs::exists(out / "table1.csv"));

    const RunResult rep = run_cli("report --out " + out.string());
    REQUIRE(rep.exit_code == 0);
    CHECK(rep.out.find("value-one-period") != std::string::npos);
    fs::remove_all(out);
}

TEST_CASE("value-dynamic on the gaussian example") {
    const fs::path cfg = write_config("e3.cfg", R"(
[scenario]
example = example3
[example3]
s0 = 100
horizon = 2
gamma = 10
corr = 0.5
kappa = 0.1
sigma_ret = 0.15
[valuation]
coc_rate = 0.06
alpha = 0.95
[regressor]
kind = linear
basis = 1 z2 z1^-1
)");
    const fs::path out = fs::temp_directory_path() / "insurval_cli_e3";
    const RunResult r = run_cli("value-dynamic --config " + cfg.string() + " --out " +
                                out.string() + " --paths 3000 --seed 4");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("rho0") != std::string::npos);
    CHECK(fs::exists(out / "fanchart.csv"));
    CHECK(fs::exists(out / "table2.csv"));
    CHECK(fs::exists(out / "rebal.csv"));
    CHECK(fs::exists(out / "strategy_t.csv"));
    CHECK(fs::exists(out / "final_loss.csv"));
    fs::remove_all(out);
}

TEST_SUITE_END();
