// insurval CLI: drives the scenario / hedge / valuation pipelines through
// the shared-library C API. Exit codes: 0 ok, 2 config error,
// 3 numerical nonconvergence.
#include <insurval.h>

#include <CLI11.hpp>

#include <cstdio>
#include <string>

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    unsigned long long seed = 0;
    bool seed_set = false;
    unsigned long long paths = 0;
    bool paths_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required) {
    auto* c = cmd->add_option("--config", opts.config_path, "run configuration file");
    if (config_required) c->required();
    cmd->add_option("--out", opts.out_dir, "output directory (overrides config)");
    cmd->add_option("--seed", opts.seed, "random seed (overrides config)")
        ->each([&opts](const std::string&) { opts.seed_set = true; });
    cmd->add_option("--paths", opts.paths, "number of Monte Carlo paths (overrides config)")
        ->each([&opts](const std::string&) { opts.paths_set = true; });
}

int fail(int code) {
    std::fprintf(stderr, "error: %s\n", iv_last_error());
    return code;
}

int run_command(const CommonOpts& opts, int (*runner)(const iv_config*, char**)) {
    iv_config* cfg = nullptr;
    int rc = iv_config_load(opts.config_path.c_str(), &cfg);
    if (rc != IV_OK) return fail(rc);
    if (!opts.out_dir.empty()) iv_config_set_output_dir(cfg, opts.out_dir.c_str());
    if (opts.seed_set) iv_config_set_seed(cfg, opts.seed);
    if (opts.paths_set) iv_config_set_paths(cfg, opts.paths);

    char* summary = nullptr;
    rc = runner(cfg, &summary);
    iv_config_free(cfg);
    if (rc != IV_OK) return fail(rc);
    std::fputs(summary, stdout);
    iv_string_free(summary);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"insurval — simulation and two-step hedging valuation engine"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(iv_version()));

    CommonOpts sim_opts, one_opts, dyn_opts, rep_opts;
    auto* sim = app.add_subcommand("simulate", "generate and export scenario paths");
    add_common(sim, sim_opts, true);
    auto* one = app.add_subcommand("value-one-period", "one-period hedges and fair values");
    add_common(one, one_opts, true);
    auto* dyn = app.add_subcommand("value-dynamic", "multi-period backward valuation");
    add_common(dyn, dyn_opts, true);
    auto* rep = app.add_subcommand("report", "print the summary of a previous run");
    rep->add_option("--out", rep_opts.out_dir, "output directory of the run")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (sim->parsed()) return run_command(sim_opts, &iv_run_simulate);
    if (one->parsed()) return run_command(one_opts, &iv_run_value_one_period);
    if (dyn->parsed()) return run_command(dyn_opts, &iv_run_value_dynamic);
    if (rep->parsed()) {
        char* text = nullptr;
        const int rc = iv_report(rep_opts.out_dir.c_str(), &text);
        if (rc != IV_OK) return fail(rc);
        std::fputs(text, stdout);
        iv_string_free(text);
        return 0;
    }
    return 2;
}
