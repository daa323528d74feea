#include "insurval.h"

#include "config.hpp"
#include "common.hpp"
#include "pipeline.hpp"
#include "risk_measures.hpp"

#include <cstdlib>
#include <cstring>
#include <string>

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

// unified exception-to-status mapping
template <typename Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return IV_OK;
    } catch (const insurval::nonconvergence_error& e) {
        set_error(e.what());
        return IV_ERR_NONCONVERGENCE;
    } catch (const insurval::validation_error& e) {
        set_error(e.what());
        return IV_ERR_CONFIG;
    } catch (const std::exception& e) {
        set_error(e.what());
        return IV_ERR_CONFIG;
    }
}

int run_statistic(const double* values, size_t n, double level, double* out,
                  double (*stat)(const insurval::Sample&, double)) {
    if (!values || !out || n == 0) {
        set_error("null pointer or empty array");
        return IV_ERR_INVALID;
    }
    return guarded([&] {
        const insurval::Sample s(std::vector<double>(values, values + n));
        *out = stat(s, level);
    });
}

} // namespace

extern "C" {

struct iv_config {
    insurval::RunConfig rep;
};

const char* iv_version(void) { return "insurval 1.0.0"; }

const char* iv_last_error(void) { return g_last_error.c_str(); }

int iv_config_load(const char* path, iv_config** out) {
    if (!path || !out) {
        set_error("null pointer");
        return IV_ERR_INVALID;
    }
    *out = nullptr;
    return guarded([&] { *out = new iv_config{insurval::RunConfig::parse_file(path)}; });
}

int iv_config_parse(const char* text, iv_config** out) {
    if (!text || !out) {
        set_error("null pointer");
        return IV_ERR_INVALID;
    }
    *out = nullptr;
    return guarded([&] { *out = new iv_config{insurval::RunConfig::parse_text(text)}; });
}

int iv_config_set_seed(iv_config* cfg, unsigned long long seed) {
    if (!cfg) {
        set_error("null config");
        return IV_ERR_INVALID;
    }
    cfg->rep.grid.seed = seed;
    cfg->rep.gaussian.seed = seed;
    return IV_OK;
}

int iv_config_set_paths(iv_config* cfg, unsigned long long n_paths) {
    if (!cfg) {
        set_error("null config");
        return IV_ERR_INVALID;
    }
    cfg->rep.grid.n_paths = static_cast<std::size_t>(n_paths);
    cfg->rep.gaussian.n_paths = static_cast<std::size_t>(n_paths);
    return IV_OK;
}

int iv_config_set_output_dir(iv_config* cfg, const char* dir) {
    if (!cfg || !dir) {
        set_error("null pointer");
        return IV_ERR_INVALID;
    }
    cfg->rep.out_dir = dir;
    return IV_OK;
}

void iv_config_free(iv_config* cfg) { delete cfg; }

int iv_run_simulate(const iv_config* cfg, char** summary) {
    if (!cfg || !summary) {
        set_error("null pointer");
        return IV_ERR_INVALID;
    }
    return guarded([&] { *summary = dup_string(insurval::cmd_simulate(cfg->rep)); });
}

int iv_run_value_one_period(const iv_config* cfg, char** summary) {
    if (!cfg || !summary) {
        set_error("null pointer");
        return IV_ERR_INVALID;
    }
    return guarded([&] { *summary = dup_string(insurval::cmd_value_one_period(cfg->rep)); });
}

int iv_run_value_dynamic(const iv_config* cfg, char** summary) {
    if (!cfg || !summary) {
        set_error("null pointer");
        return IV_ERR_INVALID;
    }
    return guarded([&] { *summary = dup_string(insurval::cmd_value_dynamic(cfg->rep)); });
}

int iv_report(const char* out_dir, char** text) {
    if (!out_dir || !text) {
        set_error("null pointer");
        return IV_ERR_INVALID;
    }
    return guarded([&] { *text = dup_string(insurval::cmd_report(out_dir)); });
}

void iv_string_free(char* s) { std::free(s); }

int iv_var(const double* values, size_t n, double alpha, double* out) {
    return run_statistic(values, n, alpha, out, &insurval::var);
}

int iv_tvar(const double* values, size_t n, double alpha, double* out) {
    return run_statistic(values, n, alpha, out, &insurval::tvar);
}

int iv_dtvar(const double* values, size_t n, double alpha, double* out) {
    return run_statistic(values, n, alpha, out, &insurval::dtvar);
}

int iv_expectile(const double* values, size_t n, double tau, double* out) {
    return run_statistic(values, n, tau, out, &insurval::expectile);
}

int iv_kb_error(const double* values, size_t n, double alpha, double* out) {
    return run_statistic(values, n, alpha, out, &insurval::kb_error);
}

} // extern "C"
