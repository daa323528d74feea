#include "config.hpp"

#include "common.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace insurval {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& v, const std::string& where) {
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &used);
    } catch (const std::exception&) {
        throw validation_error("config: bad number for " + where + ": '" + v + "'");
    }
    if (used != v.size())
        throw validation_error("config: bad number for " + where + ": '" + v + "'");
    return out;
}

long long parse_int(const std::string& v, const std::string& where) {
    std::size_t used = 0;
    long long out = 0;
    try {
        out = std::stoll(v, &used);
    } catch (const std::exception&) {
        throw validation_error("config: bad integer for " + where + ": '" + v + "'");
    }
    if (used != v.size())
        throw validation_error("config: bad integer for " + where + ": '" + v + "'");
    return out;
}

std::uint64_t parse_u64(const std::string& v, const std::string& where) {
    std::size_t used = 0;
    unsigned long long out = 0;
    try {
        out = std::stoull(v, &used);
    } catch (const std::exception&) {
        throw validation_error("config: bad integer for " + where + ": '" + v + "'");
    }
    if (used != v.size())
        throw validation_error("config: bad integer for " + where + ": '" + v + "'");
    return out;
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : v) {
        if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

} // namespace

RunConfig RunConfig::parse_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;

    const std::set<std::string> sections = {"scenario", "market",   "mortality",
                                            "grid",     "example2", "example3",
                                            "valuation", "regressor", "output"};

    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw validation_error("config line " + std::to_string(lineno) +
                                       ": malformed section header");
            section = trim(t.substr(1, t.size() - 2));
            if (!sections.count(section))
                throw validation_error("config: unknown section [" + section + "]");
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw validation_error("config line " + std::to_string(lineno) +
                                   ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string val = trim(t.substr(eq + 1));
        if (section.empty())
            throw validation_error("config: key '" + key + "' outside any section");
        const std::string where = section + "." + key;

        if (section == "scenario") {
            if (key == "example") {
                static const std::set<std::string> known = {"example1", "example2", "example3",
                                                            "section5"};
                if (!known.count(val))
                    throw validation_error("config: unknown example selector '" + val + "'");
                cfg.example = val;
            } else if (key == "guarantee") {
                cfg.guarantee = parse_double(val, where);
            } else {
                throw validation_error("config: unknown key " + where);
            }
        } else if (section == "market") {
            if (key == "r") cfg.market.r = parse_double(val, where);
            else if (key == "mu") cfg.market.mu = parse_double(val, where);
            else if (key == "sigma") cfg.market.sigma = parse_double(val, where);
            else if (key == "y1_0") cfg.market.y1_0 = parse_double(val, where);
            else if (key == "delta") cfg.market.delta = parse_double(val, where);
            else throw validation_error("config: unknown key " + where);
        } else if (section == "mortality") {
            if (key == "lambda0") cfg.mortality.lambda0 = parse_double(val, where);
            else if (key == "c") cfg.mortality.c = parse_double(val, where);
            else if (key == "eta_mort") cfg.mortality.eta_mort = parse_double(val, where);
            else if (key == "age_x") cfg.mortality.age_x = static_cast<int>(parse_int(val, where));
            else if (key == "l_x") cfg.mortality.l_x = static_cast<long>(parse_int(val, where));
            else throw validation_error("config: unknown key " + where);
        } else if (section == "grid") {
            if (key == "horizon") cfg.grid.horizon_T = static_cast<int>(parse_int(val, where));
            else if (key == "substeps") cfg.grid.substeps = static_cast<int>(parse_int(val, where));
            else if (key == "paths") cfg.grid.n_paths = static_cast<std::size_t>(parse_u64(val, where));
            else if (key == "seed") cfg.grid.seed = parse_u64(val, where);
            else throw validation_error("config: unknown key " + where);
        } else if (section == "example2") {
            if (key == "meanlog") cfg.e2_meanlog = parse_double(val, where);
            else if (key == "sdlog") cfg.e2_sdlog = parse_double(val, where);
            else if (key == "n_pol") cfg.e2_npol = static_cast<long>(parse_int(val, where));
            else if (key == "p_survive") cfg.e2_psurvive = parse_double(val, where);
            else throw validation_error("config: unknown key " + where);
        } else if (section == "example3") {
            if (key == "s0") cfg.gaussian.s0 = parse_double(val, where);
            else if (key == "horizon") cfg.gaussian.horizon_T = static_cast<int>(parse_int(val, where));
            else if (key == "gamma") cfg.gaussian.gamma = parse_double(val, where);
            else if (key == "corr") cfg.gaussian.corr = parse_double(val, where);
            else if (key == "kappa") cfg.gaussian.kappa = parse_double(val, where);
            else if (key == "sigma_ret") cfg.gaussian.sigma_ret = parse_double(val, where);
            else throw validation_error("config: unknown key " + where);
        } else if (section == "valuation") {
            if (key == "coc_rate") cfg.valuation.coc_rate = parse_double(val, where);
            else if (key == "alpha") cfg.valuation.alpha = parse_double(val, where);
            else if (key == "tau") cfg.valuation.tau = parse_double(val, where);
            else if (key == "second_loss") {
                if (val == "kb") cfg.second_loss.kind = LossKind::KoenkerBassett;
                else if (val == "expectile") cfg.second_loss.kind = LossKind::Expectile;
                else throw validation_error("config: valuation.second_loss must be kb or expectile");
            } else {
                throw validation_error("config: unknown key " + where);
            }
        } else if (section == "regressor") {
            if (key == "kind") {
                if (val == "linear") cfg.regressor.kind = RegressorKind::Linear;
                else if (val == "mlp") cfg.regressor.kind = RegressorKind::Mlp;
                else throw validation_error("config: regressor.kind must be linear or mlp");
            } else if (key == "basis") {
                cfg.regressor.feature_basis = split_list(val);
            } else if (key == "hidden") {
                cfg.regressor.hidden.clear();
                for (const auto& h : split_list(val))
                    cfg.regressor.hidden.push_back(static_cast<int>(parse_int(h, where)));
            } else if (key == "epochs") {
                cfg.regressor.training.epochs = static_cast<int>(parse_int(val, where));
            } else if (key == "batch") {
                cfg.regressor.training.batch_size = static_cast<int>(parse_int(val, where));
            } else if (key == "step_size") {
                cfg.regressor.training.step_size = parse_double(val, where);
            } else if (key == "seed") {
                cfg.regressor.training.seed = parse_u64(val, where);
            } else if (key == "patience") {
                cfg.regressor.training.patience = static_cast<int>(parse_int(val, where));
            } else {
                throw validation_error("config: unknown key " + where);
            }
        } else if (section == "output") {
            if (key == "dir") cfg.out_dir = val;
            else throw validation_error("config: unknown key " + where);
        }
    }

    // the second-step loss levels follow the valuation block
    if (cfg.second_loss.kind == LossKind::KoenkerBassett)
        cfg.second_loss.level = cfg.valuation.alpha;
    else
        cfg.second_loss.level = cfg.valuation.tau;
    return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str());
}

} // namespace insurval
