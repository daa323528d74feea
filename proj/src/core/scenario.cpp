#include "scenario.hpp"

#include "common.hpp"
#include "rng.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace insurval {

namespace {

// driver ids for the counter streams
constexpr std::uint64_t kDriverMortNormal = 0;
constexpr std::uint64_t kDriverEquityNormal = 1;
constexpr std::uint64_t kDriverDeathUniform = 2;

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw validation_error(std::string(name) + " must be finite");
}

} // namespace

void MarketParams::validate() const {
    require_finite(r, "market.r");
    require_finite(mu, "market.mu");
    require_finite(sigma, "market.sigma");
    require_finite(y1_0, "market.y1_0");
    require_finite(delta, "market.delta");
    if (!(sigma >= 0.0)) throw validation_error("market.sigma must be >= 0");
    if (!(delta >= -1.0 && delta <= 1.0))
        throw validation_error("market.delta must lie in [-1,1]");
    if (!(y1_0 > 0.0)) throw validation_error("market.y1_0 must be > 0");
}

void MortalityParams::validate() const {
    require_finite(lambda0, "mortality.lambda0");
    require_finite(c, "mortality.c");
    require_finite(eta_mort, "mortality.eta_mort");
    if (!(lambda0 > 0.0)) throw validation_error("mortality.lambda0 must be > 0");
    if (l_x < 1) throw validation_error("mortality.l_x must be >= 1");
    if (!(eta_mort >= 0.0)) throw validation_error("mortality.eta_mort must be >= 0");
}

void GridSpec::validate() const {
    if (horizon_T < 1) throw validation_error("grid.horizon_T must be >= 1");
    if (substeps < 1) throw validation_error("grid.substeps must be >= 1");
    if (n_paths < 2) throw validation_error("grid.n_paths must be >= 2");
}

ScenarioSet simulate_joint(const MarketParams& market, const MortalityParams& mort,
                           const GridSpec& grid, unsigned n_threads) {
    market.validate();
    mort.validate();
    grid.validate();

    const int T = grid.horizon_T;
    const int sub = grid.substeps;
    const std::size_t M = grid.n_paths;
    const double dt = 1.0 / sub;
    const double sqdt = std::sqrt(dt);

    const double growth = std::exp(mort.c * dt);
    const double lam_sd =
        mort.c != 0.0
            ? mort.eta_mort * std::sqrt((std::exp(2.0 * mort.c * dt) - 1.0) / (2.0 * mort.c))
            : mort.eta_mort * sqdt;
    const double drift = (market.mu - 0.5 * market.sigma * market.sigma) * dt;
    const double mix = std::sqrt(std::max(0.0, 1.0 - market.delta * market.delta));

    ScenarioSet out;
    out.market = market;
    out.mortality = mort;
    out.grid = grid;
    out.times.resize(static_cast<std::size_t>(T) + 1);
    out.riskfree_prices.resize(static_cast<std::size_t>(T) + 1);
    for (int t = 0; t <= T; ++t) {
        out.times[static_cast<std::size_t>(t)] = t;
        out.riskfree_prices[static_cast<std::size_t>(t)] = std::exp(market.r * t);
    }
    out.asset_prices.resize(static_cast<Eigen::Index>(M), T + 1);
    out.survivors.resize(static_cast<Eigen::Index>(M), T + 1);
    out.forces.resize(static_cast<Eigen::Index>(M), T + 1);

    parallel_for_chunks(M, n_threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            const auto row = static_cast<Eigen::Index>(p);
            double lam = mort.lambda0;
            double price = market.y1_0;
            long alive = mort.l_x;
            out.asset_prices(row, 0) = price;
            out.forces(row, 0) = lam;
            out.survivors(row, 0) = alive;
            for (int t = 0; t < T; ++t) {
                double year_integral = 0.0;
                for (int k = 0; k < sub; ++k) {
                    const std::uint64_t step = static_cast<std::uint64_t>(t) * sub + k;
                    const double z2 = rng::counter_normal(grid.seed, p, step, kDriverMortNormal);
                    const double x = rng::counter_normal(grid.seed, p, step, kDriverEquityNormal);
                    const double z1 = market.delta * z2 + mix * x;
                    const double lam_next = lam * growth + lam_sd * z2;
                    year_integral +=
                        0.5 * (std::max(lam, 0.0) + std::max(lam_next, 0.0)) * dt;
                    price *= std::exp(drift + market.sigma * sqdt * z1);
                    lam = lam_next;
                }
                double q = 1.0 - std::exp(-year_integral);
                q = std::min(1.0, std::max(0.0, q));
                const double u = rng::counter_uniform(grid.seed, p, static_cast<std::uint64_t>(t),
                                                      kDriverDeathUniform);
                const long deaths = rng::binomial_inverse(u, alive, q);
                alive -= deaths;
                out.asset_prices(row, t + 1) = price;
                out.forces(row, t + 1) = lam;
                out.survivors(row, t + 1) = alive;
            }
        }
    });
    return out;
}

LognormalBinomialSample one_period_lognormal_binomial(double meanlog, double sdlog, long n_pol,
                                                      double p_survive, std::size_t n_paths,
                                                      std::uint64_t seed) {
    require_finite(meanlog, "meanlog");
    if (!(sdlog > 0.0)) throw validation_error("sdlog must be > 0");
    if (!(p_survive >= 0.0 && p_survive <= 1.0))
        throw validation_error("p_survive must lie in [0,1]");
    if (n_pol < 0) throw validation_error("n_pol must be >= 0");
    if (n_paths < 2) throw validation_error("n_paths must be >= 2");

    LognormalBinomialSample s;
    s.survivors.resize(n_paths);
    s.prices.resize(n_paths);
    for (std::size_t i = 0; i < n_paths; ++i) {
        const double z = rng::counter_normal(seed, i, 0, kDriverEquityNormal);
        s.prices[i] = std::exp(meanlog + sdlog * z);
        const double u = rng::counter_uniform(seed, i, 0, kDriverDeathUniform);
        s.survivors[i] = rng::binomial_inverse(u, n_pol, p_survive);
    }
    return s;
}

RegArbSample regulatory_arbitrage_payoffs(std::size_t n_paths, std::uint64_t seed) {
    if (n_paths < 2) throw validation_error("n_paths must be >= 2");
    RegArbSample s;
    s.analytic_var = std::exp(0.1 + 0.3 * norm_quantile(0.9));
    s.liability.resize(n_paths);
    s.derivative_payoff.resize(n_paths);
    for (std::size_t i = 0; i < n_paths; ++i) {
        const double z = rng::counter_normal(seed, i, 0, kDriverEquityNormal);
        const double liab = std::exp(0.1 + 0.3 * z);
        s.liability[i] = liab;
        s.derivative_payoff[i] = liab <= s.analytic_var ? 1.5 : -3.0;
    }
    return s;
}

namespace {

std::string format_full(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

nlohmann::json params_json(const ScenarioSet& s) {
    return nlohmann::json{
        {"market",
         {{"r", s.market.r},
          {"mu", s.market.mu},
          {"sigma", s.market.sigma},
          {"y1_0", s.market.y1_0},
          {"delta", s.market.delta}}},
        {"mortality",
         {{"lambda0", s.mortality.lambda0},
          {"c", s.mortality.c},
          {"eta_mort", s.mortality.eta_mort},
          {"age_x", s.mortality.age_x},
          {"l_x", s.mortality.l_x}}},
        {"grid",
         {{"horizon_T", s.grid.horizon_T},
          {"substeps", s.grid.substeps},
          {"n_paths", s.grid.n_paths},
          {"seed", s.grid.seed}}}};
}

} // namespace

std::string export_scenarios_csv(const ScenarioSet& s, const std::string& csv_path) {
    std::ostringstream body;
    body << "path,time,y1,lambda,survivors\n";
    const int T = s.horizon();
    for (std::size_t p = 0; p < s.n_paths(); ++p) {
        const auto row = static_cast<Eigen::Index>(p);
        for (int t = 0; t <= T; ++t) {
            body << p << "," << t << "," << format_full(s.asset_prices(row, t)) << ","
                 << format_full(s.forces(row, t)) << "," << s.survivors(row, t) << "\n";
        }
    }
    const std::string text = body.str();
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw validation_error("cannot write " + csv_path);
    csv << text;
    csv.close();

    const std::string checksum = to_hex(fnv1a64(text.data(), text.size()));
    nlohmann::json meta = params_json(s);
    meta["checksum_fnv1a64"] = checksum;
    meta["format"] = "path,time,y1,lambda,survivors";
    std::ofstream side(csv_path + ".meta.json");
    if (!side) throw validation_error("cannot write " + csv_path + ".meta.json");
    side << meta.dump(2) << "\n";
    return checksum;
}

ScenarioSet import_scenarios_csv(const std::string& csv_path) {
    std::ifstream side(csv_path + ".meta.json");
    if (!side) throw validation_error("missing sidecar " + csv_path + ".meta.json");
    nlohmann::json meta;
    side >> meta;

    ScenarioSet s;
    const auto& m = meta.at("market");
    s.market = {m.at("r"), m.at("mu"), m.at("sigma"), m.at("y1_0"), m.at("delta")};
    const auto& mo = meta.at("mortality");
    s.mortality = {mo.at("lambda0"), mo.at("c"), mo.at("eta_mort"), mo.at("age_x"), mo.at("l_x")};
    const auto& g = meta.at("grid");
    s.grid = {g.at("horizon_T"), g.at("substeps"), g.at("n_paths"), g.at("seed")};

    const int T = s.grid.horizon_T;
    const auto M = static_cast<Eigen::Index>(s.grid.n_paths);
    s.times.resize(static_cast<std::size_t>(T) + 1);
    s.riskfree_prices.resize(static_cast<std::size_t>(T) + 1);
    for (int t = 0; t <= T; ++t) {
        s.times[static_cast<std::size_t>(t)] = t;
        s.riskfree_prices[static_cast<std::size_t>(t)] = std::exp(s.market.r * t);
    }
    s.asset_prices.resize(M, T + 1);
    s.forces.resize(M, T + 1);
    s.survivors.resize(M, T + 1);

    std::ifstream csv(csv_path);
    if (!csv) throw validation_error("cannot read " + csv_path);
    std::string line;
    std::getline(csv, line);
    if (line != "path,time,y1,lambda,survivors")
        throw validation_error("unexpected scenario CSV header: " + line);
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        std::getline(ls, tok, ',');
        const auto p = static_cast<Eigen::Index>(std::stoull(tok));
        std::getline(ls, tok, ',');
        const int t = std::stoi(tok);
        if (p < 0 || p >= M || t < 0 || t > T)
            throw validation_error("scenario CSV row out of range: " + line);
        std::getline(ls, tok, ',');
        s.asset_prices(p, t) = std::stod(tok);
        std::getline(ls, tok, ',');
        s.forces(p, t) = std::stod(tok);
        std::getline(ls, tok, ',');
        s.survivors(p, t) = std::stol(tok);
    }
    return s;
}

} // namespace insurval
