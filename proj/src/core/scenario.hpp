#ifndef INSURVAL_SCENARIO_HPP
#define INSURVAL_SCENARIO_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace insurval {

struct MarketParams {
    double r = 0.01;     // risk-free rate, per year, continuously compounded
    double mu = 0.02;    // equity drift, per year
    double sigma = 0.1;  // equity volatility, per sqrt-year
    double y1_0 = 1.0;   // initial risky-asset price
    double delta = 0.0;  // correlation between equity and mortality drivers

    void validate() const;
};

struct MortalityParams {
    double lambda0 = 0.0087; // initial force of mortality, per year
    double c = 0.075;        // drift coefficient, per year
    double eta_mort = 0.0;   // volatility of the force of mortality
    int age_x = 55;          // initial age
    long l_x = 1000;         // initial number of policyholders

    void validate() const;
};

struct GridSpec {
    int horizon_T = 1;       // annual periods
    int substeps = 12;       // sub-intervals per year for integrating lambda
    std::size_t n_paths = 2; // M
    std::uint64_t seed = 1;

    void validate() const;
};

// Simulated joint paths of the risk drivers on the annual grid.
// Row = path, column = time index 0..T.
struct ScenarioSet {
    std::vector<double> times;                    // length T+1, years
    Eigen::MatrixXd asset_prices;                 // paths x (T+1), column 0 = y1_0
    std::vector<double> riskfree_prices;          // e^{r t}
    Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic> survivors; // integer counts
    Eigen::MatrixXd forces;                       // raw (unclamped) lambda paths

    MarketParams market;
    MortalityParams mortality;
    GridSpec grid;

    std::size_t n_paths() const { return static_cast<std::size_t>(asset_prices.rows()); }
    int horizon() const { return static_cast<int>(times.size()) - 1; }
};

// Joint equity / mortality / survivor simulation. The equity step is the
// exact lognormal sub-step, lambda uses its exact Gaussian transition, the
// equity shock is delta * (lambda driver) + sqrt(1-delta^2) * independent
// normal, survival integrates max(lambda,0) by the trapezoidal rule, and
// deaths are Binomial(N(t), q) by inverse transform. All draws come from
// counter-based streams keyed by (seed, path, step, driver), so output is
// identical for any worker count.
ScenarioSet simulate_joint(const MarketParams& market, const MortalityParams& mort,
                           const GridSpec& grid, unsigned n_threads = 0);

// One-period sample of independent survivor counts and asset prices:
// N ~ Bin(n_pol, p_survive), Y1 ~ LN(meanlog, sdlog^2).
struct LognormalBinomialSample {
    std::vector<long> survivors;
    std::vector<double> prices;
};
LognormalBinomialSample one_period_lognormal_binomial(double meanlog, double sdlog, long n_pol,
                                                      double p_survive, std::size_t n_paths,
                                                      std::uint64_t seed);

// One-period regulatory-arbitrage sample: S ~ LN(0.1, 0.3^2) and a
// derivative paying 1.5 when S <= VaR_0.9(S) (analytic) and -3 otherwise.
struct RegArbSample {
    std::vector<double> liability;
    std::vector<double> derivative_payoff;
    double analytic_var = 0.0;
};
RegArbSample regulatory_arbitrage_payoffs(std::size_t n_paths, std::uint64_t seed);

// CSV export (header path,time,y1,lambda,survivors) with a JSON sidecar
// `<path>.meta.json` carrying the parameters, seed and checksum of the
// CSV body. Returns the checksum hex string.
std::string export_scenarios_csv(const ScenarioSet& s, const std::string& csv_path);
ScenarioSet import_scenarios_csv(const std::string& csv_path);

} // namespace insurval

#endif // INSURVAL_SCENARIO_HPP
