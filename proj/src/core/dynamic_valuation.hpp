#ifndef INSURVAL_DYNAMIC_VALUATION_HPP
#define INSURVAL_DYNAMIC_VALUATION_HPP

#include "regressors.hpp"
#include "scenario.hpp"
#include "valuation.hpp"

namespace insurval {

// Inputs of the backward recursion, generic over the scenario source:
// per-time state features, per-time asset prices, terminal liability.
struct DynamicProblem {
    std::vector<Eigen::MatrixXd> features; // t = 0..T-1, each M x m
    std::vector<Eigen::MatrixXd> prices;   // t = 0..T, each M x (n+1), col 0 risk-free
    Eigen::VectorXd liability;             // at T, length M
    double r = 0.0;

    int horizon() const { return static_cast<int>(prices.size()) - 1; }
    Eigen::Index n_paths() const { return liability.size(); }
    void validate() const;
};

// features (Y1(t), N(t)); prices (e^{rt}, Y1(t))
DynamicProblem problem_from_scenarios(const ScenarioSet& scenarios,
                                      const Eigen::VectorXd& liability);

// terminal payoff N(T) * max(Y1(T), K)
Eigen::VectorXd equity_linked_liability(const ScenarioSet& scenarios, double guarantee);

struct PeriodDiagnostics {
    int period = 0; // residuals of the fit over [period-1, period)
    double var = 0.0;
    double kb_error = 0.0;
    double dtvar = 0.0;
};

struct ValuationPath {
    Eigen::MatrixXd fair_values;              // M x (T+1); column T = liability
    std::vector<Eigen::MatrixXd> theta_units; // index t: g_{t+1}(Z(t)), M x (n+1)
    std::vector<Eigen::MatrixXd> xi_units;    // index t: h_{t+1}(Z(t)), M x (n+1)
    Eigen::MatrixXd residuals;                // M x T; col t: rho_{t+1} - xi(t+1).Y(t+1)
    std::vector<FittedRegressor> quad_fits;   // g_{t+1}, index t
    std::vector<FittedRegressor> quant_fits;  // h_{t+1}, index t
    double rho0 = 0.0;
    double expected_liability = 0.0;
    Eigen::VectorXd theta0, xi0; // collapsed time-0 strategies
    bool time0_spread_warning = false;
    double coc_rate = 0.0;

    int horizon() const { return static_cast<int>(fair_values.cols()) - 1; }
};

// Backward resolution of the dynamic fair valuation: per period fit the
// quadratic regressor g on the next fair value and the quantile regressor
// h on the same target, take eta = h - g, and roll back
// rho_t = theta(t+1).Y(t) + i * eta(t+1).Y(t) pathwise. Per-period
// training seeds derive from (seed, period), so a recursion started from
// stored intermediate targets refits identically.
ValuationPath backward_valuate(const DynamicProblem& problem, const ValuationParams& params,
                               const RegressorSpec& regressor);
ValuationPath backward_valuate(const ScenarioSet& scenarios, const Eigen::VectorXd& liability,
                               const ValuationParams& params, const RegressorSpec& regressor);

// Rebalancing costs RB(t) = xi(t+1).Y(t) - xi(t).Y(t) for t=1..T-1, their
// e^{-rt}-discounted per-path total, and the empirical coverage of the
// funding identity P(eta(t+1).Y(t)(1-i) >= RB(t)).
struct RebalReport {
    Eigen::MatrixXd per_period;       // M x (T-1)
    Eigen::VectorXd total_discounted; // M
    std::vector<double> funding_coverage;
};
RebalReport rebalancing_costs(const ValuationPath& path, const DynamicProblem& problem,
                              double r);

// Pooled per-period residual diagnostics: VaR_alpha, mean KB error, dTVaR.
std::vector<PeriodDiagnostics> constraint_report(const ValuationPath& path, double alpha);

// Same diagnostics bucketed on the first state feature (equal-count
// buckets), as a conditional check.
struct BucketDiagnostics {
    int period = 0;
    int bucket = 0;
    double feature_lo = 0.0, feature_hi = 0.0;
    double var = 0.0;
};
std::vector<BucketDiagnostics> bucketed_constraint_report(const ValuationPath& path,
                                                          const DynamicProblem& problem,
                                                          double alpha, int buckets = 10);

} // namespace insurval

#endif // INSURVAL_DYNAMIC_VALUATION_HPP
