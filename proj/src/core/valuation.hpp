#ifndef INSURVAL_VALUATION_HPP
#define INSURVAL_VALUATION_HPP

#include "linear_hedge.hpp"

namespace insurval {

struct ValuationParams {
    double coc_rate = 0.1; // cost-of-capital rate i
    double alpha = 0.99;   // regulatory confidence level
    double tau = 0.998;    // expectile level for the mean-expectile valuation
    double r = 0.0;        // risk-free rate over the period

    void validate() const;
};

// Fair value split into the hedge cost borne by policyholders and the
// cost-of-capital margin on the residual strategy.
struct FairValue {
    double value = 0.0;
    double hedge_cost = 0.0;
    double capital_cost = 0.0;
    HedgeStrategy first_step;  // quadratic hedge
    HedgeStrategy second_step; // residual strategy (or risk-free buffer)

    // report row: method,value,hedge_cost,capital_cost
    std::string csv_row(const std::string& method) const;
};

// Cost-of-capital premium for claims independent of traded assets:
// e^{-r} E[S] + e^{-r} i (VaR_alpha(S) - E[S]).
double coc_premium(const Sample& liability, const ValuationParams& params);

// Quadratic-hedge valuation: hedge cost plus discounted cost of capital
// on the residual VaR.
FairValue phi_valuation(const Sample& liability, const AssetPanel& panel,
                        const ValuationParams& params);

// Two-step valuation: quadratic hedge cost plus i times the cost of the
// residual hedge under the second-step loss (KB or expectile).
FairValue two_step_valuation(const Sample& liability, const AssetPanel& panel,
                             const ValuationParams& params, const LossSpec& second_loss);

} // namespace insurval

#endif // INSURVAL_VALUATION_HPP
