#ifndef INSURVAL_GAUSSIAN_MODEL_HPP
#define INSURVAL_GAUSSIAN_MODEL_HPP

#include "dynamic_valuation.hpp"

namespace insurval {

// Two-asset multi-period model with i.i.d. risky returns and a liability
// developing as s0 + sum of zero-mean normal increments correlated with
// the returns. Zero interest rate; state features (Y1(t), L(t)) where
// L(t) is the liability developed up to t.
struct GaussianModelParams {
    double s0 = 100.0;
    int horizon_T = 3;
    double gamma = 10.0;    // sd of each liability increment
    double corr = 0.5;      // correlation between return and increment
    double kappa = 0.1;     // Sharpe ratio of the risky return
    double sigma_ret = 0.15;// sd of the risky return
    std::size_t n_paths = 100000;
    std::uint64_t seed = 1;

    void validate() const;
};

DynamicProblem build_gaussian_problem(const GaussianModelParams& params);

// Basis reproducing the conditional hedging strategies of this model:
// affine in the developed liability plus a reciprocal-price term.
std::vector<std::string> gaussian_model_basis();

} // namespace insurval

#endif // INSURVAL_GAUSSIAN_MODEL_HPP
