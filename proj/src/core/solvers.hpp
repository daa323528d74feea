#ifndef INSURVAL_SOLVERS_HPP
#define INSURVAL_SOLVERS_HPP

#include <Eigen/Dense>

namespace insurval {

// Shared regression kernels behind the hedge operations and the linear
// regressors. X is the M x k design of end-of-period payoffs (or an
// expanded feature-payoff design); y is the liability/target vector;
// weights are optional probability weights (empty => uniform).

struct SolveResult {
    Eigen::VectorXd beta;
    bool converged = true;
    // KB optimum detected as non-unique; the minimum-norm optimizer was
    // returned
    bool flat_optimum = false;
    int iterations = 0;
    double objective = 0.0; // empirical mean loss at beta, unsmoothed
};

// Throws validation_error naming the offending column when the weighted
// Gram matrix has condition number above 1e12.
void check_non_redundant(const Eigen::MatrixXd& X, const Eigen::VectorXd& w);

// Exact normal-equations solve of min sum w_i (y_i - x_i.beta)^2.
Eigen::VectorXd solve_ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& w = Eigen::VectorXd());

// Quantile regression: min sum w_i l_alpha(y_i - x_i.beta).
// Smoothed-loss gradient descent (Barzilai-Borwein steps, decreasing
// smoothing eps), warm-started from OLS, then polished on exact-fit
// basic solutions drawn from the smallest residuals.
SolveResult solve_quantile(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double alpha,
                           const Eigen::VectorXd& w = Eigen::VectorXd());

// Expectile regression by iteratively reweighted least squares: weights
// tau on positive and 1-tau on nonpositive residuals, iterated to a
// fixed point (1e-8 relative change), with sign-pattern cycle detection.
SolveResult solve_expectile(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double tau,
                            const Eigen::VectorXd& w = Eigen::VectorXd());

} // namespace insurval

#endif // INSURVAL_SOLVERS_HPP
