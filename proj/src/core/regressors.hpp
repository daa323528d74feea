#ifndef INSURVAL_REGRESSORS_HPP
#define INSURVAL_REGRESSORS_HPP

#include "loss.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace insurval {

enum class RegressorKind { Linear, Mlp };

struct TrainingSpec {
    int epochs = 200;
    int batch_size = 1024;
    double step_size = 1e-3; // base Adam step, cosine-decayed over the run
    std::uint64_t seed = 0;
    int patience = 20; // early stop after this many epochs without improvement

    void validate() const;
};

struct RegressorSpec {
    RegressorKind kind = RegressorKind::Linear;
    // LINEAR: monomial terms on state variables, e.g. "1", "z1", "z1*z2",
    // "z2^2", "z1^-1" (indices are 1-based)
    std::vector<std::string> feature_basis = {"1"};
    // MLP: hidden layer sizes, ReLU activations, linear output
    std::vector<int> hidden = {10, 10, 10};
    TrainingSpec training;

    void validate() const;
};

// State-to-strategy training panel for one period.
struct StatePanel {
    Eigen::MatrixXd features;     // M x m state variables Z(t)
    Eigen::MatrixXd next_payoffs; // M x (n+1) asset values Y(t+1)
    Eigen::MatrixXd now_prices;   // M x (n+1) asset values Y(t), per path
    Eigen::VectorXd targets;      // M target values rho_{t+1}

    void validate() const;
};

// Plain feedforward net, ReLU hidden layers, linear output. Exposed for
// the gradient tests.
struct MlpModel {
    std::vector<Eigen::MatrixXd> W; // W[l]: rows = layer out, cols = layer in
    std::vector<Eigen::VectorXd> b;

    Eigen::Index input_dim() const { return W.front().cols(); }
    Eigen::Index output_dim() const { return W.back().rows(); }

    // batch forward: X is B x in, returns B x out
    Eigen::MatrixXd forward(const Eigen::MatrixXd& X) const;

    std::vector<double> flat_params() const;
    void set_flat_params(const std::vector<double>& p);

    // mean portfolio loss (1/B) sum l(t_i - out_i . y_i) and its analytic
    // parameter gradient, in flat_params() order
    double objective(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                     const Eigen::VectorXd& t, const LossSpec& loss) const;
    std::vector<double> objective_gradient(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                                           const Eigen::VectorXd& t, const LossSpec& loss) const;
};

struct TrainingTrace {
    double final_objective = 0.0; // unsmoothed objective of returned parameters
    int epochs_run = 0;
    bool converged = true;
    std::vector<std::string> warnings;
};

// Maps state features to strategy vectors. Fit once, immutable after.
class FittedRegressor {
public:
    // deterministic forward pass with stored normalization
    Eigen::VectorXd predict(const Eigen::VectorXd& state) const;
    Eigen::MatrixXd predict_all(const Eigen::MatrixXd& features) const;

    const TrainingTrace& trace() const { return trace_; }
    const RegressorSpec& spec() const { return spec_; }

    // versioned JSON parameter dump with spec echo
    std::string save_json() const;
    static FittedRegressor load_json(const std::string& text);

    // exact coordinate shift of the risk-free units, used by the
    // backward recursion to zero the residual statistic
    void shift_riskfree_units(double delta);

private:
    friend FittedRegressor fit_regressor(const RegressorSpec&, const StatePanel&,
                                         const LossSpec&, const FittedRegressor*);
    RegressorSpec spec_;
    // linear: strategy_k(z) = sum_j coeff_(j,k) phi_j(z)
    std::vector<std::string> basis_terms_; // surviving terms after degeneracy drop
    Eigen::MatrixXd lin_coeff_;            // q x (n+1)
    // mlp
    MlpModel net_;
    Eigen::VectorXd norm_mean_, norm_scale_; // per input feature
    TrainingTrace trace_;
    Eigen::Index n_outputs_ = 0;
};

// Minimizes (1/M) sum l(target_i - predict(features_i) . next_payoffs_i).
// LINEAR+quadratic solves the normal equations exactly; LINEAR with KB or
// expectile losses delegates to the hedge solvers on the expanded
// feature-payoff design; MLP trains by mini-batch Adam on the (smoothed)
// loss with He-style seeded init, input standardization, and the output
// bias warm-started at the best constant strategy.
//
// `warm_from` (MLP only): start from the given fitted network instead of
// a fresh init, with the risk-free bias re-centred for this loss. Used by
// the backward recursion to seed the quantile net from the quadratic one,
// whose optimum differs mainly by the residual buffer.
FittedRegressor fit_regressor(const RegressorSpec& spec, const StatePanel& panel,
                              const LossSpec& loss,
                              const FittedRegressor* warm_from = nullptr);

// Monomial basis evaluation (exposed for tests): one row per observation,
// one column per term.
Eigen::MatrixXd evaluate_basis(const std::vector<std::string>& terms,
                               const Eigen::MatrixXd& features);

} // namespace insurval

#endif // INSURVAL_REGRESSORS_HPP
