#ifndef INSURVAL_PANEL_HPP
#define INSURVAL_PANEL_HPP

#include "loss.hpp"

#include <Eigen/Dense>

#include <string>

namespace insurval {

// One-period market: current prices y (component 0 is the risk-free
// asset, typically priced 1) and the M x (n+1) matrix of end-of-period
// payoffs Y (column 0 constant e^r).
struct AssetPanel {
    Eigen::VectorXd prices_now;
    Eigen::MatrixXd payoffs;

    Eigen::Index n_assets() const { return prices_now.size(); } // includes risk-free
    Eigen::Index n_scenarios() const { return payoffs.rows(); }

    // shape and non-redundancy invariants
    void validate() const;
};

// Asset units per traded asset for one period, with the cost at current
// prices. `loss_spec` records the objective it minimizes.
struct HedgeStrategy {
    Eigen::VectorXd units;
    double cost = 0.0;
    LossSpec loss_spec;
    bool converged = true;
    bool flat_optimum = false;

    double payoff(const Eigen::VectorXd& end_prices) const { return units.dot(end_prices); }

    // serialization row: asset_index,units per line plus a metadata line
    std::string to_csv() const;
};

HedgeStrategy make_strategy(const Eigen::VectorXd& units, const AssetPanel& panel,
                            const LossSpec& loss);

} // namespace insurval

#endif // INSURVAL_PANEL_HPP
