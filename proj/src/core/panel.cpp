#include "panel.hpp"

#include "common.hpp"
#include "solvers.hpp"

#include <cmath>
#include <sstream>

namespace insurval {

void AssetPanel::validate() const {
    if (prices_now.size() == 0) throw validation_error("AssetPanel: no assets");
    if (payoffs.cols() != prices_now.size())
        throw validation_error("AssetPanel: payoff columns differ from price count");
    if (payoffs.rows() <= payoffs.cols())
        throw validation_error("AssetPanel: need more scenarios than assets");
    if (!payoffs.allFinite() || !prices_now.allFinite())
        throw validation_error("AssetPanel: non-finite entries");
    check_non_redundant(payoffs, Eigen::VectorXd());
}

std::string HedgeStrategy::to_csv() const {
    std::ostringstream os;
    os.precision(12);
    os << "asset_index,units\n";
    for (Eigen::Index i = 0; i < units.size(); ++i) os << i << "," << units(i) << "\n";
    os << "# loss=" << loss_spec.name() << " level=" << loss_spec.level << " cost=" << cost
       << " converged=" << (converged ? 1 : 0) << " flat=" << (flat_optimum ? 1 : 0) << "\n";
    return os.str();
}

HedgeStrategy make_strategy(const Eigen::VectorXd& units, const AssetPanel& panel,
                            const LossSpec& loss) {
    HedgeStrategy s;
    s.units = units;
    s.cost = units.dot(panel.prices_now);
    s.loss_spec = loss;
    return s;
}

} // namespace insurval
