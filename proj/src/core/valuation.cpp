#include "valuation.hpp"

#include "common.hpp"
#include "risk_measures.hpp"

#include <cmath>
#include <sstream>

namespace insurval {

void ValuationParams::validate() const {
    if (!(coc_rate > 0.0 && coc_rate < 1.0))
        throw validation_error("valuation.coc_rate must lie in (0,1)");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw validation_error("valuation.alpha must lie in (0,1)");
    if (!(tau > 0.0 && tau < 1.0)) throw validation_error("valuation.tau must lie in (0,1)");
    if (!std::isfinite(r)) throw validation_error("valuation.r must be finite");
}

std::string FairValue::csv_row(const std::string& method) const {
    std::ostringstream os;
    os.precision(12);
    os << method << "," << value << "," << hedge_cost << "," << capital_cost;
    return os.str();
}

double coc_premium(const Sample& liability, const ValuationParams& params) {
    params.validate();
    const double disc = std::exp(-params.r);
    const double mean = liability.mean();
    const double q = var(liability, params.alpha);
    return disc * mean + disc * params.coc_rate * (q - mean);
}

FairValue phi_valuation(const Sample& liability, const AssetPanel& panel,
                        const ValuationParams& params) {
    params.validate();
    FairValue fv;
    fv.first_step = ols_hedge(liability, panel);
    const Sample resid = hedge_residuals(liability, panel, fv.first_step);
    const double resid_var = var(resid, params.alpha);
    const double disc = std::exp(-params.r);

    // buffer strategy: invest the residual VaR risk-free
    Eigen::VectorXd buffer = Eigen::VectorXd::Zero(panel.n_assets());
    buffer(0) = disc * resid_var;
    fv.second_step = make_strategy(buffer, panel, LossSpec::quadratic());

    fv.hedge_cost = fv.first_step.cost;
    fv.capital_cost = params.coc_rate * disc * resid_var;
    fv.value = fv.hedge_cost + fv.capital_cost;
    return fv;
}

FairValue two_step_valuation(const Sample& liability, const AssetPanel& panel,
                             const ValuationParams& params, const LossSpec& second_loss) {
    params.validate();
    if (second_loss.kind == LossKind::Quadratic)
        throw validation_error("two_step_valuation: second loss must be KB or expectile");
    FairValue fv;
    fv.first_step = ols_hedge(liability, panel);
    fv.second_step = residual_hedge(liability, panel, fv.first_step, second_loss);
    fv.hedge_cost = fv.first_step.cost;
    fv.capital_cost = params.coc_rate * fv.second_step.cost;
    fv.value = fv.hedge_cost + fv.capital_cost;
    return fv;
}

} // namespace insurval
