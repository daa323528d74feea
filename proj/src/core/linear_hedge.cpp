#include "linear_hedge.hpp"

#include "common.hpp"
#include "solvers.hpp"

namespace insurval {

namespace {

Eigen::VectorXd liability_vector(const Sample& liability, const AssetPanel& panel) {
    if (static_cast<Eigen::Index>(liability.size()) != panel.n_scenarios())
        throw validation_error("hedge: liability length differs from scenario count");
    return Eigen::Map<const Eigen::VectorXd>(liability.values().data(),
                                             static_cast<Eigen::Index>(liability.size()));
}

Eigen::VectorXd weight_vector(const Sample& liability) {
    if (liability.uniform()) return Eigen::VectorXd();
    Eigen::VectorXd w(static_cast<Eigen::Index>(liability.size()));
    for (std::size_t i = 0; i < liability.size(); ++i)
        w(static_cast<Eigen::Index>(i)) = liability.weight(i);
    return w;
}

} // namespace

HedgeStrategy ols_hedge(const Sample& liability, const AssetPanel& panel) {
    panel.validate();
    const Eigen::VectorXd s = liability_vector(liability, panel);
    const Eigen::VectorXd beta = solve_ols(panel.payoffs, s, weight_vector(liability));
    return make_strategy(beta, panel, LossSpec::quadratic());
}

HedgeStrategy quantile_hedge(const Sample& liability, const AssetPanel& panel, double alpha) {
    panel.validate();
    const Eigen::VectorXd s = liability_vector(liability, panel);
    const SolveResult r = solve_quantile(panel.payoffs, s, alpha, weight_vector(liability));
    if (!r.converged)
        throw nonconvergence_error("quantile_hedge: solver did not reach tolerance");
    HedgeStrategy h = make_strategy(r.beta, panel, LossSpec::koenker_bassett(alpha));
    h.converged = r.converged;
    h.flat_optimum = r.flat_optimum;
    return h;
}

HedgeStrategy expectile_hedge(const Sample& liability, const AssetPanel& panel, double tau) {
    panel.validate();
    const Eigen::VectorXd s = liability_vector(liability, panel);
    const SolveResult r = solve_expectile(panel.payoffs, s, tau, weight_vector(liability));
    HedgeStrategy h = make_strategy(r.beta, panel, LossSpec::expectile(tau));
    h.converged = r.converged;
    return h;
}

HedgeStrategy residual_hedge(const Sample& liability, const AssetPanel& panel,
                             const HedgeStrategy& base, const LossSpec& loss) {
    if (base.units.size() != panel.n_assets())
        throw validation_error("residual_hedge: base strategy does not match panel");
    const Sample resid = hedge_residuals(liability, panel, base);
    switch (loss.kind) {
    case LossKind::Quadratic: return ols_hedge(resid, panel);
    case LossKind::KoenkerBassett: return quantile_hedge(resid, panel, loss.level);
    case LossKind::Expectile: return expectile_hedge(resid, panel, loss.level);
    }
    throw validation_error("residual_hedge: unknown loss");
}

Sample hedge_residuals(const Sample& liability, const AssetPanel& panel,
                       const HedgeStrategy& strategy) {
    const Eigen::VectorXd s = liability_vector(liability, panel);
    const Eigen::VectorXd r = s - panel.payoffs * strategy.units;
    std::vector<double> rv(r.data(), r.data() + r.size());
    if (liability.uniform()) return Sample(std::move(rv));
    std::vector<double> w(liability.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = liability.weight(i);
    return Sample(std::move(rv), std::move(w));
}

} // namespace insurval
