#include "dynamic_valuation.hpp"

#include "common.hpp"
#include "risk_measures.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace insurval {

void DynamicProblem::validate() const {
    if (prices.size() < 2) throw validation_error("DynamicProblem: need at least one period");
    if (features.size() + 1 != prices.size())
        throw validation_error("DynamicProblem: feature blocks must cover t=0..T-1");
    const Eigen::Index M = liability.size();
    if (M < 2) throw validation_error("DynamicProblem: need at least two paths");
    for (const auto& p : prices)
        if (p.rows() != M) throw validation_error("DynamicProblem: price row count mismatch");
    for (const auto& f : features)
        if (f.rows() != M) throw validation_error("DynamicProblem: feature row count mismatch");
    if (!liability.allFinite()) throw validation_error("DynamicProblem: non-finite liability");
}

DynamicProblem problem_from_scenarios(const ScenarioSet& scenarios,
                                      const Eigen::VectorXd& liability) {
    const auto M = static_cast<Eigen::Index>(scenarios.n_paths());
    const int T = scenarios.horizon();
    if (liability.size() != M)
        throw validation_error("problem_from_scenarios: liability length mismatch");
    DynamicProblem p;
    p.r = scenarios.market.r;
    p.liability = liability;
    p.prices.reserve(static_cast<std::size_t>(T) + 1);
    p.features.reserve(static_cast<std::size_t>(T));
    for (int t = 0; t <= T; ++t) {
        Eigen::MatrixXd prices(M, 2);
        prices.col(0).setConstant(scenarios.riskfree_prices[static_cast<std::size_t>(t)]);
        prices.col(1) = scenarios.asset_prices.col(t);
        p.prices.push_back(std::move(prices));
        if (t < T) {
            Eigen::MatrixXd f(M, 2);
            f.col(0) = scenarios.asset_prices.col(t);
            f.col(1) = scenarios.survivors.col(t).cast<double>();
            p.features.push_back(std::move(f));
        }
    }
    return p;
}

Eigen::VectorXd equity_linked_liability(const ScenarioSet& scenarios, double guarantee) {
    const auto M = static_cast<Eigen::Index>(scenarios.n_paths());
    const int T = scenarios.horizon();
    Eigen::VectorXd s(M);
    for (Eigen::Index i = 0; i < M; ++i)
        s(i) = static_cast<double>(scenarios.survivors(i, T)) *
               std::max(scenarios.asset_prices(i, T), guarantee);
    return s;
}

namespace {

Sample to_sample(const Eigen::VectorXd& v) {
    return Sample(std::vector<double>(v.data(), v.data() + v.size()));
}

} // namespace

ValuationPath backward_valuate(const DynamicProblem& problem, const ValuationParams& params,
                               const RegressorSpec& regressor) {
    problem.validate();
    params.validate();
    regressor.validate();

    const int T = problem.horizon();
    const Eigen::Index M = problem.n_paths();
    const Eigen::Index n1 = problem.prices.front().cols();

    ValuationPath path;
    path.coc_rate = params.coc_rate;
    path.fair_values.resize(M, T + 1);
    path.fair_values.col(T) = problem.liability;
    path.residuals.resize(M, T);
    path.theta_units.assign(static_cast<std::size_t>(T), Eigen::MatrixXd());
    path.xi_units.assign(static_cast<std::size_t>(T), Eigen::MatrixXd());
    path.quad_fits.resize(static_cast<std::size_t>(T));
    path.quant_fits.resize(static_cast<std::size_t>(T));
    path.expected_liability = problem.liability.mean();

    Eigen::VectorXd targets = problem.liability;
    for (int t = T - 1; t >= 0; --t) {
        StatePanel panel;
        panel.features = problem.features[static_cast<std::size_t>(t)];
        panel.next_payoffs = problem.prices[static_cast<std::size_t>(t + 1)];
        panel.now_prices = problem.prices[static_cast<std::size_t>(t)];
        panel.targets = targets;

        // per-period seeds keyed by the absolute period index, so a
        // recursion restarted from stored rho_{t+1} refits bitwise
        RegressorSpec quad_spec = regressor;
        quad_spec.training.seed =
            rng::mix64(regressor.training.seed ^ (2ull * static_cast<std::uint64_t>(t) + 1ull));
        RegressorSpec quant_spec = regressor;
        quant_spec.training.seed =
            rng::mix64(regressor.training.seed ^ (2ull * static_cast<std::uint64_t>(t) + 2ull));

        FittedRegressor g, h;
        try {
            g = fit_regressor(quad_spec, panel, LossSpec::quadratic());
            // the quantile optimum is the quadratic one plus a residual
            // buffer, so seed h from g
            h = fit_regressor(quant_spec, panel, LossSpec::koenker_bassett(params.alpha), &g);
        } catch (const nonconvergence_error& e) {
            throw nonconvergence_error("period " + std::to_string(t) + ": " + e.what());
        } catch (const validation_error& e) {
            throw validation_error("period " + std::to_string(t) + ": " + e.what());
        }

        Eigen::MatrixXd theta = g.predict_all(panel.features);
        Eigen::MatrixXd xi = h.predict_all(panel.features);

        const Eigen::VectorXd resid =
            targets - xi.cwiseProduct(panel.next_payoffs).rowwise().sum();
        path.residuals.col(t) = resid;

        // rho_t = theta.Y(t) + i (xi - theta).Y(t), pathwise
        Eigen::VectorXd rho =
            theta.cwiseProduct(panel.now_prices).rowwise().sum() +
            params.coc_rate * (xi - theta).cwiseProduct(panel.now_prices).rowwise().sum();

        if (t == 0) {
            // all paths share Z(0): collapse to the cross-path average
            path.theta0 = theta.colwise().mean().transpose();
            path.xi0 = xi.colwise().mean().transpose();
            double spread = 0.0;
            for (Eigen::Index k = 0; k < n1; ++k) {
                spread = std::max(spread,
                                  (theta.col(k).maxCoeff() - theta.col(k).minCoeff()));
                spread = std::max(spread, (xi.col(k).maxCoeff() - xi.col(k).minCoeff()));
            }
            const double scale = 1.0 + path.xi0.cwiseAbs().maxCoeff();
            path.time0_spread_warning = spread > 1e-6 * scale;
            const Eigen::VectorXd y0 = panel.now_prices.row(0).transpose();
            path.rho0 = path.theta0.dot(y0) +
                        params.coc_rate * (path.xi0 - path.theta0).dot(y0);
            rho.setConstant(path.rho0);
            for (Eigen::Index i = 0; i < M; ++i) {
                theta.row(i) = path.theta0.transpose();
                xi.row(i) = path.xi0.transpose();
            }
        }

        path.theta_units[static_cast<std::size_t>(t)] = std::move(theta);
        path.xi_units[static_cast<std::size_t>(t)] = std::move(xi);
        path.quad_fits[static_cast<std::size_t>(t)] = std::move(g);
        path.quant_fits[static_cast<std::size_t>(t)] = std::move(h);
        path.fair_values.col(t) = rho;
        targets = rho;
    }
    return path;
}

ValuationPath backward_valuate(const ScenarioSet& scenarios, const Eigen::VectorXd& liability,
                               const ValuationParams& params, const RegressorSpec& regressor) {
    return backward_valuate(problem_from_scenarios(scenarios, liability), params, regressor);
}

RebalReport rebalancing_costs(const ValuationPath& path, const DynamicProblem& problem,
                              double r) {
    const int T = path.horizon();
    const Eigen::Index M = path.fair_values.rows();
    RebalReport rep;
    rep.total_discounted = Eigen::VectorXd::Zero(M);
    if (T < 2) {
        rep.per_period.resize(M, 0);
        return rep;
    }
    rep.per_period.resize(M, T - 1);
    for (int t = 1; t <= T - 1; ++t) {
        const Eigen::MatrixXd& y_now = problem.prices[static_cast<std::size_t>(t)];
        const Eigen::VectorXd rb =
            (path.xi_units[static_cast<std::size_t>(t)] -
             path.xi_units[static_cast<std::size_t>(t - 1)])
                .cwiseProduct(y_now)
                .rowwise()
                .sum();
        rep.per_period.col(t - 1) = rb;
        rep.total_discounted += std::exp(-r * t) * rb;

        const Eigen::VectorXd eta_payoff =
            (path.xi_units[static_cast<std::size_t>(t)] -
             path.theta_units[static_cast<std::size_t>(t)])
                .cwiseProduct(y_now)
                .rowwise()
                .sum();
        long covered = 0;
        for (Eigen::Index i = 0; i < M; ++i)
            if (eta_payoff(i) * (1.0 - path.coc_rate) >= rb(i)) ++covered;
        rep.funding_coverage.push_back(static_cast<double>(covered) /
                                       static_cast<double>(M));
    }
    return rep;
}

std::vector<PeriodDiagnostics> constraint_report(const ValuationPath& path, double alpha) {
    std::vector<PeriodDiagnostics> out;
    const int T = path.horizon();
    for (int t = 0; t < T; ++t) {
        const Sample resid = to_sample(path.residuals.col(t));
        PeriodDiagnostics d;
        d.period = t + 1;
        d.var = var(resid, alpha);
        d.kb_error = kb_error(resid, alpha);
        d.dtvar = dtvar(resid, alpha);
        out.push_back(d);
    }
    return out;
}

std::vector<BucketDiagnostics> bucketed_constraint_report(const ValuationPath& path,
                                                          const DynamicProblem& problem,
                                                          double alpha, int buckets) {
    if (buckets < 1) throw validation_error("bucketed_constraint_report: buckets must be >= 1");
    std::vector<BucketDiagnostics> out;
    const int T = path.horizon();
    const Eigen::Index M = path.fair_values.rows();
    for (int t = 0; t < T; ++t) {
        const Eigen::VectorXd feat = problem.features[static_cast<std::size_t>(t)].col(0);
        std::vector<Eigen::Index> order(static_cast<std::size_t>(M));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](Eigen::Index a, Eigen::Index b) { return feat(a) < feat(b); });
        for (int bkt = 0; bkt < buckets; ++bkt) {
            const std::size_t lo = static_cast<std::size_t>(M) * bkt / buckets;
            const std::size_t hi = static_cast<std::size_t>(M) * (bkt + 1) / buckets;
            if (hi - lo < 2) continue;
            std::vector<double> vals;
            vals.reserve(hi - lo);
            for (std::size_t idx = lo; idx < hi; ++idx)
                vals.push_back(path.residuals(order[idx], t));
            BucketDiagnostics d;
            d.period = t + 1;
            d.bucket = bkt;
            d.feature_lo = feat(order[lo]);
            d.feature_hi = feat(order[hi - 1]);
            d.var = var(Sample(std::move(vals)), alpha);
            out.push_back(d);
        }
    }
    return out;
}

} // namespace insurval
