#include <doctest.h>

#include "common.hpp"
#include "dynamic_valuation.hpp"
#include "gaussian_model.hpp"
#include "report_io.hpp"
#include "risk_measures.hpp"
#include "rng.hpp"
#include "test_helpers.hpp"

#include <cmath>

using namespace insurval;

namespace {

RegressorSpec linear_spec(std::vector<std::string> basis, std::uint64_t seed = 0) {
    RegressorSpec s;
    s.kind = RegressorKind::Linear;
    s.feature_basis = std::move(basis);
    s.training.seed = seed;
    return s;
}

ScenarioSet small_benchmark(std::size_t paths, int horizon, std::uint64_t seed) {
    const MarketParams market{0.01, 0.02, 0.1, 1.0, -0.5};
    const MortalityParams mort{0.0087, 0.075, 0.000597, 55, 1000};
    const GridSpec grid{horizon, 12, paths, seed};
    return simulate_joint(market, mort, grid);
}

} // namespace

TEST_SUITE_BEGIN("dynamic");

TEST_CASE("single period with constant state degenerates to the one-period valuation") {
    const auto c = insurval::testing::make_example2_case(20000, 3);
    const auto m = c.panel.payoffs.rows();

    DynamicProblem problem;
    problem.r = 0.0;
    problem.features = {Eigen::MatrixXd::Ones(m, 1)};
    problem.prices = {Eigen::MatrixXd::Ones(m, 2), c.panel.payoffs};
    problem.liability =
        Eigen::Map<const Eigen::VectorXd>(c.liability.values().data(), m);

    const ValuationParams params{0.1, 0.99, 0.998, 0.0};
    const ValuationPath path =
        backward_valuate(problem, params, linear_spec({"1"}));

    const FairValue ref =
        two_step_valuation(c.liability, c.panel, params, LossSpec::koenker_bassett(0.99));
    CHECK(path.rho0 == doctest::Approx(ref.value).epsilon(1e-6));
    CHECK_FALSE(path.time0_spread_warning);
    // column T of the fair value matrix is the liability itself
    CHECK((path.fair_values.col(1) - problem.liability).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("gaussian model matches its closed-form value") {
    GaussianModelParams p;
    p.s0 = 100.0;
    p.horizon_T = 3;
    p.gamma = 10.0;
    p.corr = 0.5;
    p.kappa = 0.1;
    p.sigma_ret = 0.15;
    p.n_paths = 30000;
    p.seed = 17;
    const DynamicProblem problem = build_gaussian_problem(p);
    const ValuationParams params{0.06, 0.95, 0.998, 0.0};
    const ValuationPath path =
        backward_valuate(problem, params, linear_spec(gaussian_model_basis()));

    const double lambda = norm_quantile(0.95);
    const double closed =
        p.s0 - p.kappa * p.corr * p.gamma * 3 +
        0.06 * lambda * std::sqrt(1.0 - p.corr * p.corr) * p.gamma * 3;
    const Eigen::VectorXd rho1 = path.fair_values.col(1);
    const double sd1 = std::sqrt((rho1.array() - rho1.mean()).square().mean());
    const double tol = std::max(0.01 * closed, 5.0 * sd1 / std::sqrt(static_cast<double>(p.n_paths)));
    CHECK(std::fabs(path.rho0 - closed) < tol);
}

TEST_CASE("restarting the recursion from stored targets refits identically") {
    const ScenarioSet scenarios = small_benchmark(2000, 3, 5);
    const Eigen::VectorXd liability = equity_linked_liability(scenarios, 1.0);
    const ValuationParams params{0.1, 0.95, 0.998, 0.01};
    const RegressorSpec reg = linear_spec({"1", "z1", "z2"}, 99);

    const DynamicProblem full = problem_from_scenarios(scenarios, liability);
    const ValuationPath whole = backward_valuate(full, params, reg);

    // sub-problem ending at t = 2 with the stored rho_2 as liability
    DynamicProblem sub;
    sub.r = full.r;
    sub.features = {full.features[0], full.features[1]};
    sub.prices = {full.prices[0], full.prices[1], full.prices[2]};
    sub.liability = whole.fair_values.col(2);
    const ValuationPath staged = backward_valuate(sub, params, reg);

    for (int t = 0; t <= 2; ++t)
        CHECK((staged.fair_values.col(t) - whole.fair_values.col(t))
                  .lpNorm<Eigen::Infinity>() == 0.0);
    CHECK(staged.rho0 == whole.rho0);
    for (int t = 0; t < 2; ++t) {
        CHECK((staged.xi_units[static_cast<std::size_t>(t)] -
               whole.xi_units[static_cast<std::size_t>(t)])
                  .lpNorm<Eigen::Infinity>() == 0.0);
    }
}

TEST_CASE("statically replicable liabilities have zero rebalancing cost") {
    const std::size_t m = 3000;
    const int T = 4;
    const double r = 0.01;
    // scenario prices with a lognormal risky asset
    DynamicProblem problem;
    problem.r = r;
    problem.liability.resize(static_cast<Eigen::Index>(m));
    for (int t = 0; t <= T; ++t)
        problem.prices.emplace_back(Eigen::MatrixXd(static_cast<Eigen::Index>(m), 2));
    for (int t = 0; t < T; ++t)
        problem.features.emplace_back(Eigen::MatrixXd(static_cast<Eigen::Index>(m), 2));
    for (std::size_t i = 0; i < m; ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        double y = 1.0;
        for (int t = 0; t <= T; ++t) {
            problem.prices[static_cast<std::size_t>(t)](row, 0) = std::exp(r * t);
            problem.prices[static_cast<std::size_t>(t)](row, 1) = y;
            if (t < T) {
                problem.features[static_cast<std::size_t>(t)](row, 0) = y;
                problem.features[static_cast<std::size_t>(t)](row, 1) = 1.0;
            }
            y *= std::exp(0.05 + 0.2 * rng::counter_normal(23, i, static_cast<std::uint64_t>(t), 0));
        }
        // exact replication: 2 risk-free units + 3 risky units
        problem.liability(row) = 2.0 * std::exp(r * T) + 3.0 * problem.prices[static_cast<std::size_t>(T)](row, 1);
    }
    const ValuationParams params{0.1, 0.95, 0.998, r};
    const ValuationPath path =
        backward_valuate(problem, params, linear_spec({"1", "z1"}));
    const RebalReport rebal = rebalancing_costs(path, problem, r);
    CHECK(rebal.per_period.cwiseAbs().maxCoeff() < 1e-7);
    CHECK(rebal.total_discounted.cwiseAbs().maxCoeff() < 1e-7);
    // residuals vanish, so every diagnostic is zero
    const auto diags = constraint_report(path, params.alpha);
    for (const auto& d : diags) {
        CHECK(std::fabs(d.var) < 1e-8);
        CHECK(std::fabs(d.kb_error) < 1e-8);
        CHECK(std::fabs(d.dtvar) < 1e-8);
    }
}

TEST_CASE("equity-linked benchmark run with a linear regressor") {
    const ScenarioSet scenarios = small_benchmark(5000, 4, 11);
    const Eigen::VectorXd liability = equity_linked_liability(scenarios, 1.0);
    const ValuationParams params{0.1, 0.95, 0.998, 0.01};
    const DynamicProblem problem = problem_from_scenarios(scenarios, liability);
    const ValuationPath path =
        backward_valuate(problem, params, linear_spec({"1", "z1", "z2", "z1*z1"}));

    SUBCASE("pooled residual VaR is driven to zero") {
        const auto diags = constraint_report(path, params.alpha);
        REQUIRE(diags.size() == 4);
        for (const auto& d : diags) {
            CHECK(std::fabs(d.var) <= 0.005 * path.expected_liability);
            // with a zero empirical quantile the KB error equals the dTVaR
            CHECK(d.kb_error == doctest::Approx(d.dtvar).epsilon(0.02));
            CHECK(d.kb_error >= d.dtvar - 1e-9 * (1.0 + std::fabs(d.dtvar)));
        }
    }

    SUBCASE("funding identity coverage is near alpha") {
        const RebalReport rebal = rebalancing_costs(path, problem, problem.r);
        REQUIRE(rebal.funding_coverage.size() == 3);
        const double slack =
            std::max(0.02, 5.0 * std::sqrt(0.95 * 0.05 / static_cast<double>(5000)));
        for (double cov : rebal.funding_coverage)
            CHECK(std::fabs(cov - params.alpha) < slack + 0.01);
    }

    SUBCASE("fan widths grow with the horizon") {
        int violations = 0;
        double prev = 0.0;
        for (int t = 0; t <= path.horizon(); ++t) {
            const auto q = empirical_quantiles(path.fair_values.col(t), {0.025, 0.975});
            const double width = q[1] - q[0];
            if (t > 0 && width < prev - 1e-9) ++violations;
            prev = width;
        }
        CHECK(violations <= 1);
    }

    SUBCASE("bucketed diagnostics cover every period") {
        const auto buckets = bucketed_constraint_report(path, problem, params.alpha, 10);
        CHECK(buckets.size() == 4u * 10u);
        for (const auto& b : buckets) CHECK(b.feature_lo <= b.feature_hi);
    }

    SUBCASE("fair value invariant holds pathwise") {
        for (int t = 0; t < path.horizon(); ++t) {
            const Eigen::VectorXd lhs = path.fair_values.col(t);
            const Eigen::MatrixXd& y_now = problem.prices[static_cast<std::size_t>(t)];
            const Eigen::VectorXd rhs =
                path.theta_units[static_cast<std::size_t>(t)].cwiseProduct(y_now).rowwise().sum() +
                params.coc_rate * (path.xi_units[static_cast<std::size_t>(t)] -
                                   path.theta_units[static_cast<std::size_t>(t)])
                                      .cwiseProduct(y_now)
                                      .rowwise()
                                      .sum();
            CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() <
                  1e-10 * (1.0 + lhs.cwiseAbs().maxCoeff()));
        }
    }
}

TEST_CASE("period-labelled errors on rank-deficient price panels") {
    const std::size_t m = 500;
    DynamicProblem problem;
    problem.r = 0.0;
    problem.features = {Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(m), 1)};
    Eigen::MatrixXd p0 = Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(m), 2);
    Eigen::MatrixXd p1(static_cast<Eigen::Index>(m), 2);
    p1.col(0).setOnes();
    p1.col(1) = 2.0 * p1.col(0); // redundant
    problem.prices = {p0, p1};
    problem.liability = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(m));
    const ValuationParams params{0.1, 0.95, 0.998, 0.0};
    CHECK_THROWS_WITH_AS(backward_valuate(problem, params, linear_spec({"1"})),
                         doctest::Contains("period 0"), validation_error);
}

TEST_SUITE_END();
