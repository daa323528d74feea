#include <doctest.h>

#include "common.hpp"
#include "linear_hedge.hpp"
#include "regressors.hpp"
#include "rng.hpp"

#include <random>
#include "test_helpers.hpp"

#include <cmath>

using namespace insurval;

namespace {

// panel with features z ~ N(0,1)^2 and payoffs (1, lognormal)
StatePanel synthetic_panel(std::size_t m, std::uint64_t seed,
                           bool affine_target = true) {
    StatePanel p;
    const auto mi = static_cast<Eigen::Index>(m);
    p.features.resize(mi, 2);
    p.next_payoffs.resize(mi, 2);
    p.now_prices = Eigen::MatrixXd::Ones(mi, 2);
    p.targets.resize(mi);
    for (std::size_t i = 0; i < m; ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        const double z1 = rng::counter_normal(seed, i, 0, 0);
        const double z2 = rng::counter_normal(seed, i, 0, 1);
        const double y1 = std::exp(0.15 * rng::counter_normal(seed, i, 0, 2));
        p.features(row, 0) = z1;
        p.features(row, 1) = z2;
        p.next_payoffs(row, 0) = 1.0;
        p.next_payoffs(row, 1) = y1;
        if (affine_target) {
            const double b0 = 1.0 + 0.5 * z1;
            const double b1 = 2.0 - 0.3 * z2;
            p.targets(row) = b0 + b1 * y1;
        } else {
            p.targets(row) = 3.0 + rng::counter_normal(seed, i, 0, 3);
        }
    }
    return p;
}

RegressorSpec linear_spec(std::vector<std::string> basis) {
    RegressorSpec s;
    s.kind = RegressorKind::Linear;
    s.feature_basis = std::move(basis);
    return s;
}

RegressorSpec mlp_spec(std::uint64_t seed, int epochs = 200) {
    RegressorSpec s;
    s.kind = RegressorKind::Mlp;
    s.hidden = {10, 10, 10};
    s.training.seed = seed;
    s.training.epochs = epochs;
    return s;
}

} // namespace

TEST_SUITE_BEGIN("regressors");

TEST_CASE("monomial basis evaluation") {
    Eigen::MatrixXd f(2, 2);
    f << 2.0, 3.0, -1.0, 4.0;
    const Eigen::MatrixXd phi =
        evaluate_basis({"1", "z1", "z2^2", "z1*z2", "z1^-1"}, f);
    CHECK(phi(0, 0) == 1.0);
    CHECK(phi(0, 1) == 2.0);
    CHECK(phi(0, 2) == 9.0);
    CHECK(phi(0, 3) == 6.0);
    CHECK(phi(0, 4) == doctest::Approx(0.5));
    CHECK(phi(1, 3) == -4.0);
    CHECK_THROWS_AS(evaluate_basis({"z3"}, f), validation_error);
    CHECK_THROWS_AS(evaluate_basis({"w1"}, f), validation_error);
    CHECK_THROWS_AS(evaluate_basis({""}, f), validation_error);
}

TEST_CASE("constant-basis quadratic regressor is the one-period quadratic hedge") {
    const auto c = insurval::testing::make_example2_case(20000, 3);
    StatePanel panel;
    const auto m = c.panel.payoffs.rows();
    panel.features = Eigen::MatrixXd::Ones(m, 1);
    panel.next_payoffs = c.panel.payoffs;
    panel.now_prices = Eigen::MatrixXd::Ones(m, 2);
    panel.targets = Eigen::Map<const Eigen::VectorXd>(c.liability.values().data(), m);

    const FittedRegressor fit =
        fit_regressor(linear_spec({"1"}), panel, LossSpec::quadratic());
    const HedgeStrategy theta = ols_hedge(c.liability, c.panel);
    const Eigen::VectorXd pred = fit.predict(Eigen::VectorXd::Ones(1));
    CHECK((pred - theta.units).lpNorm<Eigen::Infinity>() <
          1e-9 * (1.0 + theta.units.lpNorm<Eigen::Infinity>()));

    const FittedRegressor fit_kb =
        fit_regressor(linear_spec({"1"}), panel, LossSpec::koenker_bassett(0.95));
    const HedgeStrategy xi = quantile_hedge(c.liability, c.panel, 0.95);
    const Eigen::VectorXd pred_kb = fit_kb.predict(Eigen::VectorXd::Ones(1));
    CHECK((pred_kb - xi.units).lpNorm<Eigen::Infinity>() <
          1e-6 * (1.0 + xi.units.lpNorm<Eigen::Infinity>()));
}

TEST_CASE("quadratic linear fit leaves residuals orthogonal to the design") {
    const StatePanel panel = synthetic_panel(5000, 7, false);
    const FittedRegressor fit =
        fit_regressor(linear_spec({"1", "z1", "z2"}), panel, LossSpec::quadratic());
    const Eigen::MatrixXd pred = fit.predict_all(panel.features);
    const Eigen::VectorXd resid =
        panel.targets - pred.cwiseProduct(panel.next_payoffs).rowwise().sum();
    const Eigen::MatrixXd phi = evaluate_basis({"1", "z1", "z2"}, panel.features);
    const double scale = panel.targets.cwiseAbs().mean();
    for (Eigen::Index j = 0; j < phi.cols(); ++j)
        for (Eigen::Index k = 0; k < panel.next_payoffs.cols(); ++k) {
            const double dot =
                (phi.col(j).cwiseProduct(panel.next_payoffs.col(k))).dot(resid) /
                static_cast<double>(panel.targets.size());
            CHECK(std::fabs(dot) < 1e-8 * scale);
        }
}

TEST_CASE("mlp analytic gradient matches central finite differences") {
    // 5-path micro panel
    const StatePanel panel = synthetic_panel(5, 11);
    MlpModel net;
    std::mt19937_64 eng(5);
    auto draw = [&eng]() {
        return norm_quantile((static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53);
    };
    const std::vector<int> widths = {2, 4, 3, 2};
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        Eigen::MatrixXd w(widths[l + 1], widths[l]);
        for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = 0.4 * draw();
        Eigen::VectorXd b(widths[l + 1]);
        for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = 0.2 * draw();
        net.W.push_back(std::move(w));
        net.b.push_back(std::move(b));
    }

    for (const LossSpec& loss :
         {LossSpec::koenker_bassett(0.95, 0.05), LossSpec::quadratic()}) {
        const auto grad =
            net.objective_gradient(panel.features, panel.next_payoffs, panel.targets, loss);
        auto params = net.flat_params();
        REQUIRE(grad.size() == params.size());
        MlpModel probe = net;
        double max_rel = 0.0;
        for (std::size_t k = 0; k < params.size(); ++k) {
            const double h = 1e-6 * (1.0 + std::fabs(params[k]));
            auto up = params, dn = params;
            up[k] += h;
            dn[k] -= h;
            probe.set_flat_params(up);
            const double fu =
                probe.objective(panel.features, panel.next_payoffs, panel.targets, loss);
            probe.set_flat_params(dn);
            const double fl =
                probe.objective(panel.features, panel.next_payoffs, panel.targets, loss);
            const double fd_grad = (fu - fl) / (2.0 * h);
            const double denom = std::max({std::fabs(grad[k]), std::fabs(fd_grad), 1e-8});
            max_rel = std::max(max_rel, std::fabs(grad[k] - fd_grad) / denom);
        }
        CHECK(max_rel < 1e-4);
    }
}

TEST_CASE("mlp recovers a synthetic state-dependent strategy out of sample") {
    const StatePanel train = synthetic_panel(20000, 21);
    const StatePanel test = synthetic_panel(4000, 22);
    const FittedRegressor fit = fit_regressor(mlp_spec(1), train, LossSpec::quadratic());

    const Eigen::MatrixXd pred = fit.predict_all(test.features);
    const Eigen::VectorXd resid =
        test.targets - pred.cwiseProduct(test.next_payoffs).rowwise().sum();
    const double mse = resid.squaredNorm() / static_cast<double>(resid.size());
    const double target_var =
        (test.targets.array() - test.targets.mean()).square().mean();
    CHECK(mse < 1e-3 * target_var);
}

TEST_CASE("training is deterministic given the seed") {
    const StatePanel panel = synthetic_panel(3000, 31);
    const RegressorSpec spec = mlp_spec(77, 30);
    const FittedRegressor a = fit_regressor(spec, panel, LossSpec::quadratic());
    const FittedRegressor b = fit_regressor(spec, panel, LossSpec::quadratic());
    CHECK(a.save_json() == b.save_json());

    const FittedRegressor c =
        fit_regressor(linear_spec({"1", "z1"}), panel, LossSpec::koenker_bassett(0.9));
    const FittedRegressor d =
        fit_regressor(linear_spec({"1", "z1"}), panel, LossSpec::koenker_bassett(0.9));
    CHECK(c.save_json() == d.save_json());
}

TEST_CASE("degenerate features are dropped or neutralized with a warning") {
    StatePanel panel = synthetic_panel(2000, 41);
    panel.features.col(1).setConstant(3.0);

    const FittedRegressor lin =
        fit_regressor(linear_spec({"1", "z1", "z2"}), panel, LossSpec::quadratic());
    REQUIRE(!lin.trace().warnings.empty());
    CHECK(lin.trace().warnings.front().find("z2") != std::string::npos);

    const FittedRegressor mlp = fit_regressor(mlp_spec(5, 5), panel, LossSpec::quadratic());
    REQUIRE(!mlp.trace().warnings.empty());
    CHECK(mlp.trace().warnings.front().find("zero variance") != std::string::npos);
}

TEST_CASE("zero-weight networks predict their output bias") {
    MlpModel net;
    net.W = {Eigen::MatrixXd::Zero(4, 2), Eigen::MatrixXd::Zero(2, 4)};
    net.b = {Eigen::VectorXd::Zero(4), Eigen::VectorXd(2)};
    net.b[1] << 3.5, -1.25;
    Eigen::MatrixXd states(3, 2);
    states << 0.0, 0.0, 5.0, -2.0, 100.0, 40.0;
    const Eigen::MatrixXd out = net.forward(states);
    for (Eigen::Index i = 0; i < 3; ++i) {
        CHECK(out(i, 0) == 3.5);
        CHECK(out(i, 1) == -1.25);
    }
}

TEST_CASE("linear regressor with identity basis is an affine map of state") {
    const StatePanel panel = synthetic_panel(4000, 51);
    const FittedRegressor fit =
        fit_regressor(linear_spec({"1", "z1", "z2"}), panel, LossSpec::quadratic());
    Eigen::VectorXd s1(2), s2(2);
    s1 << 0.3, -0.7;
    s2 << 1.1, 0.4;
    const Eigen::VectorXd mid = 0.5 * (s1 + s2);
    const Eigen::VectorXd lhs = fit.predict(mid);
    const Eigen::VectorXd rhs = 0.5 * (fit.predict(s1) + fit.predict(s2));
    CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("save and load round-trip preserves predictions") {
    const StatePanel panel = synthetic_panel(2000, 61);
    Eigen::VectorXd state(2);
    state << 0.25, -1.5;

    const FittedRegressor mlp = fit_regressor(mlp_spec(9, 10), panel, LossSpec::quadratic());
    const FittedRegressor mlp2 = FittedRegressor::load_json(mlp.save_json());
    CHECK((mlp.predict(state) - mlp2.predict(state)).lpNorm<Eigen::Infinity>() == 0.0);

    const FittedRegressor lin =
        fit_regressor(linear_spec({"1", "z1", "z1*z2"}), panel, LossSpec::quadratic());
    const FittedRegressor lin2 = FittedRegressor::load_json(lin.save_json());
    CHECK((lin.predict(state) - lin2.predict(state)).lpNorm<Eigen::Infinity>() == 0.0);

    CHECK_THROWS_AS(FittedRegressor::load_json("{\"format\":\"other\"}"), validation_error);
}

TEST_CASE("predict validates the state dimension") {
    const StatePanel panel = synthetic_panel(1000, 71);
    const FittedRegressor fit =
        fit_regressor(linear_spec({"1", "z1"}), panel, LossSpec::quadratic());
    CHECK_THROWS_AS(fit.predict(Eigen::VectorXd::Ones(3)), validation_error);
}

TEST_SUITE_END();
