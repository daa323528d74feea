#include "regressors.hpp"

#include "common.hpp"
#include "rng.hpp"
#include "risk_measures.hpp"
#include "solvers.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace insurval {

void TrainingSpec::validate() const {
    if (epochs < 1) throw validation_error("training.epochs must be >= 1");
    if (batch_size < 1) throw validation_error("training.batch_size must be >= 1");
    if (!(step_size > 0.0)) throw validation_error("training.step_size must be > 0");
    if (patience < 1) throw validation_error("training.patience must be >= 1");
}

void RegressorSpec::validate() const {
    training.validate();
    if (kind == RegressorKind::Linear) {
        if (feature_basis.empty())
            throw validation_error("regressor.feature_basis must not be empty");
    } else {
        if (hidden.empty()) throw validation_error("regressor.hidden must not be empty");
        for (int h : hidden)
            if (h < 1) throw validation_error("regressor.hidden sizes must be >= 1");
    }
}

void StatePanel::validate() const {
    const Eigen::Index m = features.rows();
    if (m == 0) throw validation_error("StatePanel: empty");
    if (next_payoffs.rows() != m || now_prices.rows() != m || targets.size() != m)
        throw validation_error("StatePanel: row counts disagree");
    if (next_payoffs.cols() != now_prices.cols())
        throw validation_error("StatePanel: payoff and price column counts disagree");
    if (!features.allFinite() || !next_payoffs.allFinite() || !targets.allFinite())
        throw validation_error("StatePanel: non-finite entries");
}

// ---------------------------------------------------------------- basis

namespace {

struct Factor {
    int feature; // 0-based
    int exponent;
};

std::vector<Factor> parse_term(const std::string& term) {
    std::string t;
    for (char ch : term)
        if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
    if (t.empty()) throw validation_error("regressor: empty basis term");
    if (t == "1") return {};
    std::vector<Factor> out;
    std::size_t pos = 0;
    while (pos < t.size()) {
        if (t[pos] != 'z')
            throw validation_error("regressor: bad basis term '" + term + "'");
        ++pos;
        std::size_t idx_end = pos;
        while (idx_end < t.size() && std::isdigit(static_cast<unsigned char>(t[idx_end])))
            ++idx_end;
        if (idx_end == pos)
            throw validation_error("regressor: bad basis term '" + term + "'");
        const int feature = std::stoi(t.substr(pos, idx_end - pos)) - 1;
        if (feature < 0)
            throw validation_error("regressor: feature indices are 1-based in '" + term + "'");
        pos = idx_end;
        int exponent = 1;
        if (pos < t.size() && t[pos] == '^') {
            ++pos;
            std::size_t exp_end = pos;
            if (exp_end < t.size() && (t[exp_end] == '-' || t[exp_end] == '+')) ++exp_end;
            while (exp_end < t.size() && std::isdigit(static_cast<unsigned char>(t[exp_end])))
                ++exp_end;
            if (exp_end == pos)
                throw validation_error("regressor: bad exponent in '" + term + "'");
            exponent = std::stoi(t.substr(pos, exp_end - pos));
            pos = exp_end;
        }
        if (pos < t.size()) {
            if (t[pos] != '*')
                throw validation_error("regressor: bad basis term '" + term + "'");
            ++pos;
        }
        out.push_back({feature, exponent});
    }
    return out;
}

} // namespace

Eigen::MatrixXd evaluate_basis(const std::vector<std::string>& terms,
                               const Eigen::MatrixXd& features) {
    const Eigen::Index m = features.rows();
    Eigen::MatrixXd phi(m, static_cast<Eigen::Index>(terms.size()));
    for (std::size_t j = 0; j < terms.size(); ++j) {
        const auto factors = parse_term(terms[j]);
        for (const auto& f : factors)
            if (f.feature >= features.cols())
                throw validation_error("regressor: basis term '" + terms[j] +
                                       "' exceeds feature count");
        for (Eigen::Index i = 0; i < m; ++i) {
            double v = 1.0;
            for (const auto& f : factors)
                v *= std::pow(features(i, f.feature), f.exponent);
            phi(i, static_cast<Eigen::Index>(j)) = v;
        }
    }
    if (!phi.allFinite())
        throw validation_error("regressor: basis evaluation produced non-finite values");
    return phi;
}

// ------------------------------------------------------------------ mlp

Eigen::MatrixXd MlpModel::forward(const Eigen::MatrixXd& X) const {
    Eigen::MatrixXd a = X;
    for (std::size_t l = 0; l < W.size(); ++l) {
        Eigen::MatrixXd z = a * W[l].transpose();
        z.rowwise() += b[l].transpose();
        if (l + 1 < W.size())
            a = z.cwiseMax(0.0);
        else
            a = std::move(z);
    }
    return a;
}

std::vector<double> MlpModel::flat_params() const {
    std::vector<double> p;
    for (std::size_t l = 0; l < W.size(); ++l) {
        p.insert(p.end(), W[l].data(), W[l].data() + W[l].size());
        p.insert(p.end(), b[l].data(), b[l].data() + b[l].size());
    }
    return p;
}

void MlpModel::set_flat_params(const std::vector<double>& p) {
    std::size_t off = 0;
    for (std::size_t l = 0; l < W.size(); ++l) {
        std::copy(p.begin() + off, p.begin() + off + W[l].size(), W[l].data());
        off += static_cast<std::size_t>(W[l].size());
        std::copy(p.begin() + off, p.begin() + off + b[l].size(), b[l].data());
        off += static_cast<std::size_t>(b[l].size());
    }
    if (off != p.size()) throw validation_error("MlpModel: parameter size mismatch");
}

double MlpModel::objective(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                           const Eigen::VectorXd& t, const LossSpec& loss) const {
    const Eigen::MatrixXd out = forward(X);
    const Eigen::VectorXd r = t - out.cwiseProduct(Y).rowwise().sum();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) acc += loss_eval(loss, r(i));
    return acc / static_cast<double>(r.size());
}

std::vector<double> MlpModel::objective_gradient(const Eigen::MatrixXd& X,
                                                 const Eigen::MatrixXd& Y,
                                                 const Eigen::VectorXd& t,
                                                 const LossSpec& loss) const {
    const std::size_t L = W.size();
    const Eigen::Index B = X.rows();

    // forward pass keeping activations
    std::vector<Eigen::MatrixXd> acts(L + 1);
    acts[0] = X;
    for (std::size_t l = 0; l < L; ++l) {
        Eigen::MatrixXd z = acts[l] * W[l].transpose();
        z.rowwise() += b[l].transpose();
        acts[l + 1] = (l + 1 < L) ? z.cwiseMax(0.0) : z;
    }
    const Eigen::VectorXd r = t - acts[L].cwiseProduct(Y).rowwise().sum();

    Eigen::VectorXd lp(B);
    for (Eigen::Index i = 0; i < B; ++i) lp(i) = loss_subgradient(loss, r(i));
    // d objective / d out = -(1/B) l'(r_i) * y_i
    Eigen::MatrixXd g = Y;
    g.array().colwise() *= (-lp.array() / static_cast<double>(B));

    std::vector<Eigen::MatrixXd> dW(L);
    std::vector<Eigen::VectorXd> db(L);
    for (std::size_t l = L; l-- > 0;) {
        dW[l] = g.transpose() * acts[l];
        db[l] = g.colwise().sum().transpose();
        if (l > 0) {
            g = (g * W[l]).eval();
            // ReLU mask from the post-activation values
            g = g.cwiseProduct((acts[l].array() > 0.0).cast<double>().matrix());
        }
    }
    std::vector<double> flat;
    for (std::size_t l = 0; l < L; ++l) {
        flat.insert(flat.end(), dW[l].data(), dW[l].data() + dW[l].size());
        flat.insert(flat.end(), db[l].data(), db[l].data() + db[l].size());
    }
    return flat;
}

// ------------------------------------------------------------- fitting

namespace {

double column_sd(const Eigen::VectorXd& col) {
    const double mean = col.mean();
    return std::sqrt((col.array() - mean).square().mean());
}

struct AdamState {
    std::vector<double> m, v;
    long step = 0;
    void init(std::size_t n) {
        m.assign(n, 0.0);
        v.assign(n, 0.0);
        step = 0;
    }
    void update(std::vector<double>& p, const std::vector<double>& g, double lr) {
        ++step;
        const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
        const double c1 = 1.0 - std::pow(b1, static_cast<double>(step));
        const double c2 = 1.0 - std::pow(b2, static_cast<double>(step));
        for (std::size_t i = 0; i < p.size(); ++i) {
            m[i] = b1 * m[i] + (1.0 - b1) * g[i];
            v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
            p[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps);
        }
    }
};

Eigen::VectorXd constant_strategy(const Eigen::MatrixXd& Y, const Eigen::VectorXd& t,
                                  const LossSpec& loss) {
    switch (loss.kind) {
    case LossKind::Quadratic: return solve_ols(Y, t);
    case LossKind::KoenkerBassett: return solve_quantile(Y, t, loss.level).beta;
    case LossKind::Expectile: return solve_expectile(Y, t, loss.level).beta;
    }
    throw validation_error("fit: unknown loss");
}

// exact minimizing shift of the residual sample in the risk-free
// direction for each loss family
double riskfree_shift(const Eigen::VectorXd& residuals, const LossSpec& loss) {
    std::vector<double> rv(residuals.data(), residuals.data() + residuals.size());
    const Sample rs(std::move(rv));
    switch (loss.kind) {
    case LossKind::Quadratic: return rs.mean();
    case LossKind::KoenkerBassett: return var(rs, loss.level);
    case LossKind::Expectile: return expectile(rs, loss.level);
    }
    return 0.0;
}

} // namespace

FittedRegressor fit_regressor(const RegressorSpec& spec, const StatePanel& panel,
                              const LossSpec& loss, const FittedRegressor* warm_from) {
    spec.validate();
    panel.validate();
    loss.validate();

    const Eigen::Index M = panel.features.rows();
    const Eigen::Index n1 = panel.next_payoffs.cols();

    FittedRegressor fit;
    fit.spec_ = spec;
    fit.n_outputs_ = n1;
    fit.norm_mean_ = Eigen::VectorXd::Zero(panel.features.cols());
    fit.norm_scale_ = Eigen::VectorXd::Ones(panel.features.cols());

    if (spec.kind == RegressorKind::Linear) {
        // evaluate terms, drop degenerate (constant) columns except "1"
        Eigen::MatrixXd phi_all = evaluate_basis(spec.feature_basis, panel.features);
        std::vector<std::string> kept;
        std::vector<Eigen::Index> kept_idx;
        for (Eigen::Index j = 0; j < phi_all.cols(); ++j) {
            const std::string& term = spec.feature_basis[static_cast<std::size_t>(j)];
            const double sd = column_sd(phi_all.col(j));
            const double mean = phi_all.col(j).mean();
            if (term != "1" && sd <= 1e-12 * (1.0 + std::fabs(mean))) {
                fit.trace_.warnings.push_back("dropped degenerate basis term '" + term + "'");
                continue;
            }
            kept.push_back(term);
            kept_idx.push_back(j);
        }
        if (kept.empty()) throw validation_error("regressor: all basis terms degenerate");
        const auto q = static_cast<Eigen::Index>(kept.size());
        Eigen::MatrixXd phi(M, q);
        for (Eigen::Index j = 0; j < q; ++j) phi.col(j) = phi_all.col(kept_idx[static_cast<std::size_t>(j)]);

        // expanded feature-payoff design, column (j,k) = phi_j * Y_k,
        // equilibrated to unit RMS per column
        Eigen::MatrixXd design(M, q * n1);
        for (Eigen::Index j = 0; j < q; ++j)
            for (Eigen::Index k = 0; k < n1; ++k)
                design.col(j * n1 + k) = phi.col(j).cwiseProduct(panel.next_payoffs.col(k));
        Eigen::VectorXd col_scale(q * n1);
        for (Eigen::Index cidx = 0; cidx < design.cols(); ++cidx) {
            const double rms = std::sqrt(design.col(cidx).squaredNorm() / static_cast<double>(M));
            col_scale(cidx) = rms > 1e-300 ? rms : 1.0;
            design.col(cidx) /= col_scale(cidx);
        }

        Eigen::VectorXd beta;
        switch (loss.kind) {
        case LossKind::Quadratic: beta = solve_ols(design, panel.targets); break;
        case LossKind::KoenkerBassett: {
            const SolveResult r = solve_quantile(design, panel.targets, loss.level);
            if (!r.converged)
                throw nonconvergence_error("fit: quantile solver did not converge");
            beta = r.beta;
            break;
        }
        case LossKind::Expectile:
            beta = solve_expectile(design, panel.targets, loss.level).beta;
            break;
        }
        beta = beta.cwiseQuotient(col_scale);

        fit.basis_terms_ = kept;
        fit.lin_coeff_.resize(q, n1);
        for (Eigen::Index j = 0; j < q; ++j)
            for (Eigen::Index k = 0; k < n1; ++k) fit.lin_coeff_(j, k) = beta(j * n1 + k);

        // risk-free bias polish via the constant term, if present
        auto it = std::find(fit.basis_terms_.begin(), fit.basis_terms_.end(), "1");
        const double y0 = panel.next_payoffs.col(0).mean();
        const double y0_dev = (panel.next_payoffs.col(0).array() - y0).abs().maxCoeff();
        if (it != fit.basis_terms_.end() && y0_dev <= 1e-9 * (1.0 + std::fabs(y0))) {
            const Eigen::Index j1 = std::distance(fit.basis_terms_.begin(), it);
            const Eigen::MatrixXd pred = fit.predict_all(panel.features);
            const Eigen::VectorXd r =
                panel.targets - pred.cwiseProduct(panel.next_payoffs).rowwise().sum();
            fit.lin_coeff_(j1, 0) += riskfree_shift(r, loss) / y0;
        }

        const Eigen::MatrixXd pred = fit.predict_all(panel.features);
        const Eigen::VectorXd r =
            panel.targets - pred.cwiseProduct(panel.next_payoffs).rowwise().sum();
        LossSpec eval_loss = loss;
        eval_loss.smoothing = 0.0;
        double obj = 0.0;
        for (Eigen::Index i = 0; i < M; ++i) obj += loss_eval(eval_loss, r(i));
        fit.trace_.final_objective = obj / static_cast<double>(M);
        fit.trace_.converged = true;
        return fit;
    }

    // ------------------------------------------------------------- MLP
    // input standardization; constant features map to zero
    for (Eigen::Index j = 0; j < panel.features.cols(); ++j) {
        const double mean = panel.features.col(j).mean();
        const double sd = column_sd(panel.features.col(j));
        fit.norm_mean_(j) = mean;
        if (sd <= 1e-12 * (1.0 + std::fabs(mean))) {
            fit.norm_scale_(j) = 1.0;
            fit.trace_.warnings.push_back("feature " + std::to_string(j + 1) +
                                          " has zero variance; standardized to zero");
        } else {
            fit.norm_scale_(j) = sd;
        }
    }
    Eigen::MatrixXd Xn = panel.features;
    Xn.rowwise() -= fit.norm_mean_.transpose();
    Xn.array().rowwise() /= fit.norm_scale_.transpose().array();

    std::mt19937_64 engine(spec.training.seed);
    auto next_u64 = [&engine]() { return engine(); };
    auto normal_draw = [&]() {
        const double u = (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
        return norm_quantile(u);
    };
    std::vector<int> widths;
    widths.push_back(static_cast<int>(panel.features.cols()));
    for (int h : spec.hidden) widths.push_back(h);
    widths.push_back(static_cast<int>(n1));

    // usable warm-start network: same architecture, trained on the same
    // feature/payoff shapes
    const FittedRegressor* init = nullptr;
    if (warm_from && warm_from->spec_.kind == RegressorKind::Mlp &&
        warm_from->net_.W.size() + 1 == widths.size()) {
        bool same = true;
        for (std::size_t l = 0; l + 1 < widths.size(); ++l)
            same &= warm_from->net_.W[l].cols() == widths[l] &&
                    warm_from->net_.W[l].rows() == widths[l + 1];
        if (same) init = warm_from;
    }

    MlpModel net;
    Eigen::VectorXd r0;
    if (init) {
        net = init->net_;
        const Eigen::MatrixXd out0 = net.forward(Xn);
        r0 = panel.targets - out0.cwiseProduct(panel.next_payoffs).rowwise().sum();
        // re-centre the risk-free bias for this loss before training
        const double y0 = panel.next_payoffs.col(0).mean();
        const double y0_dev = (panel.next_payoffs.col(0).array() - y0).abs().maxCoeff();
        if (y0_dev <= 1e-9 * (1.0 + std::fabs(y0))) {
            const double shift = riskfree_shift(r0, loss) / y0;
            net.b.back()(0) += shift;
            r0.array() -= shift * y0;
        }
    } else {
        // He-style seeded init; output layer near the best constant strategy
        const Eigen::VectorXd warm = constant_strategy(panel.next_payoffs, panel.targets, loss);
        r0 = panel.targets - panel.next_payoffs * warm;
        for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
            const int in = widths[l], out = widths[l + 1];
            const bool is_output = (l + 2 == widths.size());
            const double sd = std::sqrt(2.0 / in) * (is_output ? 0.1 : 1.0);
            Eigen::MatrixXd w(out, in);
            for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = sd * normal_draw();
            net.W.push_back(std::move(w));
            Eigen::VectorXd bias = Eigen::VectorXd::Zero(out);
            if (is_output) bias = warm;
            net.b.push_back(std::move(bias));
        }
    }
    const double scale = std::max(column_sd(r0), 1e-12 * (1.0 + panel.targets.cwiseAbs().mean()));

    LossSpec train_loss = loss;
    if (loss.kind == LossKind::KoenkerBassett && train_loss.smoothing <= 0.0)
        train_loss.smoothing = 1e-3 * scale;

    std::vector<double> params = net.flat_params();
    AdamState adam;
    adam.init(params.size());

    const int B = std::min<int>(spec.training.batch_size, static_cast<int>(M));
    const auto steps_per_epoch = static_cast<long>((M + B - 1) / B);
    const long total_steps = steps_per_epoch * spec.training.epochs;

    std::vector<Eigen::Index> order(static_cast<std::size_t>(M));
    std::iota(order.begin(), order.end(), 0);

    double best_obj = net.objective(Xn, panel.next_payoffs, panel.targets, train_loss);
    std::vector<double> best_params = params;
    double prev_obj = best_obj;
    int rising_epochs = 0, epochs_since_best = 0, epochs_run = 0;

    Eigen::MatrixXd Xb(B, Xn.cols()), Yb(B, n1);
    Eigen::VectorXd tb(B);
    long step = 0;
    for (int epoch = 0; epoch < spec.training.epochs; ++epoch) {
        deterministic_shuffle(order.data(), order.size(), next_u64);
        for (Eigen::Index start = 0; start < M; start += B) {
            const Eigen::Index nb = std::min<Eigen::Index>(B, M - start);
            for (Eigen::Index i = 0; i < nb; ++i) {
                const Eigen::Index row = order[static_cast<std::size_t>(start + i)];
                Xb.row(i) = Xn.row(row);
                Yb.row(i) = panel.next_payoffs.row(row);
                tb(i) = panel.targets(row);
            }
            const auto grads = net.objective_gradient(Xb.topRows(nb), Yb.topRows(nb),
                                                      tb.head(nb), train_loss);
            const double lr = spec.training.step_size * 0.5 *
                              (1.0 + std::cos(M_PI * static_cast<double>(step) /
                                              static_cast<double>(total_steps)));
            adam.update(params, grads, lr);
            net.set_flat_params(params);
            ++step;
        }
        ++epochs_run;
        const double obj = net.objective(Xn, panel.next_payoffs, panel.targets, train_loss);
        if (obj < best_obj) {
            best_obj = obj;
            best_params = params;
            epochs_since_best = 0;
        } else {
            ++epochs_since_best;
        }
        // count only meaningful rises; plateau noise is not divergence
        rising_epochs = (obj > prev_obj * (1.0 + 1e-6)) ? rising_epochs + 1 : 0;
        prev_obj = obj;
        if (rising_epochs >= 5)
            throw nonconvergence_error("fit: training objective rose 5 consecutive epochs");
        if (epochs_since_best > spec.training.patience) break;
    }

    net.set_flat_params(best_params);

    // risk-free bias polish: exact coordinate step on the output bias
    const double y0 = panel.next_payoffs.col(0).mean();
    const double y0_dev = (panel.next_payoffs.col(0).array() - y0).abs().maxCoeff();
    if (y0_dev <= 1e-9 * (1.0 + std::fabs(y0))) {
        const Eigen::MatrixXd out = net.forward(Xn);
        const Eigen::VectorXd r =
            panel.targets - out.cwiseProduct(panel.next_payoffs).rowwise().sum();
        net.b.back()(0) += riskfree_shift(r, loss) / y0;
    }

    LossSpec eval_loss = loss;
    eval_loss.smoothing = 0.0;
    fit.net_ = std::move(net);
    fit.trace_.final_objective =
        fit.net_.objective(Xn, panel.next_payoffs, panel.targets, eval_loss);
    fit.trace_.epochs_run = epochs_run;
    fit.trace_.converged = true;
    return fit;
}

// ----------------------------------------------------------- prediction

Eigen::VectorXd FittedRegressor::predict(const Eigen::VectorXd& state) const {
    if (state.size() != norm_mean_.size())
        throw validation_error("predict: state dimension mismatch");
    Eigen::MatrixXd one(1, state.size());
    one.row(0) = state.transpose();
    return predict_all(one).row(0).transpose();
}

Eigen::MatrixXd FittedRegressor::predict_all(const Eigen::MatrixXd& features) const {
    if (features.cols() != norm_mean_.size())
        throw validation_error("predict: state dimension mismatch");
    if (spec_.kind == RegressorKind::Linear) {
        const Eigen::MatrixXd phi = evaluate_basis(basis_terms_, features);
        return phi * lin_coeff_;
    }
    Eigen::MatrixXd Xn = features;
    Xn.rowwise() -= norm_mean_.transpose();
    Xn.array().rowwise() /= norm_scale_.transpose().array();
    return net_.forward(Xn);
}

void FittedRegressor::shift_riskfree_units(double delta) {
    if (spec_.kind == RegressorKind::Linear) {
        auto it = std::find(basis_terms_.begin(), basis_terms_.end(), "1");
        if (it == basis_terms_.end())
            throw validation_error("shift_riskfree_units: no constant basis term");
        lin_coeff_(std::distance(basis_terms_.begin(), it), 0) += delta;
    } else {
        net_.b.back()(0) += delta;
    }
}

// ------------------------------------------------------------ save/load

std::string FittedRegressor::save_json() const {
    nlohmann::json j;
    j["format"] = "insurval-regressor";
    j["version"] = 1;
    j["kind"] = spec_.kind == RegressorKind::Linear ? "linear" : "mlp";
    j["n_outputs"] = n_outputs_;
    j["norm_mean"] = std::vector<double>(norm_mean_.data(), norm_mean_.data() + norm_mean_.size());
    j["norm_scale"] =
        std::vector<double>(norm_scale_.data(), norm_scale_.data() + norm_scale_.size());
    j["training"] = {{"epochs", spec_.training.epochs},
                     {"batch_size", spec_.training.batch_size},
                     {"step_size", spec_.training.step_size},
                     {"seed", spec_.training.seed},
                     {"patience", spec_.training.patience}};
    if (spec_.kind == RegressorKind::Linear) {
        j["basis"] = basis_terms_;
        std::vector<std::vector<double>> coeff(static_cast<std::size_t>(lin_coeff_.rows()));
        for (Eigen::Index r = 0; r < lin_coeff_.rows(); ++r)
            for (Eigen::Index c = 0; c < lin_coeff_.cols(); ++c)
                coeff[static_cast<std::size_t>(r)].push_back(lin_coeff_(r, c));
        j["coeff"] = coeff;
    } else {
        j["hidden"] = spec_.hidden;
        nlohmann::json layers = nlohmann::json::array();
        for (std::size_t l = 0; l < net_.W.size(); ++l) {
            nlohmann::json layer;
            layer["rows"] = net_.W[l].rows();
            layer["cols"] = net_.W[l].cols();
            layer["w"] = std::vector<double>(net_.W[l].data(), net_.W[l].data() + net_.W[l].size());
            layer["b"] = std::vector<double>(net_.b[l].data(), net_.b[l].data() + net_.b[l].size());
            layers.push_back(std::move(layer));
        }
        j["layers"] = std::move(layers);
    }
    j["trace"] = {{"final_objective", trace_.final_objective},
                  {"epochs_run", trace_.epochs_run},
                  {"converged", trace_.converged}};
    return j.dump(2);
}

FittedRegressor FittedRegressor::load_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.value("format", "") != "insurval-regressor" || j.value("version", 0) != 1)
        throw validation_error("load: not a version-1 regressor dump");
    FittedRegressor fit;
    fit.n_outputs_ = j.at("n_outputs").get<Eigen::Index>();
    const auto nm = j.at("norm_mean").get<std::vector<double>>();
    const auto ns = j.at("norm_scale").get<std::vector<double>>();
    fit.norm_mean_ = Eigen::Map<const Eigen::VectorXd>(nm.data(), static_cast<Eigen::Index>(nm.size()));
    fit.norm_scale_ = Eigen::Map<const Eigen::VectorXd>(ns.data(), static_cast<Eigen::Index>(ns.size()));
    const auto& tr = j.at("training");
    fit.spec_.training = {tr.at("epochs"), tr.at("batch_size"), tr.at("step_size"),
                          tr.at("seed"), tr.at("patience")};
    if (j.at("kind") == "linear") {
        fit.spec_.kind = RegressorKind::Linear;
        fit.basis_terms_ = j.at("basis").get<std::vector<std::string>>();
        fit.spec_.feature_basis = fit.basis_terms_;
        const auto coeff = j.at("coeff").get<std::vector<std::vector<double>>>();
        fit.lin_coeff_.resize(static_cast<Eigen::Index>(coeff.size()), fit.n_outputs_);
        for (std::size_t r = 0; r < coeff.size(); ++r)
            for (Eigen::Index c = 0; c < fit.n_outputs_; ++c)
                fit.lin_coeff_(static_cast<Eigen::Index>(r), c) = coeff[r][static_cast<std::size_t>(c)];
    } else {
        fit.spec_.kind = RegressorKind::Mlp;
        fit.spec_.hidden = j.at("hidden").get<std::vector<int>>();
        for (const auto& layer : j.at("layers")) {
            const auto rows = layer.at("rows").get<Eigen::Index>();
            const auto cols = layer.at("cols").get<Eigen::Index>();
            const auto wv = layer.at("w").get<std::vector<double>>();
            const auto bv = layer.at("b").get<std::vector<double>>();
            Eigen::MatrixXd w(rows, cols);
            std::copy(wv.begin(), wv.end(), w.data());
            Eigen::VectorXd bb(rows);
            std::copy(bv.begin(), bv.end(), bb.data());
            fit.net_.W.push_back(std::move(w));
            fit.net_.b.push_back(std::move(bb));
        }
    }
    const auto& t = j.at("trace");
    fit.trace_.final_objective = t.at("final_objective");
    fit.trace_.epochs_run = t.at("epochs_run");
    fit.trace_.converged = t.at("converged");
    return fit;
}

} // namespace insurval
