#include "solvers.hpp"

#include "common.hpp"
#include "loss.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <set>
#include <vector>

namespace insurval {

namespace {

Eigen::VectorXd uniform_weights(Eigen::Index m) {
    return Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
}

Eigen::VectorXd effective_weights(const Eigen::MatrixXd& X, const Eigen::VectorXd& w) {
    if (w.size() == 0) return uniform_weights(X.rows());
    if (w.size() != X.rows())
        throw validation_error("solver: weight length differs from row count");
    return w;
}

void check_shapes(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    if (X.rows() != y.size())
        throw validation_error("solver: design and target row counts differ");
    if (X.rows() <= X.cols())
        throw validation_error("solver: need more observations than columns");
}

Eigen::MatrixXd gram(const Eigen::MatrixXd& X, const Eigen::VectorXd& w) {
    return X.transpose() * w.asDiagonal() * X;
}

} // namespace

void check_non_redundant(const Eigen::MatrixXd& X, const Eigen::VectorXd& w) {
    const Eigen::VectorXd ww = effective_weights(X, w);
    const Eigen::MatrixXd G = gram(X, ww);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    const auto& ev = es.eigenvalues();
    const double emin = ev(0);
    const double emax = ev(ev.size() - 1);
    if (emin <= 0.0 || emax / emin > 1e12) {
        Eigen::Index bad = 0;
        es.eigenvectors().col(0).cwiseAbs().maxCoeff(&bad);
        throw validation_error("redundant asset: design column " + std::to_string(bad) +
                               " makes the payoff Gram matrix numerically singular");
    }
}

Eigen::VectorXd solve_ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& w) {
    check_shapes(X, y);
    const Eigen::VectorXd ww = effective_weights(X, w);
    check_non_redundant(X, ww);
    const Eigen::MatrixXd G = gram(X, ww);
    const Eigen::VectorXd b = X.transpose() * ww.cwiseProduct(y);
    return G.ldlt().solve(b);
}

namespace {

double mean_loss(const LossSpec& loss, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                 const Eigen::VectorXd& w, const Eigen::VectorXd& beta) {
    const Eigen::VectorXd r = y - X * beta;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) acc += w(i) * loss_eval(loss, r(i));
    return acc;
}

Eigen::VectorXd loss_gradient(const LossSpec& loss, const Eigen::MatrixXd& X,
                              const Eigen::VectorXd& y, const Eigen::VectorXd& w,
                              const Eigen::VectorXd& beta) {
    const Eigen::VectorXd r = y - X * beta;
    Eigen::VectorXd g = Eigen::VectorXd::Zero(r.size());
    for (Eigen::Index i = 0; i < r.size(); ++i) g(i) = w(i) * loss_subgradient(loss, r(i));
    return -(X.transpose() * g);
}

// Barzilai-Borwein descent on the smoothed objective; returns iterations
// used, beta updated in place.
int bb_descent(const LossSpec& loss, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
               const Eigen::VectorXd& w, Eigen::VectorXd& beta, int max_iter,
               bool* hit_cap) {
    double f = mean_loss(loss, X, y, w, beta);
    Eigen::VectorXd g = loss_gradient(loss, X, y, w, beta);
    Eigen::VectorXd beta_prev = beta, g_prev = g;
    double step = 1.0 / std::max(1.0, g.norm());
    int stall = 0;
    int it = 0;
    for (; it < max_iter; ++it) {
        if (g.norm() <= 1e-14 * (1.0 + std::fabs(f))) break;
        double t = step;
        Eigen::VectorXd cand;
        double f_cand = f;
        bool ok = false;
        for (int bt = 0; bt < 60; ++bt) {
            cand = beta - t * g;
            f_cand = mean_loss(loss, X, y, w, cand);
            if (f_cand <= f - 1e-4 * t * g.squaredNorm()) {
                ok = true;
                break;
            }
            t *= 0.5;
        }
        if (!ok) break; // no descent possible at machine resolution
        beta_prev = beta;
        g_prev = g;
        beta = cand;
        g = loss_gradient(loss, X, y, w, beta);
        const Eigen::VectorXd s = beta - beta_prev;
        const Eigen::VectorXd dg = g - g_prev;
        const double sy = s.dot(dg);
        step = (sy > 1e-300) ? s.squaredNorm() / sy : t * 2.0;
        step = std::clamp(step, 1e-12, 1e12);
        const double decrease = f - f_cand;
        f = f_cand;
        if (decrease <= 1e-12 * (std::fabs(f) + 1e-300)) {
            if (++stall >= 3) break;
        } else {
            stall = 0;
        }
    }
    if (hit_cap) *hit_cap = (it >= max_iter);
    return it;
}

// Enumerates k-subsets of [0, c) while their count stays below `cap`;
// returns false when there are too many.
bool next_combination(std::vector<int>& idx, int c) {
    const int k = static_cast<int>(idx.size());
    int i = k - 1;
    while (i >= 0 && idx[i] == c - k + i) --i;
    if (i < 0) return false;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    return true;
}

double n_choose_k(int n, int k) {
    double v = 1.0;
    for (int i = 0; i < k; ++i) v = v * (n - i) / (i + 1);
    return v;
}

struct BasicCandidate {
    Eigen::VectorXd beta;
    double objective;
};

// Exact-fit solve on the rows named by idx; returns false when the
// subsystem is singular.
bool exact_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const std::vector<int>& rows,
               Eigen::VectorXd& out) {
    const int k = static_cast<int>(rows.size());
    Eigen::MatrixXd A(k, k);
    Eigen::VectorXd b(k);
    for (int i = 0; i < k; ++i) {
        A.row(i) = X.row(rows[i]);
        b(i) = y(rows[i]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    lu.setThreshold(1e-10);
    if (lu.rank() < k) return false;
    out = lu.solve(b);
    return out.allFinite();
}

} // namespace

SolveResult solve_quantile(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double alpha,
                           const Eigen::VectorXd& w) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw validation_error("solve_quantile: alpha must lie in (0,1)");
    check_shapes(X, y);
    const Eigen::VectorXd ww = effective_weights(X, w);
    check_non_redundant(X, ww);

    const Eigen::Index m = X.rows();
    const int k = static_cast<int>(X.cols());
    const LossSpec exact = LossSpec::koenker_bassett(alpha);

    SolveResult res;
    res.beta = solve_ols(X, y, ww);

    // stage the smoothing on the scale of the warm-start residuals
    const Eigen::VectorXd r0 = y - X * res.beta;
    double sd = 0.0, mu = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) mu += ww(i) * r0(i);
    for (Eigen::Index i = 0; i < m; ++i) sd += ww(i) * (r0(i) - mu) * (r0(i) - mu);
    sd = std::sqrt(sd);
    const double scale = std::max(sd, 1e-12 * (1.0 + y.cwiseAbs().mean()));

    bool cap_hit = false;
    for (double eps_mult : {1e-1, 1e-2, 1e-3, 1e-6}) {
        LossSpec smoothed = LossSpec::koenker_bassett(alpha, eps_mult * scale);
        res.iterations += bb_descent(smoothed, X, y, ww, res.beta, 500, &cap_hit);
    }

    // Polish: quantile regression optima interpolate k points exactly, so
    // refit on small-|residual| subsets and keep the best exact objective.
    Eigen::VectorXd r = y - X * res.beta;
    std::vector<int> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return std::fabs(r(a)) < std::fabs(r(b)); });
    const int c = static_cast<int>(std::min<Eigen::Index>(m, std::max(2 * k, k + 6)));

    double best_obj = mean_loss(exact, X, y, ww, res.beta);
    Eigen::VectorXd best_beta = res.beta;
    std::vector<BasicCandidate> near_ties;

    auto consider = [&](const Eigen::VectorXd& cand) {
        const double obj = mean_loss(exact, X, y, ww, cand);
        if (obj < best_obj - 1e-14 * (1.0 + best_obj)) {
            best_obj = obj;
            best_beta = cand;
        }
        near_ties.push_back({cand, obj});
    };

    if (n_choose_k(c, k) <= 400.0) {
        std::vector<int> idx(static_cast<std::size_t>(k));
        std::iota(idx.begin(), idx.end(), 0);
        do {
            std::vector<int> rows(static_cast<std::size_t>(k));
            for (int i = 0; i < k; ++i) rows[static_cast<std::size_t>(i)] = order[idx[i]];
            Eigen::VectorXd cand;
            if (exact_fit(X, y, rows, cand)) consider(cand);
        } while (next_combination(idx, c));
    } else {
        // greedy hill-climb over single swaps of the active set
        std::vector<int> active(order.begin(), order.begin() + k);
        Eigen::VectorXd cand;
        if (exact_fit(X, y, active, cand)) consider(cand);
        for (int sweep = 0; sweep < 3; ++sweep) {
            bool improved = false;
            for (int slot = 0; slot < k; ++slot) {
                for (int j = k; j < c; ++j) {
                    std::vector<int> trial = active;
                    trial[static_cast<std::size_t>(slot)] = order[j];
                    Eigen::VectorXd tb;
                    if (!exact_fit(X, y, trial, tb)) continue;
                    const double obj = mean_loss(exact, X, y, ww, tb);
                    if (obj < best_obj - 1e-14 * (1.0 + best_obj)) {
                        best_obj = obj;
                        best_beta = tb;
                        active = trial;
                        improved = true;
                        near_ties.push_back({tb, obj});
                    }
                }
            }
            if (!improved) break;
        }
    }

    // flat optimum: several distinct basic solutions tie; return min-norm
    std::vector<const BasicCandidate*> ties;
    for (const auto& t : near_ties)
        if (t.objective <= best_obj + 1e-10 * (1.0 + best_obj)) ties.push_back(&t);
    if (ties.size() > 1) {
        bool distinct = false;
        const BasicCandidate* pick = nullptr;
        double best_norm = std::numeric_limits<double>::infinity();
        for (const auto* t : ties) {
            if ((t->beta - best_beta).lpNorm<Eigen::Infinity>() >
                1e-8 * (1.0 + best_beta.lpNorm<Eigen::Infinity>()))
                distinct = true;
            const double nn = t->beta.norm();
            if (nn < best_norm) {
                best_norm = nn;
                pick = t;
            }
        }
        if (distinct && pick) {
            res.flat_optimum = true;
            best_beta = pick->beta;
            best_obj = pick->objective;
        }
    }

    res.beta = best_beta;
    res.objective = best_obj;
    res.converged = true;
    return res;
}

SolveResult solve_expectile(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double tau,
                            const Eigen::VectorXd& w) {
    if (!(tau > 0.0 && tau < 1.0))
        throw validation_error("solve_expectile: tau must lie in (0,1)");
    check_shapes(X, y);
    const Eigen::VectorXd ww = effective_weights(X, w);
    check_non_redundant(X, ww);

    const Eigen::Index m = X.rows();
    SolveResult res;
    res.beta = solve_ols(X, y, ww);

    std::set<std::vector<std::uint64_t>> seen_patterns;
    const int cap = 500;
    for (int it = 0; it < cap; ++it) {
        const Eigen::VectorXd r = y - X * res.beta;
        Eigen::VectorXd w2(m);
        std::vector<std::uint64_t> pattern((static_cast<std::size_t>(m) + 63) / 64, 0);
        for (Eigen::Index i = 0; i < m; ++i) {
            const bool pos = r(i) > 0.0;
            w2(i) = ww(i) * (pos ? tau : (1.0 - tau));
            if (pos)
                pattern[static_cast<std::size_t>(i) / 64] |= (1ull << (i % 64));
        }
        const Eigen::MatrixXd G = X.transpose() * w2.asDiagonal() * X;
        const Eigen::VectorXd b = X.transpose() * w2.cwiseProduct(y);
        const Eigen::VectorXd beta_new = G.ldlt().solve(b);
        res.iterations = it + 1;
        if ((beta_new - res.beta).norm() <= 1e-8 * (1.0 + res.beta.norm())) {
            res.beta = beta_new;
            res.objective = mean_loss(LossSpec::expectile(tau), X, y, ww, res.beta);
            res.converged = true;
            return res;
        }
        if (!seen_patterns.insert(std::move(pattern)).second)
            throw nonconvergence_error("solve_expectile: IRLS cycle detected");
        res.beta = beta_new;
    }
    throw nonconvergence_error("solve_expectile: IRLS failed to converge");
}

} // namespace insurval
