#include "gaussian_model.hpp"

#include "common.hpp"
#include "rng.hpp"

#include <cmath>

namespace insurval {

void GaussianModelParams::validate() const {
    if (!(s0 > 0.0) || !std::isfinite(s0)) throw validation_error("gaussian.s0 must be > 0");
    if (horizon_T < 1) throw validation_error("gaussian.horizon_T must be >= 1");
    if (!(gamma > 0.0)) throw validation_error("gaussian.gamma must be > 0");
    if (!(corr > -1.0 && corr < 1.0)) throw validation_error("gaussian.corr must lie in (-1,1)");
    if (!std::isfinite(kappa)) throw validation_error("gaussian.kappa must be finite");
    if (!(sigma_ret > 0.0)) throw validation_error("gaussian.sigma_ret must be > 0");
    if (n_paths < 2) throw validation_error("gaussian.n_paths must be >= 2");
}

DynamicProblem build_gaussian_problem(const GaussianModelParams& p) {
    p.validate();
    const int T = p.horizon_T;
    const auto M = static_cast<Eigen::Index>(p.n_paths);
    const double mix = std::sqrt(1.0 - p.corr * p.corr);

    DynamicProblem out;
    out.r = 0.0;
    out.prices.assign(static_cast<std::size_t>(T) + 1, Eigen::MatrixXd(M, 2));
    out.features.assign(static_cast<std::size_t>(T), Eigen::MatrixXd(M, 2));
    out.liability.resize(M);

    for (Eigen::Index i = 0; i < M; ++i) {
        double price = 1.0;
        double developed = p.s0;
        out.prices[0](i, 0) = 1.0;
        out.prices[0](i, 1) = price;
        out.features[0](i, 0) = price;
        out.features[0](i, 1) = developed;
        for (int t = 1; t <= T; ++t) {
            const auto path = static_cast<std::uint64_t>(i);
            const double z1 = rng::counter_normal(p.seed, path, static_cast<std::uint64_t>(t), 0);
            const double z2 = rng::counter_normal(p.seed, path, static_cast<std::uint64_t>(t), 1);
            const double ret = 1.0 + p.kappa * p.sigma_ret + p.sigma_ret * z1;
            const double increment = p.gamma * (p.corr * z1 + mix * z2);
            price *= ret;
            developed += increment;
            out.prices[static_cast<std::size_t>(t)](i, 0) = 1.0;
            out.prices[static_cast<std::size_t>(t)](i, 1) = price;
            if (t < T) {
                out.features[static_cast<std::size_t>(t)](i, 0) = price;
                out.features[static_cast<std::size_t>(t)](i, 1) = developed;
            }
        }
        out.liability(i) = developed;
    }
    return out;
}

std::vector<std::string> gaussian_model_basis() { return {"1", "z2", "z1^-1"}; }

} // namespace insurval
