#include "loss.hpp"

#include "common.hpp"

#include <cmath>

namespace insurval {

LossSpec LossSpec::quadratic() { return LossSpec{LossKind::Quadratic, 0.5, 0.0}; }

LossSpec LossSpec::koenker_bassett(double alpha, double smoothing) {
    LossSpec s{LossKind::KoenkerBassett, alpha, smoothing};
    s.validate();
    return s;
}

LossSpec LossSpec::expectile(double tau) {
    LossSpec s{LossKind::Expectile, tau, 0.0};
    s.validate();
    return s;
}

void LossSpec::validate() const {
    if (kind != LossKind::Quadratic && !(level > 0.0 && level < 1.0))
        throw validation_error("LossSpec: level must lie in (0,1)");
    if (!(smoothing >= 0.0) || !std::isfinite(smoothing))
        throw validation_error("LossSpec: smoothing must be nonnegative");
}

std::string LossSpec::name() const {
    switch (kind) {
    case LossKind::Quadratic: return "quadratic";
    case LossKind::KoenkerBassett: return "kb";
    case LossKind::Expectile: return "expectile";
    }
    return "?";
}

double loss_eval(const LossSpec& loss, double x) {
    switch (loss.kind) {
    case LossKind::Quadratic:
        return x * x;
    case LossKind::KoenkerBassett: {
        const double a = loss.level / (1.0 - loss.level); // positive-side slope
        const double eps = loss.smoothing;
        if (eps > 0.0 && std::fabs(x) < eps) {
            // quadratic cap matched in value and slope at +-eps
            const double A = (a + 1.0) / (4.0 * eps);
            const double B = 0.5 * (a - 1.0);
            const double C = 0.25 * eps * (a + 1.0);
            return A * x * x + B * x + C;
        }
        return x > 0.0 ? a * x : -x;
    }
    case LossKind::Expectile: {
        const double t = loss.level;
        return x > 0.0 ? t * x * x : (1.0 - t) * x * x;
    }
    }
    return 0.0;
}

double loss_subgradient(const LossSpec& loss, double x) {
    switch (loss.kind) {
    case LossKind::Quadratic:
        return 2.0 * x;
    case LossKind::KoenkerBassett: {
        const double a = loss.level / (1.0 - loss.level);
        const double eps = loss.smoothing;
        if (eps > 0.0 && std::fabs(x) < eps) {
            const double A = (a + 1.0) / (4.0 * eps);
            const double B = 0.5 * (a - 1.0);
            return 2.0 * A * x + B;
        }
        if (x > 0.0) return a;
        if (x < 0.0) return -1.0;
        return 0.0; // kink: 0 lies in [-1, a]
    }
    case LossKind::Expectile: {
        const double t = loss.level;
        return x > 0.0 ? 2.0 * t * x : 2.0 * (1.0 - t) * x;
    }
    }
    return 0.0;
}

} // namespace insurval
