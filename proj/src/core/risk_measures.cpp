#include "risk_measures.hpp"

#include "common.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace insurval {

namespace {

void check_level(double a, const char* what) {
    if (!(a > 0.0 && a < 1.0))
        throw validation_error(std::string(what) + ": level must lie in (0,1)");
}

// values sorted ascending, paired with weights; ties broken by index
struct SortedSample {
    std::vector<double> x;
    std::vector<double> w;
};

SortedSample sort_sample(const Sample& s) {
    const std::size_t n = s.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return s.values()[a] < s.values()[b]; });
    SortedSample out;
    out.x.reserve(n);
    out.w.reserve(n);
    for (std::size_t i : idx) {
        out.x.push_back(s.values()[i]);
        out.w.push_back(s.weight(i));
    }
    return out;
}

} // namespace

double var(const Sample& sample, double alpha) {
    check_level(alpha, "var");
    const SortedSample s = sort_sample(sample);
    double cum = 0.0;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        cum += s.w[i];
        if (cum >= alpha - 1e-15) return s.x[i];
    }
    return s.x.back();
}

double tvar(const Sample& sample, double alpha) {
    check_level(alpha, "tvar");
    const SortedSample s = sort_sample(sample);
    double integral = 0.0;
    double cum_prev = 0.0;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        const double cum = cum_prev + s.w[i];
        const double lo = std::max(alpha, cum_prev);
        if (cum > lo) integral += s.x[i] * (cum - lo);
        cum_prev = cum;
    }
    // cum_prev is 1 up to rounding; normalize by the actual tail mass
    const double tail = cum_prev - alpha;
    if (tail <= 0.0) return s.x.back();
    return integral / tail;
}

double dtvar(const Sample& sample, double alpha) {
    return tvar(sample, alpha) - sample.mean();
}

double expectile(const Sample& sample, double tau) {
    check_level(tau, "expectile");
    const std::size_t n = sample.size();
    double lo = sample.values()[0], hi = sample.values()[0];
    for (double v : sample.values()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (lo == hi) return lo;
    const double scale = std::max(std::fabs(lo), std::fabs(hi));
    const double tol = 1e-10 * scale;

    // f is strictly decreasing in c with f(lo) >= 0 >= f(hi)
    auto f = [&](double c) {
        double up = 0.0, down = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = sample.values()[i] - c;
            if (d > 0.0)
                up += sample.weight(i) * d;
            else
                down += sample.weight(i) * (-d);
        }
        return tau * up - (1.0 - tau) * down;
    };

    int iter = 0;
    const int cap = 400;
    while (hi - lo > tol) {
        if (++iter > cap)
            throw nonconvergence_error("expectile: bisection failed to reach tolerance");
        const double mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double kb_error(const Sample& sample, double alpha) {
    check_level(alpha, "kb_error");
    const double ratio = alpha / (1.0 - alpha);
    double acc = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double x = sample.values()[i];
        acc += sample.weight(i) * (x > 0.0 ? ratio * x : -x);
    }
    return acc;
}

} // namespace insurval
