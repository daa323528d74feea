#include "sample.hpp"

#include "common.hpp"

#include <cmath>

namespace insurval {

namespace {

void check_values(const std::vector<double>& v) {
    if (v.empty()) throw validation_error("Sample: empty value set");
    for (double x : v)
        if (!std::isfinite(x)) throw validation_error("Sample: non-finite value");
}

} // namespace

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
    check_values(values_);
}

Sample::Sample(std::vector<double> values, std::vector<double> weights)
    : values_(std::move(values)), weights_(std::move(weights)) {
    check_values(values_);
    if (weights_.empty()) return;
    if (weights_.size() != values_.size())
        throw validation_error("Sample: weights length differs from values");
    double sum = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0) || !std::isfinite(w))
            throw validation_error("Sample: weights must be nonnegative and finite");
        sum += w;
    }
    if (std::fabs(sum - 1.0) > 1e-9)
        throw validation_error("Sample: weights must sum to 1");
    // renormalize away rounding noise
    for (double& w : weights_) w /= sum;
}

double Sample::weight(std::size_t i) const {
    return weights_.empty() ? 1.0 / static_cast<double>(values_.size()) : weights_[i];
}

double Sample::mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) m += weight(i) * values_[i];
    return m;
}

double Sample::stddev() const {
    const double m = mean();
    double v = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const double d = values_[i] - m;
        v += weight(i) * d * d;
    }
    return std::sqrt(v);
}

} // namespace insurval
