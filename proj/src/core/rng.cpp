#include "rng.hpp"

#include "common.hpp"

#include <cmath>
#include <limits>

namespace insurval {

double norm_pdf(double x) {
    static const double inv_sqrt_2pi = 0.3989422804014326779;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

double norm_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

namespace {

// Acklam's rational approximation to the standard normal quantile.
double norm_quantile_approx(double p) {
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    static const double plow = 0.02425;

    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

} // namespace

double norm_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw validation_error("norm_quantile: p must lie in (0,1)");
    double x = norm_quantile_approx(p);
    // one Halley refinement against the erfc-based cdf
    const double e = norm_cdf(x) - p;
    const double u = e / norm_pdf(x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

namespace rng {

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t counter_u64(std::uint64_t seed, std::uint64_t path,
                          std::uint64_t step, std::uint64_t driver) {
    // mix the seed on its own first: the raw counter words are small and
    // structured, and xoring them into an unmixed seed lets nearby seeds
    // share draw values across path indices
    std::uint64_t h = mix64(seed ^ 0x9E3779B97F4A7C15ull);
    h = mix64(h ^ (path + 0xD1B54A32D192ED03ull));
    h = mix64(h ^ (step + 0x8CB92BA72F3D8DD7ull));
    h = mix64(h ^ (driver + 0xA24BAED4963EE407ull));
    return mix64(h);
}

double counter_uniform(std::uint64_t seed, std::uint64_t path,
                       std::uint64_t step, std::uint64_t driver) {
    const std::uint64_t x = counter_u64(seed, path, step, driver);
    // 53-bit mantissa, shifted into the open interval
    return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
}

double counter_normal(std::uint64_t seed, std::uint64_t path,
                      std::uint64_t step, std::uint64_t driver) {
    return norm_quantile(counter_uniform(seed, path, step, driver));
}

long binomial_inverse(double u, long n, double p) {
    if (n < 0) throw validation_error("binomial_inverse: n must be >= 0");
    if (!(p >= 0.0 && p <= 1.0))
        throw validation_error("binomial_inverse: p must lie in [0,1]");
    if (n == 0 || p == 0.0) return 0;
    if (p == 1.0) return n;

    // mirror so the walk starts from the short side
    if (p > 0.5) return n - binomial_inverse(1.0 - u, n, 1.0 - p);

    const double logp = std::log(p);
    const double log1mp = std::log1p(-p);
    double logpmf = static_cast<double>(n) * log1mp;
    double cum = std::exp(logpmf);
    long k = 0;
    while (u > cum && k < n) {
        logpmf += std::log(static_cast<double>(n - k)) - std::log(static_cast<double>(k + 1)) +
                  logp - log1mp;
        ++k;
        cum += std::exp(logpmf);
    }
    return k;
}

} // namespace rng

} // namespace insurval
