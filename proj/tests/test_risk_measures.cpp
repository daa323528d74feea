#include <doctest.h>

#include "common.hpp"
#include "risk_measures.hpp"
#include "rng.hpp"

#include <cmath>
#include <numeric>
#include <vector>

using namespace insurval;

namespace {

Sample one_to_hundred() {
    std::vector<double> v(100);
    std::iota(v.begin(), v.end(), 1.0);
    return Sample(std::move(v));
}

Sample lognormal_sample(double meanlog, double sdlog, std::size_t n, std::uint64_t seed) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = std::exp(meanlog + sdlog * rng::counter_normal(seed, i, 0, 0));
    return Sample(std::move(v));
}

Sample normal_sample(std::size_t n, std::uint64_t seed) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = rng::counter_normal(seed, i, 0, 0);
    return Sample(std::move(v));
}

} // namespace

TEST_SUITE_BEGIN("risk");

TEST_CASE("var is the generalized inverse of the empirical cdf") {
    CHECK(var(one_to_hundred(), 0.95) == 95.0);
    CHECK(var(one_to_hundred(), 0.951) == 96.0);
    CHECK(var(Sample(std::vector<double>(17, 7.0)), 0.3) == 7.0);
    CHECK(var(Sample(std::vector<double>(17, 7.0)), 0.99) == 7.0);
    CHECK_THROWS_AS(var(one_to_hundred(), 0.0), validation_error);
    CHECK_THROWS_AS(var(one_to_hundred(), 1.0), validation_error);
    CHECK_THROWS_AS(Sample(std::vector<double>{}), validation_error);
}

TEST_CASE("var reproduces the lognormal 90% quantile") {
    const Sample s = lognormal_sample(0.1, 0.3, 200000, 99);
    CHECK(var(s, 0.9) == doctest::Approx(1.623).epsilon(0.01 / 1.623));
}

TEST_CASE("tvar equals the exact tail integral on empirical data") {
    CHECK(tvar(one_to_hundred(), 0.95) == doctest::Approx(98.0).epsilon(1e-12));
    CHECK(tvar(Sample(std::vector<double>(9, 3.5)), 0.4) == doctest::Approx(3.5));
    // fractional tail weighting: alpha inside an order-statistic cell
    // X uniform on {1,2}; int_{0.25}^{1} VaR_u du = 1*0.25 + 2*0.5 = 1.25/0.75
    const Sample two(std::vector<double>{1.0, 2.0});
    CHECK(tvar(two, 0.25) == doctest::Approx((0.25 * 1.0 + 0.5 * 2.0) / 0.75).epsilon(1e-12));
}

TEST_CASE("tvar matches the closed-form normal tail expectation") {
    const std::size_t n = 200000;
    const double alpha = 0.95;
    const Sample s = normal_sample(n, 7);
    const double closed = norm_pdf(norm_quantile(alpha)) / (1.0 - alpha);
    // standard error of the tail mean
    std::vector<double> tail;
    const double q = var(s, alpha);
    for (double x : s.values())
        if (x >= q) tail.push_back(x);
    double m = 0.0;
    for (double x : tail) m += x;
    m /= static_cast<double>(tail.size());
    double sd = 0.0;
    for (double x : tail) sd += (x - m) * (x - m);
    sd = std::sqrt(sd / static_cast<double>(tail.size()));
    const double se = sd / std::sqrt(static_cast<double>(tail.size()));
    CHECK(std::fabs(tvar(s, alpha) - closed) < 3.0 * se + 1e-3);
}

TEST_CASE("dtvar subtracts the mean") {
    CHECK(dtvar(one_to_hundred(), 0.95) == doctest::Approx(47.5).epsilon(1e-12));
    CHECK(dtvar(Sample(std::vector<double>(5, -2.0)), 0.9) == doctest::Approx(0.0));
}

TEST_CASE("expectile generalises the mean and solves its first-order condition") {
    const Sample s = normal_sample(5000, 21);
    const double scale = 4.0;
    CHECK(std::fabs(expectile(s, 0.5) - s.mean()) < 1e-10 * scale);
    CHECK(expectile(Sample(std::vector<double>(8, 3.25)), 0.77) == doctest::Approx(3.25));

    // two-point sample {0,1}: hand-solved root at tau = 0.8 is 0.8
    const Sample two(std::vector<double>{0.0, 1.0});
    CHECK(expectile(two, 0.8) == doctest::Approx(0.8).epsilon(1e-9));
    // grid-search verification of the same first-order condition
    double best_c = -1.0, best_val = 1e300;
    for (int k = 0; k <= 10000; ++k) {
        const double c = k / 10000.0;
        const double val = 0.8 * 0.5 * (1.0 - c) * (1.0 - c) + 0.2 * 0.5 * c * c;
        if (val < best_val) {
            best_val = val;
            best_c = c;
        }
    }
    CHECK(best_c == doctest::Approx(0.8).epsilon(1e-3));
}

TEST_CASE("kb error branches and the minimizer identity") {
    CHECK(kb_error(Sample(std::vector<double>{-1.0, -2.0}), 0.3) == doctest::Approx(1.5));
    CHECK(kb_error(Sample(std::vector<double>{-1.0, -2.0}), 0.9) == doctest::Approx(1.5));

    // shifting by the empirical quantile makes KB error equal dTVaR
    const Sample s = one_to_hundred();
    const double alpha = 0.95;
    const double q = var(s, alpha);
    std::vector<double> shifted;
    for (double x : s.values()) shifted.push_back(x - q);
    const Sample sh(std::move(shifted));
    CHECK(kb_error(sh, alpha) == doctest::Approx(dtvar(sh, alpha)).epsilon(1e-12));
    CHECK(kb_error(sh, alpha) >= dtvar(sh, alpha) - 1e-12);
}

TEST_CASE("weighted samples match their replicated uniform equivalents") {
    const Sample weighted(std::vector<double>{1.0, 2.0, 3.0},
                          std::vector<double>{0.2, 0.3, 0.5});
    const Sample replicated(
        std::vector<double>{1.0, 1.0, 2.0, 2.0, 2.0, 3.0, 3.0, 3.0, 3.0, 3.0});
    for (double a : {0.1, 0.25, 0.5, 0.77, 0.95}) {
        CHECK(var(weighted, a) == doctest::Approx(var(replicated, a)).epsilon(1e-12));
        CHECK(tvar(weighted, a) == doctest::Approx(tvar(replicated, a)).epsilon(1e-12));
        CHECK(kb_error(weighted, a) == doctest::Approx(kb_error(replicated, a)).epsilon(1e-12));
    }
    CHECK(expectile(weighted, 0.8) == doctest::Approx(expectile(replicated, 0.8)).epsilon(1e-9));
    CHECK_THROWS_AS(Sample(std::vector<double>{1.0, 2.0}, std::vector<double>{0.2, 0.3}),
                    validation_error);
}

TEST_CASE("translation, homogeneity and ordering invariants") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        std::vector<double> v(400);
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = 3.0 * rng::counter_normal(seed, i, 0, 0) +
                   std::exp(rng::counter_normal(seed, i, 0, 1));
        const Sample s(v);
        const double alpha = 0.7 + 0.29 * rng::counter_uniform(seed, 0, 0, 2);
        const double a = 5.0 * (rng::counter_uniform(seed, 1, 0, 2) - 0.5);
        const double lam = 0.25 + 4.0 * rng::counter_uniform(seed, 2, 0, 2);

        CHECK(var(s, alpha) <= tvar(s, alpha) + 1e-12);

        std::vector<double> vt(v), vs(v);
        for (double& x : vt) x += a;
        for (double& x : vs) x *= lam;
        const Sample st(vt), ss(vs);
        const double scale = 1.0 + std::fabs(tvar(s, alpha));
        CHECK(var(st, alpha) == doctest::Approx(var(s, alpha) + a).epsilon(1e-12));
        CHECK(tvar(st, alpha) == doctest::Approx(tvar(s, alpha) + a).epsilon(1e-12));
        CHECK(std::fabs(dtvar(st, alpha) - dtvar(s, alpha)) < 1e-10 * scale);
        CHECK(expectile(st, alpha) ==
              doctest::Approx(expectile(s, alpha) + a).epsilon(1e-7));
        CHECK(var(ss, alpha) == doctest::Approx(lam * var(s, alpha)).epsilon(1e-12));
        CHECK(tvar(ss, alpha) == doctest::Approx(lam * tvar(s, alpha)).epsilon(1e-12));
        CHECK(std::fabs(dtvar(ss, alpha) - lam * dtvar(s, alpha)) < 1e-10 * scale * lam);
        CHECK(expectile(ss, alpha) ==
              doctest::Approx(lam * expectile(s, alpha)).epsilon(1e-7));
        CHECK(std::fabs(kb_error(ss, alpha) - lam * kb_error(s, alpha)) <
              1e-10 * scale * lam);
        CHECK(std::fabs(expectile(s, 0.5) - s.mean()) < 1e-10 * scale);
    }
}

TEST_SUITE_END();
