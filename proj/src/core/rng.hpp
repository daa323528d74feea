#ifndef INSURVAL_RNG_HPP
#define INSURVAL_RNG_HPP

#include <cstdint>

namespace insurval {

// Standard normal pdf / cdf / quantile. The quantile uses a rational
// approximation refined by one Halley step against erfc, accurate to
// ~1e-15 over (0,1).
double norm_pdf(double x);
double norm_cdf(double x);
double norm_quantile(double p);

namespace rng {

// splitmix64 finalizer
std::uint64_t mix64(std::uint64_t z);

// Counter-based generator: every variate is a pure function of
// (seed, path, step, driver), so path loops can run in any order or in
// parallel and still produce bit-identical output.
std::uint64_t counter_u64(std::uint64_t seed, std::uint64_t path,
                          std::uint64_t step, std::uint64_t driver);

// uniform in the open interval (0,1)
double counter_uniform(std::uint64_t seed, std::uint64_t path,
                       std::uint64_t step, std::uint64_t driver);

// standard normal via inverse cdf of the counter uniform
double counter_normal(std::uint64_t seed, std::uint64_t path,
                      std::uint64_t step, std::uint64_t driver);

// Binomial(n, p) by inverse transform of u; deterministic walk over the
// pmf in log space so large n stays stable.
long binomial_inverse(double u, long n, double p);

} // namespace rng

// Deterministic in-place Fisher-Yates driven by a caller-supplied u64
// source; avoids implementation-defined std::shuffle sequences.
template <typename T, typename U64Fn>
void deterministic_shuffle(T* data, std::size_t n, U64Fn&& next_u64) {
    if (n < 2) return;
    for (std::size_t i = n - 1; i > 0; --i) {
        // unbiased bounded draw by rejection
        const std::uint64_t bound = i + 1;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        const std::size_t j = static_cast<std::size_t>(x % bound);
        T tmp = data[i];
        data[i] = data[j];
        data[j] = tmp;
    }
}

} // namespace insurval

#endif // INSURVAL_RNG_HPP
