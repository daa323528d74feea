#include "common.hpp"

#include <algorithm>
#include <cstdio>

namespace insurval {

void parallel_for_chunks(std::size_t n, unsigned n_threads,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    unsigned hw = std::thread::hardware_concurrency();
    if (n_threads == 0) n_threads = hw ? hw : 1;
    n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, n));
    if (n_threads <= 1) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(n_threads);
    const std::size_t chunk = (n + n_threads - 1) / n_threads;
    for (unsigned w = 0; w < n_threads; ++w) {
        const std::size_t begin = static_cast<std::size_t>(w) * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        workers.emplace_back([=, &fn] { fn(begin, end); });
    }
    for (auto& t : workers) t.join();
}

std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t h) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string to_hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

} // namespace insurval
