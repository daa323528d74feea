#ifndef INSURVAL_COMMON_HPP
#define INSURVAL_COMMON_HPP

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace insurval {

// Invalid parameters, malformed configs, bad inputs. Maps to exit code 2.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A solver failed to reach its tolerance. Maps to exit code 3.
class nonconvergence_error : public std::runtime_error {
public:
    explicit nonconvergence_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Runs fn(begin, end) over [0, n) in contiguous chunks, one per worker.
// Chunks are disjoint, so writers to per-index slots need no locking.
void parallel_for_chunks(std::size_t n, unsigned n_threads,
                         const std::function<void(std::size_t, std::size_t)>& fn);

// FNV-1a 64-bit, used for file checksums.
std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t h = 0xcbf29ce484222325ull);

std::string to_hex(std::uint64_t v);

} // namespace insurval

#endif // INSURVAL_COMMON_HPP
