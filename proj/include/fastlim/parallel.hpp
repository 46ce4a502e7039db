#pragma once

/**
 * @file parallel.hpp
 * @brief Bounded worker pool over an index range. Results must be written to
 *        preallocated per-index slots so aggregation order never depends on
 *        scheduling.
 */

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace fastlim {

// Runs fn(i) for i in [0, n) on up to `workers` threads. The first exception
// wins, remaining work is abandoned, and the exception is rethrown here.
template <typename Fn>
inline void parallel_for(int n, int workers, Fn&& fn) {
    workers = std::max(1, std::min(workers, n));
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int i; (i = next.fetch_add(1)) < n;) fn(i);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
                next.store(n);
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace fastlim
