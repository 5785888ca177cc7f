// parallel.hpp — deterministic worker pool for independent index ranges.
// Callers write results into per-index slots and reduce in a fixed order, so
// outputs are identical for any thread count.

#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "dressim/errors.hpp"

namespace dressim {

// 0 resolves to the hardware concurrency (at least 1).
inline int resolve_thread_count(int threads) {
    if (threads < 0) throw ContractViolation("thread count must be nonnegative");
    if (threads != 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

inline void parallel_for(long n, int threads, const std::function<void(long)>& body) {
    if (n <= 0) return;
    const int workers = std::min<long>(resolve_thread_count(threads), n);
    if (workers <= 1) {
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<long> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    auto run = [&] {
        while (true) {
            const long i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace dressim
