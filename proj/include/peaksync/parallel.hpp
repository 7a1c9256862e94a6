#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace peaksync {

/// Calls fn(i) for every i in [0, count) on up to `threads` workers. Each
/// index runs exactly once; callers write results into slot i so the outcome
/// does not depend on scheduling. The first exception thrown is rethrown.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = count;
            }
        }
    };
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

/// Worker count from an explicit request, else from the environment value, else 1.
inline unsigned resolve_threads(unsigned requested, const char* env_value) {
    if (requested > 0) return requested;
    if (env_value != nullptr) {
        try {
            const long v = std::stol(env_value);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (...) {
        }
    }
    return 1;
}

}  // namespace peaksync
