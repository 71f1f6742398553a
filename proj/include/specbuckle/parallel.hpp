#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace specbuckle {

/// Worker count used by the enumeration routines. SPECBUCKLE_THREADS caps it;
/// otherwise the hardware concurrency is used.
inline std::size_t default_threads() {
    std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SPECBUCKLE_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap >= 1) hw = std::min<std::size_t>(hw, static_cast<std::size_t>(cap));
        } catch (const std::exception&) {
            // malformed value: ignore the cap
        }
    }
    return hw;
}

/// Runs fn(i) for i in [0, n). Indices are handed out dynamically, so callers
/// must not depend on execution order. The first exception thrown by any task
/// is rethrown on the calling thread after all workers have joined.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, std::size_t threads = default_threads()) {
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace specbuckle
