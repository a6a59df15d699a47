#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace imstark {

// Worker count: hardware concurrency, capped by IMSTARK_THREADS when set.
inline int max_threads() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("IMSTARK_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1 && v < hw) return static_cast<int>(v);
        if (end != env && v >= 1) return hw < static_cast<int>(v) ? hw : static_cast<int>(v);
    }
    return hw;
}

// Runs fn(i) for i in [0, n). Work is distributed over threads but results
// must be written to index-addressed slots by the caller, so aggregation
// order never depends on scheduling.
template <typename Fn>
void parallel_for(int n, Fn&& fn) {
    int nthreads = max_threads();
    if (nthreads > n) nthreads = n;
    if (nthreads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error = nullptr;
    std::mutex err_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(nthreads));
    for (int t = 0; t < nthreads; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace imstark
