#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cms {

// Worker count: hardware concurrency capped by the CMS_THREADS environment
// variable.
inline int max_threads() {
    unsigned hw = std::thread::hardware_concurrency();
    int n = hw > 0 ? static_cast<int>(hw) : 1;
    if (const char* env = std::getenv("CMS_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1 && cap < n) n = cap;
    }
    return n;
}

// Runs fn(i) for i in [0, n). Each index owns its output slot, so the result
// is independent of scheduling; if several indices throw, the smallest
// index's exception is rethrown. workers <= 0 means max_threads().
template <typename Fn>
void parallel_for_index(std::size_t n, Fn&& fn, int workers = 0) {
    if (workers <= 0) workers = max_threads();
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::size_t err_index = n;
    std::exception_ptr err;
    auto body = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (i < err_index) {
                    err_index = i;
                    err = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace cms
