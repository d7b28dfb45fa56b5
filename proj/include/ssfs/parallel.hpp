#pragma once
#include <cstdlib>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace ssfs {

// Worker count resolution: explicit positive request wins, then the
// SSFS_THREADS environment variable, then 1.
inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SSFS_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

// Runs fn(i) for i in [0,n) on `threads` workers over static contiguous
// chunks. Each index is processed exactly once and workers share no state,
// so results are identical for any thread count. The first exception thrown
// by any worker is rethrown after all workers join.
inline void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    if (n <= 0) return;
    const int t = std::min(std::max(threads, 1), n);
    if (t == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(t));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(t));
    for (int w = 0; w < t; ++w) {
        const int lo = static_cast<int>(static_cast<long long>(n) * w / t);
        const int hi = static_cast<int>(static_cast<long long>(n) * (w + 1) / t);
        workers.emplace_back([lo, hi, w, &fn, &errors] {
            try {
                for (int i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& th : workers) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace ssfs
