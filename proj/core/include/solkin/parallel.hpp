#pragma once

#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace solkin {

// Run fn(begin,end) over [0,n) split into contiguous chunks, one per worker.
// Chunks write disjoint data; results do not depend on the worker count.
// The first exception thrown by any worker is rethrown on the caller.
inline void parallel_for_chunks(int n, int threads,
                                const std::function<void(int, int)>& fn) {
    if (threads <= 1 || n <= 1) {
        fn(0, n);
        return;
    }
    int workers = std::min(threads, n);
    int chunk = (n + workers - 1) / workers;

    std::mutex mu;
    std::exception_ptr first_error;
    auto guarded = [&](int b, int e) {
        try {
            fn(b, e);
        } catch (...) {
            std::scoped_lock lock(mu);
            if (!first_error) first_error = std::current_exception();
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int w = 1; w < workers; ++w) {
        int b = w * chunk, e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back(guarded, b, e);
    }
    guarded(0, std::min(n, chunk));
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace solkin
