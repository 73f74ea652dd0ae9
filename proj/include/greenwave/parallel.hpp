#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace greenwave {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs body(i) for i in [0, n).  Each index writes only its own output
/// slots, so results are identical for any thread count.
inline void parallel_for(int n, int threads, const std::function<void(int)>& body) {
    threads = std::min(resolve_threads(threads), n);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&, w] {
            for (int i = w; i < n; i += threads) body(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace greenwave
