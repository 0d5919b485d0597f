#ifndef TCDLR_PARALLEL_HPP
#define TCDLR_PARALLEL_HPP

#include <algorithm>
#include <thread>
#include <vector>

namespace tcdlr {

// run fn(i) for i in [0, n); work items must be independent
template <typename Fn>
void parallel_for(int n, int threads, Fn&& fn)
{
    threads = std::min(std::max(threads, 1), n);
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (int i = t; i < n; i += threads) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace tcdlr

#endif
