#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace smoothavg {

/// Worker count for a requested cap; 0 means hardware concurrency.
inline unsigned resolve_threads(unsigned requested) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    return requested == 0 ? hw : requested;
}

/// Calls fn(i) for i in [0, n) on up to `threads` workers.  fn writes into
/// index-addressed storage, so results never depend on scheduling.  The first
/// exception (lowest index) is rethrown after all workers join.
template <class Fn>
void for_each_index(std::size_t n, unsigned threads, Fn&& fn) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::exception_ptr first;
    std::size_t first_index = n;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mu);
                    if (i < first_index) {
                        first_index = i;
                        first = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first) std::rethrow_exception(first);
}

}  // namespace smoothavg
