#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace finrot {

/// Resolve a thread-count request: 0 means "use hardware concurrency".
inline unsigned effective_threads(unsigned requested) {
    if (requested != 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

/// Run `fn(begin, end)` over [0, count) split into contiguous chunks, one per
/// worker. Each index must be computable independently; the partitioning is a
/// pure function of (count, threads), so results do not depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    threads = effective_threads(threads);
    std::size_t workers = std::min<std::size_t>(threads, count);
    if (workers <= 1) {
        if (count > 0) fn(std::size_t{0}, count);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        std::size_t begin = w * chunk;
        std::size_t end = std::min(begin + chunk, count);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace finrot
