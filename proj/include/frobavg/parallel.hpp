// Deterministic fork-join helper.
//
// parallel_map runs f(i) for i in [0, n) on `threads` workers and collects the
// results into a vector indexed by i.  Work is handed out through an atomic
// counter (so schedules vary run to run) but every result lands in its own
// slot and reductions happen afterwards in index order -- output is therefore
// byte-identical regardless of thread count.

#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace frobavg {

inline unsigned clamp_threads(unsigned requested) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (requested == 0) return hw;
    return requested < hw ? requested : hw;
}

template <typename T, typename F>
std::vector<T> parallel_map(std::size_t n, unsigned threads, F&& f) {
    std::vector<T> out(n);
    threads = clamp_threads(threads);
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            out[i] = f(i);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return out;
}

}  // namespace frobavg
