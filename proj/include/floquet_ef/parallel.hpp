// parallel.hpp — deterministic parallel map over an index range

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace floquet_ef {

inline unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

/// Calls fn(i) for i in [0, n) on up to `threads` workers. Results must be written to
/// per-index slots by fn. If any call throws, the exception from the lowest failing index
/// is rethrown after all workers stop.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    threads = std::max(1u, std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> lowest_failure{n};

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            // Indices below the lowest failure so far still run, so the reported
            // failure is the lowest failing index regardless of scheduling.
            if (i > lowest_failure.load()) continue;
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
                std::size_t cur = lowest_failure.load();
                while (i < cur && !lowest_failure.compare_exchange_weak(cur, i)) {
                }
            }
        }
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace floquet_ef
