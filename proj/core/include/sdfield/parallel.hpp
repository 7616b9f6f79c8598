#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace sdfield {

// Process-wide worker count. All parallel loops in the library are pure maps
// over disjoint outputs, so results are identical for any setting; this only
// controls how much hardware gets used.
inline std::atomic<unsigned>& thread_count_storage() {
    static std::atomic<unsigned> count{0}; // 0 = hardware concurrency
    return count;
}

inline void set_thread_count(unsigned n) { thread_count_storage().store(n); }

inline unsigned thread_count() {
    unsigned n = thread_count_storage().load();
    if (n == 0) {
        n = std::thread::hardware_concurrency();
        if (n == 0) n = 1;
    }
    return n;
}

// Static contiguous partition of [0, n). fn(i) must be safe to call
// concurrently for distinct i.
template <typename Fn>
void parallel_for(size_t n, Fn&& fn) {
    unsigned workers = thread_count();
    if (workers <= 1 || n < 2048) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    if (workers > n) workers = static_cast<unsigned>(n);
    size_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) {
        size_t begin = w * chunk;
        size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] {
            for (size_t i = begin; i < end; ++i) fn(i);
        });
    }
    size_t end0 = std::min(n, chunk);
    for (size_t i = 0; i < end0; ++i) fn(i);
    for (auto& t : pool) t.join();
}

// Order-independent max for gathering march statistics from worker threads.
template <typename T>
void atomic_fetch_max(std::atomic<T>& target, T value) {
    T cur = target.load(std::memory_order_relaxed);
    while (cur < value && !target.compare_exchange_weak(cur, value, std::memory_order_relaxed)) {
    }
}

} // namespace sdfield
