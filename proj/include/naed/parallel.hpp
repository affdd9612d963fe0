#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace naed {

// Worker count resolution: explicit request > NAED_THREADS > hardware.
inline int resolveThreads(int requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("NAED_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

// Run fn(i) for i in [0, count) on up to `threads` workers.
//
// Work is handed out in fixed chunks claimed atomically, so any reduction
// the caller performs must be written into per-index (or per-chunk) slots
// and folded sequentially afterwards; that keeps results independent of
// the thread count and of scheduling order.
inline void parallelFor(int count, const std::function<void(int)>& fn, int threads = 0,
                        int chunk = 16) {
    const int n = resolveThreads(threads);
    if (count <= 0) return;
    if (n <= 1 || count == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> nextChunk{0};
    const int nChunks = (count + chunk - 1) / chunk;
    std::exception_ptr firstError = nullptr;
    std::atomic<bool> failed{false};
    std::mutex errMutex;

    auto worker = [&]() {
        while (!failed.load(std::memory_order_relaxed)) {
            const int c = nextChunk.fetch_add(1);
            if (c >= nChunks) break;
            const int lo = c * chunk;
            const int hi = std::min(count, lo + chunk);
            try {
                for (int i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(errMutex);
                if (!firstError) firstError = std::current_exception();
                failed.store(true);
            }
        }
    };

    std::vector<std::thread> pool;
    const int nWorkers = std::min(n, nChunks);
    pool.reserve(nWorkers - 1);
    for (int t = 1; t < nWorkers; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (firstError) std::rethrow_exception(firstError);
}

}  // namespace naed
