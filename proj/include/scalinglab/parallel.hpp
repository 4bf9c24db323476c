#pragma once

#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace scalinglab {

/// Worker-pool width: hardware concurrency, capped by SCALING_LAB_THREADS.
inline std::size_t worker_count() {
    std::size_t n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("SCALING_LAB_THREADS")) {
        const long cap = std::atol(env);
        if (cap > 0 && static_cast<std::size_t>(cap) < n) n = static_cast<std::size_t>(cap);
    }
    return n;
}

/// Runs fn(task_index) for task_index in [0, num_tasks). Tasks are pulled from
/// a shared counter, so per-task work must derive any randomness from its own
/// index (see derive_seed); results are then independent of scheduling and of
/// the worker count.
inline void run_tasks(std::size_t num_tasks, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min(worker_count(), num_tasks ? num_tasks : 1);
    if (workers <= 1) {
        for (std::size_t i = 0; i < num_tasks; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= num_tasks || failed.load()) break;
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                    break;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failed.load() && error) std::rethrow_exception(error);
}

}
