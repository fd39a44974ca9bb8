#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pmaplab {

// Width of parallel maps; PMAPLAB_THREADS overrides the hardware count.
inline int thread_count() {
    if (const char* s = std::getenv("PMAPLAB_THREADS")) {
        int v = std::atoi(s);
        if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

// Calls fn(i) for i in [0, count). Results must be written by index so the
// outcome does not depend on scheduling. The exception from the smallest
// failing index is rethrown.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    int width = std::min<std::size_t>(thread_count(), count);
    if (width <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::size_t fail_index = count;
    std::exception_ptr fail;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (i < fail_index) {
                    fail_index = i;
                    fail = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < width; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (fail) std::rethrow_exception(fail);
}

template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, Fn&& fn) {
    std::vector<T> out(count);
    parallel_for(count, [&](std::size_t i) { out[i] = fn(i); });
    return out;
}

} // namespace pmaplab
