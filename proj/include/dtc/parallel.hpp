// parallel.hpp — Index-parallel loop with deterministic result placement

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace dtc {

// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index writes only its own
// slot, so results do not depend on scheduling. The first exception (lowest index) is rethrown.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::size_t err_index = n;
    std::exception_ptr err;
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(err_mutex);
                if (i < err_index) {
                    err_index = i;
                    err = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace dtc
