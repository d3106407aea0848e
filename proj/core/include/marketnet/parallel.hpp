#ifndef MARKETNET_PARALLEL_HPP
#define MARKETNET_PARALLEL_HPP

#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace marketnet {

/// Run fn(i) for i in [0, n). Work items must write to disjoint state; the
/// results must not depend on scheduling. Nested calls degrade to serial.
/// n_threads == 0 picks hardware_concurrency.
template <typename Fn>
void parallel_for(std::int64_t n, Fn&& fn, unsigned n_threads = 0) {
    thread_local bool inside = false;
    if (n <= 0) return;
    if (n_threads == 0) n_threads = std::thread::hardware_concurrency();
    if (n_threads <= 1 || n == 1 || inside) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    if (static_cast<std::int64_t>(n_threads) > n) n_threads = static_cast<unsigned>(n);

    std::atomic<std::int64_t> next{0};
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        inside = true;
        while (!failed.load(std::memory_order_relaxed)) {
            const std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) break;
            try {
                fn(i);
            } catch (...) {
                if (!failed.exchange(true)) first_error = std::current_exception();
                break;
            }
        }
        inside = false;
    };

    std::vector<std::thread> pool;
    pool.reserve(n_threads - 1);
    for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace marketnet

#endif  // MARKETNET_PARALLEL_HPP
