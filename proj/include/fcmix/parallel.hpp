#pragma once

#include <atomic>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace fcmix {

/// Run fn(block) for block = 0..n_blocks-1 on a small worker pool and return
/// the results indexed by block. Work is partitioned by block index, never by
/// thread, so the result is identical for any worker count; callers must
/// reduce the returned vector in index order to stay deterministic.
template <class R>
std::vector<R> parallel_blocks(long n_blocks, const std::function<R(long)>& fn) {
    std::vector<R> out(n_blocks);
    if (n_blocks <= 0) return out;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, unsigned(n_blocks));
    if (workers == 1) {
        for (long b = 0; b < n_blocks; ++b) out[b] = fn(b);
        return out;
    }
    std::atomic<long> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const long b = next.fetch_add(1);
                if (b >= n_blocks) return;
                try {
                    out[b] = fn(b);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(error_mu);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return out;
}

} // namespace fcmix
