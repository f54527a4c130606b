// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <cstddef>
#include <memory>
#include <vector>

#include "ak/thread_pool.hpp"

namespace ak {

enum class exec_kind { sequential, threaded };

/// Half-open index interval [begin, end). All indexing in this library is
/// 0-based and half-open.
struct index_range {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const noexcept { return end - begin; }
    bool operator==(const index_range&) const = default;
};

/// Splits [0, n) into min(p, n) contiguous, ordered, disjoint chunks that
/// cover [0, n) exactly. Chunk sizes differ by at most one; the remainder is
/// spread one-per-chunk from the front. Throws std::invalid_argument when
/// p == 0.
std::vector<index_range> partition(std::size_t n, std::size_t p);

/// Execution strategy handle: either the sequential reference backend or a
/// statically partitioned multithreaded one. Threaded handles own a worker
/// pool created once and reused across calls; copies share the pool. Handles
/// are shareable across threads and all operations taking a backend block
/// the caller until completion.
class exec_backend {
public:
    static exec_backend sequential() { return exec_backend(exec_kind::sequential, nullptr); }

    /// Threaded backend with an explicit worker count (>= 1).
    static exec_backend threaded(std::size_t thread_count);

    /// Threaded backend with the default worker count: the AK_THREADS
    /// environment variable when set (must parse as a positive integer),
    /// otherwise the hardware concurrency.
    static exec_backend threaded();

    exec_kind kind() const noexcept { return kind_; }
    std::size_t thread_count() const noexcept { return pool_ ? pool_->size() : 1; }

    /// Internal: the shared pool (threaded backends only).
    thread_pool& pool() const { return *pool_; }

private:
    exec_backend(exec_kind kind, std::shared_ptr<thread_pool> pool)
        : kind_(kind), pool_(std::move(pool)) {}

    exec_kind kind_;
    std::shared_ptr<thread_pool> pool_;
};

/// Invokes kernel(i) exactly once for every i in [0, n), with no ordering
/// guarantee across indices. The kernel must be safe to invoke concurrently
/// for distinct indices. If a kernel invocation throws, the operation is
/// aborted and the first exception is rethrown to the caller once all
/// workers have stopped.
template <typename Kernel>
void foreachindex(std::size_t n, const exec_backend& ex, Kernel&& kernel) {
    if (n == 0) {
        return;
    }
    if (ex.kind() == exec_kind::sequential) {
        for (std::size_t i = 0; i < n; ++i) {
            kernel(i);
        }
        return;
    }
    const auto ranges = partition(n, ex.thread_count());
    std::atomic<bool> failed{false};
    ex.pool().run(ranges.size(), [&](std::size_t slot) {
        constexpr std::size_t abort_check_stride = 4096;
        const index_range r = ranges[slot];
        for (std::size_t lo = r.begin; lo < r.end; lo += abort_check_stride) {
            if (failed.load(std::memory_order_relaxed)) {
                return;
            }
            const std::size_t hi = std::min(r.end, lo + abort_check_stride);
            try {
                for (std::size_t i = lo; i < hi; ++i) {
                    kernel(i);
                }
            } catch (...) {
                failed.store(true, std::memory_order_relaxed);
                throw;
            }
        }
    });
}

}  // namespace ak
