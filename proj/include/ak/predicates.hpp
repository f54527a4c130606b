// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <span>

#include "ak/exec.hpp"
#include "ak/reduce.hpp"

namespace ak {

/// early_exit: workers poll a shared done flag every 1024 elements and stop
/// once the outcome is decided. via_mapreduce: conservative full pass built
/// on mapreduce. Both produce identical results; early termination is a
/// performance property only.
enum class predicate_algo { early_exit, via_mapreduce };

namespace detail {

constexpr std::size_t pred_poll_stride = 1024;

// want = true scans for an element satisfying pred (any); want = false scans
// for one violating it (all).
template <typename T, typename Pred>
bool find_decider(std::span<const T> data, Pred pred, bool want, const exec_backend& ex) {
    if (ex.kind() == exec_kind::sequential) {
        for (const T& x : data) {
            if (static_cast<bool>(pred(x)) == want) {
                return true;
            }
        }
        return false;
    }
    const auto ranges = partition(data.size(), ex.thread_count());
    std::atomic<bool> found{false};
    foreachindex(ranges.size(), ex, [&](std::size_t c) {
        for (std::size_t lo = ranges[c].begin; lo < ranges[c].end; lo += pred_poll_stride) {
            if (found.load(std::memory_order_relaxed)) {
                return;
            }
            const std::size_t hi = std::min(ranges[c].end, lo + pred_poll_stride);
            for (std::size_t i = lo; i < hi; ++i) {
                if (static_cast<bool>(pred(data[i])) == want) {
                    // Competing stores all write true; harmless.
                    found.store(true, std::memory_order_relaxed);
                    return;
                }
            }
        }
    });
    return found.load();
}

}  // namespace detail

/// True iff pred holds for at least one element. Empty data yields false.
template <typename T, typename Pred>
bool any_pred(std::span<const T> data, Pred pred, const exec_backend& ex,
              predicate_algo algo = predicate_algo::early_exit) {
    if (algo == predicate_algo::early_exit) {
        return detail::find_decider(data, pred, true, ex);
    }
    return mapreduce<bool>([&](const T& x) { return static_cast<bool>(pred(x)); },
                           [](bool a, bool b) { return a || b; }, data,
                           reduce_config<bool>{false, 256}, ex);
}

/// True iff pred holds for every element. Empty data yields true.
template <typename T, typename Pred>
bool all_pred(std::span<const T> data, Pred pred, const exec_backend& ex,
              predicate_algo algo = predicate_algo::early_exit) {
    if (algo == predicate_algo::early_exit) {
        return !detail::find_decider(data, pred, false, ex);
    }
    return mapreduce<bool>([&](const T& x) { return static_cast<bool>(pred(x)); },
                           [](bool a, bool b) { return a && b; }, data,
                           reduce_config<bool>{true, 256}, ex);
}

}  // namespace ak
