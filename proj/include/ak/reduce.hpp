// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "ak/exec.hpp"

namespace ak {

/// Tuning for parallel reductions. init must be a neutral element of the
/// operator: op(init, x) == x. Once the number of remaining partial results
/// drops below switch_below, the reduction finishes serially on the calling
/// thread.
template <typename T>
struct reduce_config {
    T init{};
    std::size_t switch_below = 256;
};

namespace detail {

// Shared skeleton for reduce/mapreduce: load(i) yields the (mapped) element.
template <typename T, typename Op, typename Load>
T reduce_loaded(Op op, std::size_t n, Load load, const reduce_config<T>& cfg,
                const exec_backend& ex) {
    if (n == 0) {
        return cfg.init;
    }
    const std::size_t workers = ex.kind() == exec_kind::sequential ? 1 : ex.thread_count();
    const auto ranges = partition(n, workers);
    std::vector<T> partials(ranges.size(), cfg.init);
    foreachindex(ranges.size(), ex, [&](std::size_t c) {
        T acc = cfg.init;
        for (std::size_t i = ranges[c].begin; i < ranges[c].end; ++i) {
            acc = op(acc, load(i));
        }
        partials[c] = acc;
    });
    // Parallel pairwise rounds until few enough partials remain, then a
    // serial fold on the caller. Pair (i, i + half) so reads and writes of a
    // round never overlap across slots.
    std::size_t count = partials.size();
    while (count >= 2 && count >= cfg.switch_below) {
        const std::size_t half = (count + 1) / 2;
        foreachindex(count - half, ex, [&](std::size_t i) {
            partials[i] = op(partials[i], partials[i + half]);
        });
        count = half;
    }
    T acc = cfg.init;
    for (std::size_t i = 0; i < count; ++i) {
        acc = op(acc, partials[i]);
    }
    return acc;
}

}  // namespace detail

/// Folds init with all elements of data under the associative operator op,
/// in an unspecified association order. Empty data returns init.
template <typename T, typename Op>
T reduce(Op op, std::span<const T> data, const reduce_config<T>& cfg, const exec_backend& ex) {
    return detail::reduce_loaded<T>(
        op, data.size(), [&](std::size_t i) { return data[i]; }, cfg, ex);
}

/// reduce over f(element), without materializing the mapped array. f must be
/// pure; R is the mapped element type.
template <typename R, typename T, typename F, typename Op>
R mapreduce(F f, Op op, std::span<const T> data, const reduce_config<R>& cfg,
            const exec_backend& ex) {
    return detail::reduce_loaded<R>(
        op, data.size(), [&](std::size_t i) { return f(data[i]); }, cfg, ex);
}

}  // namespace ak
