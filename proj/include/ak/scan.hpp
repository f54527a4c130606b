// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "ak/exec.hpp"

namespace ak {

enum class scan_mode { inclusive, exclusive };

/// init seeds the scan: exclusive output position 0 is init, inclusive
/// output position 0 is op(init, data[0]). chunk_size fixes the association
/// boundaries, so the output is a pure function of (data, spec) and does not
/// depend on the thread count.
template <typename T>
struct scan_spec {
    scan_mode mode = scan_mode::inclusive;
    T init{};
    std::size_t chunk_size = 4096;
};

/// Prefix scan (running fold) of data into out, which must have the same
/// length; out may alias data for an in-place scan. Three phases: per-chunk
/// reduction, a serial exclusive scan of the chunk aggregates, then a
/// per-chunk downsweep. Chunks are fixed by spec.chunk_size.
template <typename T, typename Op>
void accumulate(Op op, std::span<const T> data, const scan_spec<T>& spec, const exec_backend& ex,
                std::span<T> out) {
    if (out.size() != data.size()) {
        throw std::invalid_argument("accumulate: output length must match input length");
    }
    if (spec.chunk_size == 0) {
        throw std::invalid_argument("accumulate: chunk_size must be >= 1");
    }
    const std::size_t n = data.size();
    if (n == 0) {
        return;
    }
    const std::size_t cs = spec.chunk_size;
    const std::size_t chunks = (n + cs - 1) / cs;

    std::vector<T> carry(chunks, spec.init);
    if (chunks > 1) {
        std::vector<T> agg(chunks - 1);
        foreachindex(chunks - 1, ex, [&](std::size_t c) {
            const std::size_t lo = c * cs;
            const std::size_t hi = std::min(n, lo + cs);
            T acc = data[lo];  // chunks are nonempty by construction
            for (std::size_t i = lo + 1; i < hi; ++i) {
                acc = op(acc, data[i]);
            }
            agg[c] = acc;
        });
        for (std::size_t c = 1; c < chunks; ++c) {
            carry[c] = op(carry[c - 1], agg[c - 1]);
        }
    }

    foreachindex(chunks, ex, [&](std::size_t c) {
        const std::size_t lo = c * cs;
        const std::size_t hi = std::min(n, lo + cs);
        T acc = carry[c];
        if (spec.mode == scan_mode::inclusive) {
            for (std::size_t i = lo; i < hi; ++i) {
                acc = op(acc, data[i]);
                out[i] = acc;
            }
        } else {
            for (std::size_t i = lo; i < hi; ++i) {
                const T x = data[i];  // read before write: out may alias data
                out[i] = acc;
                acc = op(acc, x);
            }
        }
    });
}

/// Allocating variant.
template <typename T, typename Op>
std::vector<T> accumulate(Op op, std::span<const T> data, const scan_spec<T>& spec,
                          const exec_backend& ex) {
    std::vector<T> out(data.size());
    accumulate(op, data, spec, ex, std::span<T>(out));
    return out;
}

}  // namespace ak
