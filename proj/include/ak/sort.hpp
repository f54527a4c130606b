// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "ak/exec.hpp"

namespace ak {

// ---------------------------------------------------------------------------
// Caller-owned scratch. Required sizes are a pure function of (n, variant)
// and can be queried before any sort call; reusing buffers across calls of
// identical (n, variant) is always legal. Undersized buffers are rejected
// before any mutation.
// ---------------------------------------------------------------------------

template <typename Key>
struct sort_buffers {
    std::vector<Key> scratch_keys;

    static std::size_t required_bytes(std::size_t n) { return n * sizeof(Key); }
    static sort_buffers with_capacity(std::size_t n) { return {std::vector<Key>(n)}; }
};

template <typename Key, typename Payload>
struct sort_by_key_buffers {
    std::vector<Key> scratch_keys;
    std::vector<Payload> scratch_payload;

    static std::size_t required_bytes(std::size_t n) {
        return n * (sizeof(Key) + sizeof(Payload));
    }
    static sort_by_key_buffers with_capacity(std::size_t n) {
        return {std::vector<Key>(n), std::vector<Payload>(n)};
    }
};

template <typename Key, typename Index = std::size_t>
struct sortperm_buffers {
    std::vector<Key> working_keys;  // mutable copy of the input keys
    std::vector<Key> scratch_keys;
    std::vector<Index> scratch_index;

    static std::size_t required_bytes(std::size_t n) {
        return n * (2 * sizeof(Key) + sizeof(Index));
    }
    static sortperm_buffers with_capacity(std::size_t n) {
        return {std::vector<Key>(n), std::vector<Key>(n), std::vector<Index>(n)};
    }
};

template <typename Index = std::size_t>
struct sortperm_lowmem_buffers {
    std::vector<Index> scratch_index;

    static std::size_t required_bytes(std::size_t n) { return n * sizeof(Index); }
    static sortperm_lowmem_buffers with_capacity(std::size_t n) {
        return {std::vector<Index>(n)};
    }
};

namespace detail {

struct no_payload {};

// Number of elements taken from a within the first k outputs of the stable
// merge of runs a and b (stable: a wins ties). It is the unique i with
//   a[i-1] <= b[k-i]   and   b[k-i-1] < a[i]
// at the boundaries where those indices exist.
template <typename T, typename Cmp>
std::size_t co_rank(std::size_t k, std::span<const T> a, std::span<const T> b, Cmp cmp) {
    std::size_t lo = k > b.size() ? k - b.size() : 0;
    std::size_t hi = std::min(k, a.size());
    while (lo < hi) {
        const std::size_t i = lo + (hi - lo) / 2;  // candidate count from a; k - i - 1 < b.size()
        if (cmp(b[k - i - 1], a[i])) {
            hi = i;
        } else {
            lo = i + 1;
        }
    }
    return lo;
}

// Stable sequential merge of a[ia0,ia1) and b[ib0,ib1) into dst, moving the
// matching payload slices alongside when V is not no_payload.
template <typename K, typename V, typename Cmp>
void merge_segment(std::span<const K> a, std::span<const V> av, std::size_t ia, std::size_t ia1,
                   std::span<const K> b, std::span<const V> bv, std::size_t ib, std::size_t ib1,
                   std::span<K> dst, std::span<V> dstv, std::size_t out, Cmp cmp) {
    constexpr bool with_payload = !std::is_same_v<V, no_payload>;
    while (ia < ia1 && ib < ib1) {
        if (!cmp(b[ib], a[ia])) {  // a[ia] <= b[ib]: take left run first on ties
            dst[out] = a[ia];
            if constexpr (with_payload) dstv[out] = av[ia];
            ++ia;
        } else {
            dst[out] = b[ib];
            if constexpr (with_payload) dstv[out] = bv[ib];
            ++ib;
        }
        ++out;
    }
    for (; ia < ia1; ++ia, ++out) {
        dst[out] = a[ia];
        if constexpr (with_payload) dstv[out] = av[ia];
    }
    for (; ib < ib1; ++ib, ++out) {
        dst[out] = b[ib];
        if constexpr (with_payload) dstv[out] = bv[ib];
    }
}

// Bottom-up stable merge sort ping-ponging between (keys, payload) and the
// scratch arrays. Each pass splits the output index space statically across
// workers; co_rank locates the matching input positions, so results are
// identical for every thread count.
template <typename K, typename V, typename Cmp>
void merge_sort_core(std::span<K> keys, std::span<V> payload, std::span<K> kscratch,
                     std::span<V> pscratch, Cmp cmp, const exec_backend& ex) {
    const std::size_t n = keys.size();
    if (n < 2) {
        return;
    }
    const std::size_t workers = ex.kind() == exec_kind::sequential ? 1 : ex.thread_count();
    const auto ranges = partition(n, workers);

    bool in_place = true;  // true: current data lives in (keys, payload)
    for (std::size_t width = 1; width < n; width *= 2) {
        std::span<const K> src = in_place ? keys : kscratch;
        std::span<const V> srcv = in_place ? payload : pscratch;
        std::span<K> dst = in_place ? kscratch : keys;
        std::span<V> dstv = in_place ? pscratch : payload;
        foreachindex(ranges.size(), ex, [&, width](std::size_t slot) {
            const index_range r = ranges[slot];
            for (std::size_t lo = (r.begin / (2 * width)) * 2 * width; lo < r.end;
                 lo += 2 * width) {
                const std::size_t mid = std::min(n, lo + width);
                const std::size_t hi = std::min(n, lo + 2 * width);
                const std::size_t seg0 = std::max(lo, r.begin);
                const std::size_t seg1 = std::min(hi, r.end);
                if (seg0 >= seg1) {
                    continue;
                }
                auto a = src.subspan(lo, mid - lo);
                auto b = src.subspan(mid, hi - mid);
                auto av = srcv.empty() ? srcv : srcv.subspan(lo, mid - lo);
                auto bv = srcv.empty() ? srcv : srcv.subspan(mid, hi - mid);
                const std::size_t i0 = co_rank(seg0 - lo, a, b, cmp);
                const std::size_t i1 = co_rank(seg1 - lo, a, b, cmp);
                merge_segment(a, av, i0, i1, b, bv, (seg0 - lo) - i0, (seg1 - lo) - i1, dst,
                              dstv, seg0, cmp);
            }
        });
        in_place = !in_place;
    }
    if (!in_place) {
        foreachindex(n, ex, [&](std::size_t i) {
            keys[i] = kscratch[i];
            if constexpr (!std::is_same_v<V, no_payload>) {
                payload[i] = pscratch[i];
            }
        });
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// merge_sort
// ---------------------------------------------------------------------------

/// Stable in-place sort of data under cmp. scratch must hold at least
/// data.size() elements; an undersized scratch throws before any mutation.
template <typename T, typename Cmp = std::less<T>>
void merge_sort(std::span<T> data, std::span<T> scratch, const exec_backend& ex, Cmp cmp = {}) {
    if (scratch.size() < data.size()) {
        throw std::invalid_argument("merge_sort: scratch buffer too small");
    }
    std::span<detail::no_payload> none;
    detail::merge_sort_core<T, detail::no_payload>(data, none, scratch.first(data.size()), none,
                                                   cmp, ex);
}

template <typename T, typename Cmp = std::less<T>>
void merge_sort(std::span<T> data, sort_buffers<T>& buffers, const exec_backend& ex,
                Cmp cmp = {}) {
    merge_sort(data, std::span<T>(buffers.scratch_keys), ex, cmp);
}

/// Allocating variant: returns a sorted copy, leaving data untouched.
template <typename T, typename Cmp = std::less<T>>
std::vector<T> merge_sort_copy(std::span<const T> data, const exec_backend& ex, Cmp cmp = {}) {
    std::vector<T> out(data.begin(), data.end());
    auto buffers = sort_buffers<T>::with_capacity(out.size());
    merge_sort(std::span<T>(out), buffers, ex, cmp);
    return out;
}

// ---------------------------------------------------------------------------
// merge_sort_by_key
// ---------------------------------------------------------------------------

/// Stable sort of keys, with payload[i] co-moving with keys[i]: the final
/// (key, payload) pair multiset equals the input pair multiset.
template <typename K, typename V, typename Cmp = std::less<K>>
void merge_sort_by_key(std::span<K> keys, std::span<V> payload, std::span<K> scratch_keys,
                       std::span<V> scratch_payload, const exec_backend& ex, Cmp cmp = {}) {
    if (keys.size() != payload.size()) {
        throw std::invalid_argument("merge_sort_by_key: keys and payload lengths differ");
    }
    if (scratch_keys.size() < keys.size() || scratch_payload.size() < keys.size()) {
        throw std::invalid_argument("merge_sort_by_key: scratch buffers too small");
    }
    detail::merge_sort_core<K, V>(keys, payload, scratch_keys.first(keys.size()),
                                  scratch_payload.first(keys.size()), cmp, ex);
}

template <typename K, typename V, typename Cmp = std::less<K>>
void merge_sort_by_key(std::span<K> keys, std::span<V> payload,
                       sort_by_key_buffers<K, V>& buffers, const exec_backend& ex, Cmp cmp = {}) {
    merge_sort_by_key(keys, payload, std::span<K>(buffers.scratch_keys),
                      std::span<V>(buffers.scratch_payload), ex, cmp);
}

// ---------------------------------------------------------------------------
// sortperm: index permutation that stably sorts data (data is not modified).
// Among equal elements, indices ascend.
// ---------------------------------------------------------------------------

/// Key-copy variant: sorts a working copy of the keys with the output index
/// array as payload. Fastest, at the cost of n extra key storage.
template <typename T, typename I = std::size_t, typename Cmp = std::less<T>>
void sortperm(std::span<const T> data, std::span<I> out, sortperm_buffers<T, I>& buffers,
              const exec_backend& ex, Cmp cmp = {}) {
    const std::size_t n = data.size();
    if (out.size() != n) {
        throw std::invalid_argument("sortperm: output length must match input length");
    }
    if (buffers.working_keys.size() < n || buffers.scratch_keys.size() < n ||
        buffers.scratch_index.size() < n) {
        throw std::invalid_argument("sortperm: scratch buffers too small");
    }
    std::copy(data.begin(), data.end(), buffers.working_keys.begin());
    std::iota(out.begin(), out.end(), I{0});
    detail::merge_sort_core<T, I>(std::span<T>(buffers.working_keys).first(n), out,
                                  std::span<T>(buffers.scratch_keys).first(n),
                                  std::span<I>(buffers.scratch_index).first(n), cmp, ex);
}

template <typename T, typename I = std::size_t, typename Cmp = std::less<T>>
std::vector<I> sortperm(std::span<const T> data, const exec_backend& ex, Cmp cmp = {}) {
    std::vector<I> out(data.size());
    auto buffers = sortperm_buffers<T, I>::with_capacity(data.size());
    sortperm(data, std::span<I>(out), buffers, ex, cmp);
    return out;
}

/// Low-memory variant: sorts the index array directly, comparing through
/// data[index]. Same contract as sortperm; scratch footprint is one index
/// array instead of two key arrays plus one index array.
template <typename T, typename I = std::size_t, typename Cmp = std::less<T>>
void sortperm_lowmem(std::span<const T> data, std::span<I> out,
                     sortperm_lowmem_buffers<I>& buffers, const exec_backend& ex, Cmp cmp = {}) {
    const std::size_t n = data.size();
    if (out.size() != n) {
        throw std::invalid_argument("sortperm_lowmem: output length must match input length");
    }
    if (buffers.scratch_index.size() < n) {
        throw std::invalid_argument("sortperm_lowmem: scratch buffer too small");
    }
    std::iota(out.begin(), out.end(), I{0});
    std::span<detail::no_payload> none;
    auto by_value = [&](const I& a, const I& b) { return cmp(data[a], data[b]); };
    detail::merge_sort_core<I, detail::no_payload>(
        out, none, std::span<I>(buffers.scratch_index).first(n), none, by_value, ex);
}

template <typename T, typename I = std::size_t, typename Cmp = std::less<T>>
std::vector<I> sortperm_lowmem(std::span<const T> data, const exec_backend& ex, Cmp cmp = {}) {
    std::vector<I> out(data.size());
    auto buffers = sortperm_lowmem_buffers<I>::with_capacity(data.size());
    sortperm_lowmem(data, std::span<I>(out), buffers, ex, cmp);
    return out;
}

}  // namespace ak
