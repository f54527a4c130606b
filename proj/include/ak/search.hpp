// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ak/exec.hpp"

namespace ak {

/// first: lowest insertion index preserving order (count of elements < v);
/// last: highest (count of elements <= v).
enum class search_side { first, last };

/// Count of elements in sorted haystack strictly less than v.
template <typename T, typename Cmp = std::less<T>>
std::size_t search_first(std::span<const T> haystack, const T& v, Cmp cmp = {}) {
    return static_cast<std::size_t>(
        std::lower_bound(haystack.begin(), haystack.end(), v, cmp) - haystack.begin());
}

/// Count of elements in sorted haystack less than or equal to v.
template <typename T, typename Cmp = std::less<T>>
std::size_t search_last(std::span<const T> haystack, const T& v, Cmp cmp = {}) {
    return static_cast<std::size_t>(
        std::upper_bound(haystack.begin(), haystack.end(), v, cmp) - haystack.begin());
}

/// Batched binary search: one insertion index in [0, haystack.size()] per
/// needle. The haystack must be nondecreasing under cmp; this is an
/// unchecked caller contract unless validate is set, which runs an O(n)
/// sortedness check and throws std::invalid_argument on violation.
template <typename T, typename Cmp = std::less<T>>
std::vector<std::size_t> searchsorted(std::span<const T> haystack, std::span<const T> needles,
                                      search_side side, const exec_backend& ex, Cmp cmp = {},
                                      bool validate = false) {
    if (validate &&
        !std::is_sorted(haystack.begin(), haystack.end(), cmp)) {
        throw std::invalid_argument("searchsorted: haystack is not sorted");
    }
    std::vector<std::size_t> out(needles.size());
    foreachindex(needles.size(), ex, [&](std::size_t i) {
        out[i] = side == search_side::first ? search_first(haystack, needles[i], cmp)
                                            : search_last(haystack, needles[i], cmp);
    });
    return out;
}

}  // namespace ak
