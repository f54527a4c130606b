// SPDX-License-Identifier: Apache-2.0
//
// Shared test helpers: seeded generators per element type, sequential
// oracles, and a zipf sampler. Oracles here are intentionally independent of
// the library's execution paths.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ak/dtype.hpp"

namespace testutil {

// Bounded magnitudes so sums of up to ~1e5 elements stay in range for the
// wider integer types (narrow types use overflow-free operators in tests).
template <typename T>
std::vector<T> random_values(std::mt19937_64& rng, std::size_t n) {
    std::vector<T> out(n);
    if constexpr (std::is_same_v<T, ak::int128>) {
        for (auto& v : out) {
            v = (static_cast<ak::int128>(rng()) << 64) | static_cast<ak::int128>(rng());
        }
    } else if constexpr (std::is_integral_v<T>) {
        std::uniform_int_distribution<std::int64_t> dist(-10000, 10000);
        for (auto& v : out) {
            v = static_cast<T>(dist(rng));
        }
    } else {
        std::uniform_real_distribution<T> dist(T(0), T(1));
        for (auto& v : out) {
            v = dist(rng);
        }
    }
    return out;
}

template <typename T>
std::vector<T> full_range_keys(std::mt19937_64& rng, std::size_t n) {
    std::vector<T> out(n);
    if constexpr (std::is_same_v<T, ak::int128>) {
        for (auto& v : out) {
            v = (static_cast<ak::int128>(rng()) << 64) | static_cast<ak::int128>(rng());
        }
    } else if constexpr (std::is_integral_v<T>) {
        for (auto& v : out) {
            v = static_cast<T>(rng());
        }
    } else {
        std::uniform_real_distribution<T> dist(T(-1e6), T(1e6));
        for (auto& v : out) {
            v = dist(rng);
        }
    }
    return out;
}

// Sequential left fold, the reduction oracle.
template <typename T, typename Op>
T seq_fold(T init, std::span<const T> data, Op op) {
    T acc = init;
    for (const T& x : data) {
        acc = op(acc, x);
    }
    return acc;
}

// Sequential scan oracle.
template <typename T, typename Op>
std::vector<T> seq_scan(T init, std::span<const T> data, Op op, bool inclusive) {
    std::vector<T> out(data.size());
    T acc = init;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (inclusive) {
            acc = op(acc, data[i]);
            out[i] = acc;
        } else {
            out[i] = acc;
            acc = op(acc, data[i]);
        }
    }
    return out;
}

// Linear-scan insertion-index oracles.
template <typename T>
std::size_t count_less(std::span<const T> hay, const T& v) {
    std::size_t c = 0;
    for (const T& x : hay) {
        if (x < v) ++c;
    }
    return c;
}

template <typename T>
std::size_t count_less_equal(std::span<const T> hay, const T& v) {
    std::size_t c = 0;
    for (const T& x : hay) {
        if (!(v < x)) ++c;
    }
    return c;
}

inline bool approx_rel(double got, double want, double rel) {
    const double scale = std::max({1.0, std::abs(got), std::abs(want)});
    return std::abs(got - want) <= rel * scale;
}

// zipf(s) sampler over {1..modes}: inverse-transform on precomputed
// cumulative weights.
class zipf_sampler {
public:
    zipf_sampler(double s, std::size_t modes) : cumulative_(modes) {
        double total = 0.0;
        for (std::size_t k = 1; k <= modes; ++k) {
            total += 1.0 / std::pow(static_cast<double>(k), s);
            cumulative_[k - 1] = total;
        }
        for (auto& c : cumulative_) {
            c /= total;
        }
    }

    std::uint64_t operator()(std::mt19937_64& rng) {
        const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
        return static_cast<std::uint64_t>(it - cumulative_.begin()) + 1;
    }

private:
    std::vector<double> cumulative_;
};

template <typename T>
std::string key_string(T v) {
    if constexpr (std::is_same_v<T, ak::int128>) {
        const bool neg = v < 0;
        unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1
                                  : static_cast<unsigned __int128>(v);
        std::string digits;
        do {
            digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(u % 10)));
            u /= 10;
        } while (u != 0);
        return neg ? "-" + digits : digits;
    } else {
        return std::to_string(v);
    }
}

}  // namespace testutil
