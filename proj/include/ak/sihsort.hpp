// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "ak/exec.hpp"
#include "ak/search.hpp"
#include "ak/sim_comm.hpp"
#include "ak/sort.hpp"

namespace ak {

/// Tuning for the distributed sampling sort. Zero means "derive from the
/// world size": sample_per_rank defaults to 32*P and bins to 8*P. All ranks
/// must call with identical values; a mismatch is a protocol error.
struct sih_config {
    std::size_t sample_per_rank = 0;
    std::size_t bins = 0;
    std::size_t max_refine_rounds = 4;
    double imbalance_tol = 0.25;
};

/// Equal-width histogram over the sampled key range. Edges are kept in long
/// double so every key type shares one representation; counts sum to total.
struct key_histogram {
    std::vector<long double> bin_edges;  // K+1, strictly increasing (single bin when degenerate)
    std::vector<std::uint64_t> counts;   // K
    std::uint64_t total = 0;
};

/// P-1 nondecreasing key values partitioning the global key space: an
/// element x is routed to the rank equal to the number of splitters < x,
/// so elements equal to a splitter go to the lower rank.
template <typename T>
struct splitter_set {
    std::vector<T> values;
};

/// Per-rank outcome of one sihsort run.
struct sih_stats {
    std::size_t rounds_used = 0;      ///< refinement rounds spent (incl. the measuring round)
    bool converged = false;           ///< bucket deviation met imbalance_tol
    double max_deviation = 0.0;       ///< max |bucket - ideal| / ideal at the last count round
    std::uint64_t redistribution_sends = 0;  ///< point-to-point messages sent by this rank
    std::uint64_t redistribution_bytes = 0;
    std::uint64_t collective_ops = 0;
    std::uint64_t output_count = 0;
};

namespace detail {

template <typename T>
long double to_ld(T v) {
    return static_cast<long double>(v);
}

// Saturating long double -> key conversion, rounding half away from zero for
// integral keys.
template <typename T>
T ld_to_key(long double x) {
    if constexpr (std::is_integral_v<T>) {
        x = std::floor(x + 0.5L);
        if (x <= to_ld(std::numeric_limits<T>::min())) return std::numeric_limits<T>::min();
        if (x >= to_ld(std::numeric_limits<T>::max())) return std::numeric_limits<T>::max();
        return static_cast<T>(x);
    } else {
        return static_cast<T>(x);
    }
}

inline std::vector<long double> equal_width_edges(long double lo, long double hi,
                                                  std::size_t bins) {
    if (!(lo < hi)) {
        return {lo, lo};  // degenerate range collapses to one bin
    }
    std::vector<long double> edges(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i) {
        edges[i] = lo + (hi - lo) * static_cast<long double>(i) / static_cast<long double>(bins);
    }
    edges.front() = lo;
    edges.back() = hi;
    return edges;
}

template <typename T>
void count_into_bins(std::span<const T> samples, const std::vector<long double>& edges,
                     std::vector<std::uint64_t>& counts) {
    const long double lo = edges.front();
    const long double hi = edges.back();
    const std::size_t k = counts.size();
    for (const T& s : samples) {
        std::size_t bin = 0;
        if (lo < hi) {
            const long double frac = (to_ld(s) - lo) / (hi - lo);
            const auto raw = static_cast<long long>(
                std::floor(frac * static_cast<long double>(k)));
            bin = raw <= 0 ? 0 : std::min<std::size_t>(static_cast<std::size_t>(raw), k - 1);
        }
        ++counts[bin];
    }
}

// Routing boundaries: b[0] = 0, b[j+1] = count of elements <= splitter j,
// b[P] = n. Slice [b[r], b[r+1]) is the run destined for rank r.
template <typename T>
std::vector<std::size_t> slice_bounds(std::span<const T> local_sorted,
                                      const splitter_set<T>& splitters, std::size_t world,
                                      const exec_backend& ex) {
    std::vector<std::size_t> bounds(world + 1);
    bounds[0] = 0;
    const auto cuts = searchsorted<T>(local_sorted, std::span<const T>(splitters.values),
                                      search_side::last, ex);
    for (std::size_t j = 0; j < cuts.size(); ++j) {
        bounds[j + 1] = cuts[j];
    }
    bounds[world] = local_sorted.size();
    return bounds;
}

// Counter piggybacking: integer keys whose range accommodates every possible
// count carry the slice length as one extra trailing element; other keys use
// a fixed 8-byte length header. The choice depends only on (T, n_total), so
// sender and receiver always agree.
template <typename T>
bool piggyback_tail_mode(std::uint64_t n_total) {
    if constexpr (std::is_integral_v<T>) {
        using U = std::make_unsigned_t<T>;
        return static_cast<unsigned long long>(n_total) <=
               static_cast<unsigned long long>(
                   std::min<U>(static_cast<U>(std::numeric_limits<T>::max()),
                               static_cast<U>(~0ULL)));
    } else {
        (void)n_total;
        return false;
    }
}

template <typename T>
std::vector<std::byte> encode_slice(std::span<const T> slice, bool tail_mode) {
    if (tail_mode) {
        std::vector<std::byte> out((slice.size() + 1) * sizeof(T));
        if (!slice.empty()) {
            std::memcpy(out.data(), slice.data(), slice.size() * sizeof(T));
        }
        const T count = static_cast<T>(slice.size());
        std::memcpy(out.data() + slice.size() * sizeof(T), &count, sizeof(T));
        return out;
    }
    std::vector<std::byte> out(8 + slice.size() * sizeof(T));
    const std::uint64_t count = slice.size();
    std::memcpy(out.data(), &count, 8);
    if (!slice.empty()) {
        std::memcpy(out.data() + 8, slice.data(), slice.size() * sizeof(T));
    }
    return out;
}

template <typename T>
std::vector<T> decode_slice(const std::vector<std::byte>& bytes, bool tail_mode) {
    if (tail_mode) {
        if (bytes.size() % sizeof(T) != 0 || bytes.empty()) {
            throw sim::protocol_error("redistribute: malformed tail-counted slice");
        }
        const std::size_t values = bytes.size() / sizeof(T);
        T count{};
        std::memcpy(&count, bytes.data() + (values - 1) * sizeof(T), sizeof(T));
        if (static_cast<std::uint64_t>(count) != values - 1) {
            throw sim::protocol_error("redistribute: tail counter disagrees with message size");
        }
        std::vector<T> out(values - 1);
        if (!out.empty()) {
            std::memcpy(out.data(), bytes.data(), (values - 1) * sizeof(T));
        }
        return out;
    }
    if (bytes.size() < 8) {
        throw sim::protocol_error("redistribute: slice header truncated");
    }
    std::uint64_t count = 0;
    std::memcpy(&count, bytes.data(), 8);
    if (bytes.size() != 8 + count * sizeof(T)) {
        throw sim::protocol_error("redistribute: slice header disagrees with message size");
    }
    std::vector<T> out(count);
    if (!out.empty()) {
        std::memcpy(out.data(), bytes.data() + 8, count * sizeof(T));
    }
    return out;
}

// n plus per-rank extremes of the data and of the drawn samples.
template <typename T>
struct rank_summary {
    std::uint64_t n = 0;
    std::uint64_t samples = 0;
    T data_min{};
    T data_max{};
    T sample_min{};
    T sample_max{};
};

template <typename T>
rank_summary<T> global_summary(std::span<const T> local_sorted, std::span<const T> samples,
                               sim::rank_comm& comm) {
    rank_summary<T> mine;
    mine.n = local_sorted.size();
    if (!local_sorted.empty()) {
        mine.data_min = local_sorted.front();
        mine.data_max = local_sorted.back();
    }
    mine.samples = samples.size();
    if (!samples.empty()) {
        mine.sample_min = samples.front();
        mine.sample_max = samples.back();
    }
    auto merged = comm.all_reduce(
        std::vector<rank_summary<T>>{mine},
        [](std::vector<rank_summary<T>>& acc, const std::vector<rank_summary<T>>& in) {
            rank_summary<T>& a = acc[0];
            const rank_summary<T>& b = in[0];
            if (b.n > 0) {
                if (a.n == 0 || b.data_min < a.data_min) a.data_min = b.data_min;
                if (a.n == 0 || a.data_max < b.data_max) a.data_max = b.data_max;
            }
            if (b.samples > 0) {
                if (a.samples == 0 || b.sample_min < a.sample_min) a.sample_min = b.sample_min;
                if (a.samples == 0 || a.sample_max < b.sample_max) a.sample_max = b.sample_max;
            }
            a.n += b.n;
            a.samples += b.samples;
        });
    return merged[0];
}

inline void check_consistent_config(const sih_config& cfg, sim::rank_comm& comm) {
    std::vector<std::uint64_t> sig = {static_cast<std::uint64_t>(cfg.sample_per_rank),
                                      static_cast<std::uint64_t>(cfg.bins),
                                      static_cast<std::uint64_t>(cfg.max_refine_rounds),
                                      std::bit_cast<std::uint64_t>(cfg.imbalance_tol), 0};
    auto merged = comm.all_reduce(
        sig, [](std::vector<std::uint64_t>& acc, const std::vector<std::uint64_t>& in) {
            for (std::size_t i = 0; i + 1 < acc.size(); ++i) {
                if (acc[i] != in[i]) acc[4] = 1;
            }
            acc[4] |= in[4];
        });
    merged[4] |= std::equal(sig.begin(), sig.end() - 1, merged.begin()) ? 0 : 1;
    if (merged[4] != 0) {
        throw sim::protocol_error("sihsort: configuration differs across ranks");
    }
}

}  // namespace detail

/// k evenly spaced order statistics of an already-sorted local array, at
/// positions round(j*(n-1)/(k-1)) for j = 0..k-1 (round half up); k = 1
/// probes the median position. Duplicate positions are kept; an empty array
/// contributes an empty sample.
template <typename T>
std::vector<T> sample_local(std::span<const T> sorted_local, std::size_t k) {
    const std::size_t n = sorted_local.size();
    if (n == 0 || k == 0) {
        return {};
    }
    k = std::min(k, n);
    std::vector<T> out;
    out.reserve(k);
    if (k == 1) {
        out.push_back(sorted_local[n / 2]);
        return out;
    }
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t pos = (2 * j * (n - 1) + (k - 1)) / (2 * (k - 1));
        out.push_back(sorted_local[pos]);
    }
    return out;
}

/// Equal-width histogram of the gathered samples spanning [min, max]; a
/// degenerate min == max range collapses to a single bin holding everything.
template <typename T>
key_histogram build_interpolated_histogram(std::span<const T> all_samples, std::size_t bins) {
    key_histogram h;
    if (all_samples.empty() || bins == 0) {
        h.bin_edges = {0.0L, 0.0L};
        h.counts = {0};
        return h;
    }
    T lo = all_samples[0];
    T hi = all_samples[0];
    for (const T& s : all_samples) {
        if (s < lo) lo = s;
        if (hi < s) hi = s;
    }
    h.bin_edges = detail::equal_width_edges(detail::to_ld(lo), detail::to_ld(hi), bins);
    h.counts.assign(h.bin_edges.size() - 1, 0);
    detail::count_into_bins(all_samples, h.bin_edges, h.counts);
    h.total = all_samples.size();
    return h;
}

/// P-1 splitters at the estimated global quantiles 1/P .. (P-1)/P, obtained
/// by linear interpolation inside the histogram bin containing each
/// cumulative-count target. Always nondecreasing.
template <typename T>
splitter_set<T> select_splitters(const key_histogram& hist, std::size_t world) {
    splitter_set<T> out;
    if (world <= 1) {
        return out;
    }
    out.values.reserve(world - 1);
    if (hist.total == 0) {
        out.values.assign(world - 1, detail::ld_to_key<T>(hist.bin_edges.front()));
        return out;
    }
    const std::size_t k = hist.counts.size();
    std::uint64_t cum = 0;
    std::size_t bin = 0;
    for (std::size_t j = 1; j < world; ++j) {
        const long double target = static_cast<long double>(hist.total) *
                                   static_cast<long double>(j) / static_cast<long double>(world);
        while (bin < k && static_cast<long double>(cum + hist.counts[bin]) < target) {
            cum += hist.counts[bin];
            ++bin;
        }
        long double value;
        if (bin >= k) {
            value = hist.bin_edges.back();
        } else {
            const long double frac =
                hist.counts[bin] == 0
                    ? 0.0L
                    : (target - static_cast<long double>(cum)) /
                          static_cast<long double>(hist.counts[bin]);
            value = hist.bin_edges[bin] + frac * (hist.bin_edges[bin + 1] - hist.bin_edges[bin]);
        }
        T key = detail::ld_to_key<T>(value);
        if (!out.values.empty() && key < out.values.back()) {
            key = out.values.back();
        }
        out.values.push_back(key);
    }
    return out;
}

template <typename T>
struct refine_result {
    splitter_set<T> splitters;
    std::size_t rounds_used = 0;
    bool converged = false;
    double max_deviation = 0.0;
};

/// Iterative splitter correction: each round measures exact global bucket
/// counts (searchsorted on every rank's sorted data, summed across ranks)
/// and, while the worst bucket deviates from n_total/P by more than
/// imbalance_tol, moves each offending splitter by interpolating within its
/// current bracket. Non-convergence is not an error; the last splitters win.
template <typename T>
refine_result<T> refine_splitters(std::span<const T> local_sorted, splitter_set<T> splitters,
                                  sim::rank_comm& comm, const sih_config& cfg,
                                  const exec_backend& ex = exec_backend::sequential()) {
    refine_result<T> res;
    const std::size_t world = comm.world_size();
    if (cfg.max_refine_rounds == 0) {
        res.splitters = std::move(splitters);
        return res;
    }
    const auto summary = detail::global_summary<T>(local_sorted, {}, comm);
    const std::uint64_t n_total = summary.n;
    if (world <= 1 || splitters.values.empty() || n_total == 0) {
        res.splitters = std::move(splitters);
        res.converged = true;
        return res;
    }

    const long double ideal =
        static_cast<long double>(n_total) / static_cast<long double>(world);
    std::vector<T> lo(world - 1, summary.data_min);
    std::vector<T> hi(world - 1, summary.data_max);
    std::vector<std::uint64_t> flo(world - 1, 0);
    std::vector<std::uint64_t> fhi(world - 1, n_total);
    std::vector<bool> frozen(world - 1, false);

    for (std::size_t round = 1; round <= cfg.max_refine_rounds; ++round) {
        // exact global count of elements <= each splitter
        std::vector<std::uint64_t> le(world - 1);
        const auto local_le = searchsorted<T>(local_sorted, std::span<const T>(splitters.values),
                                              search_side::last, ex);
        for (std::size_t j = 0; j + 1 < world; ++j) {
            le[j] = local_le[j];
        }
        le = comm.all_reduce_sum(std::move(le));

        long double max_dev = 0.0L;
        for (std::size_t r = 0; r < world; ++r) {
            const std::uint64_t upper = r + 1 < world ? le[r] : n_total;
            const std::uint64_t lower = r > 0 ? le[r - 1] : 0;
            const long double bucket = static_cast<long double>(upper - lower);
            max_dev = std::max(max_dev, std::abs(bucket - ideal) / ideal);
        }
        res.rounds_used = round;
        res.max_deviation = static_cast<double>(max_dev);
        if (max_dev <= static_cast<long double>(cfg.imbalance_tol)) {
            res.converged = true;
            break;
        }
        if (round == cfg.max_refine_rounds) {
            break;
        }

        for (std::size_t j = 0; j + 1 < world; ++j) {
            if (frozen[j]) {
                continue;
            }
            const long double target = ideal * static_cast<long double>(j + 1);
            const std::uint64_t measured = le[j];
            if (static_cast<long double>(measured) < target) {
                lo[j] = splitters.values[j];
                flo[j] = measured;
            } else if (static_cast<long double>(measured) > target) {
                hi[j] = splitters.values[j];
                fhi[j] = measured;
            } else {
                frozen[j] = true;
                continue;
            }
            if (!(lo[j] < hi[j]) || fhi[j] <= flo[j]) {
                frozen[j] = true;  // bracket exhausted (ties dominate)
                continue;
            }
            const long double frac = (target - static_cast<long double>(flo[j])) /
                                     static_cast<long double>(fhi[j] - flo[j]);
            long double cand = detail::to_ld(lo[j]) +
                               (detail::to_ld(hi[j]) - detail::to_ld(lo[j])) * frac;
            T key = detail::ld_to_key<T>(cand);
            if constexpr (std::is_integral_v<T>) {
                if (key <= lo[j]) key = static_cast<T>(lo[j] + 1);
                if (hi[j] < key) key = hi[j];
            } else {
                if (!(key > lo[j]) || !(key < hi[j])) {
                    key = detail::ld_to_key<T>((detail::to_ld(lo[j]) + detail::to_ld(hi[j])) / 2);
                }
                if (!(key > lo[j]) || !(key < hi[j])) {
                    frozen[j] = true;
                    continue;
                }
            }
            splitters.values[j] = key;
        }
        for (std::size_t j = 1; j + 1 < world; ++j) {
            if (splitters.values[j] < splitters.values[j - 1]) {
                splitters.values[j] = splitters.values[j - 1];
            }
        }
    }
    res.splitters = std::move(splitters);
    return res;
}

/// One all-to-all pass: every rank sends each peer the contiguous slice of
/// its sorted data destined for that peer, as a single message with the
/// element count piggybacked (trailing element for integer keys when the
/// count fits, 8-byte header otherwise). Returns the received slices plus
/// the kept local slice, concatenated in source-rank order. n_total must be
/// the agreed global element count (it fixes the piggyback encoding).
template <typename T>
std::vector<T> redistribute(std::span<const T> local_sorted, const splitter_set<T>& splitters,
                            sim::rank_comm& comm, std::uint64_t n_total,
                            const exec_backend& ex = exec_backend::sequential()) {
    const std::size_t world = comm.world_size();
    const std::size_t self = comm.rank();
    const auto bounds = detail::slice_bounds(local_sorted, splitters, world, ex);
    const bool tail_mode = detail::piggyback_tail_mode<T>(n_total);

    for (std::size_t dest = 0; dest < world; ++dest) {
        if (dest == self) {
            continue;
        }
        const auto slice = local_sorted.subspan(bounds[dest], bounds[dest + 1] - bounds[dest]);
        const auto msg = detail::encode_slice(slice, tail_mode);
        comm.send(dest, msg, sim::traffic_class::payload);
    }

    std::vector<T> out;
    for (std::size_t src = 0; src < world; ++src) {
        if (src == self) {
            out.insert(out.end(), local_sorted.begin() + bounds[self],
                       local_sorted.begin() + bounds[self + 1]);
        } else {
            const auto slice = detail::decode_slice<T>(comm.recv(src), tail_mode);
            out.insert(out.end(), slice.begin(), slice.end());
        }
    }
    return out;
}

/// Distributed sampling sort over P ranks: after the call, the concatenation
/// of the returned arrays in rank order is globally sorted and the global
/// multiset is preserved. The pluggable sorter is invoked exactly twice per
/// rank: once on the initial local data and once after redistribution. All
/// ranks must call collectively with a consistent cfg.
template <typename T, typename Sorter>
std::pair<std::vector<T>, sih_stats> sihsort(std::vector<T> local_data, sim::rank_comm& comm,
                                             const sih_config& cfg, const exec_backend& ex,
                                             Sorter&& sorter) {
    const std::size_t world = comm.world_size();
    const std::size_t sample_per_rank =
        cfg.sample_per_rank > 0 ? cfg.sample_per_rank : 32 * world;
    const std::size_t bins = cfg.bins > 0 ? cfg.bins : 8 * world;
    sih_stats stats;

    detail::check_consistent_config(cfg, comm);

    sorter(std::span<T>(local_data));  // local sort 1 of 2

    const auto samples = sample_local<T>(local_data, sample_per_rank);
    const auto summary = detail::global_summary<T>(local_data, samples, comm);

    splitter_set<T> splitters;
    if (summary.samples == 0) {
        // every rank is empty; fall back to trivial splitters
        splitters.values.assign(world > 0 ? world - 1 : 0, T{});
    } else {
        // Distributed histogram assembly: identical equal-width edges from
        // the global sample extremes, local tallies, then one count
        // all-reduce, so no rank ever materializes the gathered samples.
        key_histogram hist;
        hist.bin_edges = detail::equal_width_edges(detail::to_ld(summary.sample_min),
                                                   detail::to_ld(summary.sample_max), bins);
        std::vector<std::uint64_t> counts(hist.bin_edges.size() - 1, 0);
        detail::count_into_bins<T>(samples, hist.bin_edges, counts);
        hist.counts = comm.all_reduce_sum(std::move(counts));
        hist.total = summary.samples;
        splitters = select_splitters<T>(hist, world);
    }

    auto refined = refine_splitters<T>(local_data, std::move(splitters), comm, cfg, ex);
    stats.rounds_used = refined.rounds_used;
    stats.converged = refined.converged;
    stats.max_deviation = refined.max_deviation;

    const auto before = comm.counters();
    std::vector<T> out = redistribute<T>(local_data, refined.splitters, comm, summary.n, ex);
    const auto after = comm.counters();
    stats.redistribution_sends = after.p2p_sends - before.p2p_sends;
    stats.redistribution_bytes = after.p2p_bytes - before.p2p_bytes;
    stats.collective_ops = after.collective_ops;

    sorter(std::span<T>(out));  // local sort 2 of 2

    stats.output_count = out.size();
    return {std::move(out), stats};
}

/// Convenience overload using this library's merge sort as the local sorter.
template <typename T>
std::pair<std::vector<T>, sih_stats> sihsort(std::vector<T> local_data, sim::rank_comm& comm,
                                             const sih_config& cfg, const exec_backend& ex) {
    return sihsort<T>(std::move(local_data), comm, cfg, ex, [&ex](std::span<T> s) {
        auto buffers = sort_buffers<T>::with_capacity(s.size());
        merge_sort(s, buffers, ex);
    });
}

}  // namespace ak
