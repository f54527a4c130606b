// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

#include "ak/exec.hpp"

using ak::exec_backend;
using ak::exec_kind;
using ak::foreachindex;
using ak::index_range;
using ak::partition;

TEST_CASE("partition: spec examples") {
    CHECK(partition(0, 4).empty());
    CHECK(partition(7, 1) == std::vector<index_range>{{0, 7}});
    CHECK(partition(10, 3) == std::vector<index_range>{{0, 4}, {4, 7}, {7, 10}});
}

TEST_CASE("partition: rejects zero workers") {
    CHECK_THROWS_AS(partition(5, 0), std::invalid_argument);
}

TEST_CASE("partition laws over the full small domain") {
    // coverage, disjointness, ordering, and max size spread of 1 for all
    // 0 <= n <= 10^4, 1 <= p <= 64
    for (std::size_t n = 0; n <= 10000; ++n) {
        for (std::size_t p = 1; p <= 64; ++p) {
            const auto ranges = partition(n, p);
            REQUIRE(ranges.size() == std::min(p, n));
            std::size_t expect_begin = 0;
            std::size_t min_len = SIZE_MAX;
            std::size_t max_len = 0;
            for (const auto& r : ranges) {
                REQUIRE(r.begin == expect_begin);  // contiguous, ordered, disjoint
                REQUIRE(r.end > r.begin);          // nonempty
                min_len = std::min(min_len, r.size());
                max_len = std::max(max_len, r.size());
                expect_begin = r.end;
            }
            REQUIRE(expect_begin == n);  // exact coverage
            if (!ranges.empty()) {
                REQUIRE(max_len - min_len <= 1);
            }
        }
    }
}

TEST_CASE("foreachindex: copy kernel") {
    const std::vector<int> src = {1, 2, 3};
    std::vector<int> dst(3, 0);
    for (auto ex : {exec_backend::sequential(), exec_backend::threaded(4)}) {
        std::fill(dst.begin(), dst.end(), 0);
        foreachindex(src.size(), ex, [&](std::size_t i) { dst[i] = src[i]; });
        CHECK(dst == src);
    }
}

TEST_CASE("foreachindex: n = 0 invokes nothing") {
    const auto ex = exec_backend::threaded(2);
    std::atomic<int> calls{0};
    foreachindex(0, ex, [&](std::size_t) { ++calls; });
    CHECK(calls == 0);
}

TEST_CASE("foreachindex: exactly-once over 1e5 indices on 8 threads") {
    const std::size_t n = 100000;
    const auto ex = exec_backend::threaded(8);
    std::vector<std::atomic<std::uint32_t>> counts(n);
    foreachindex(n, ex, [&](std::size_t i) {
        counts[i].fetch_add(1, std::memory_order_relaxed);
    });
    for (std::size_t i = 0; i < n; ++i) {
        REQUIRE(counts[i].load() == 1);
    }
}

TEST_CASE("foreachindex: backend equivalence for an index-local kernel") {
    const std::size_t n = 4096 * 3 + 17;
    std::vector<std::uint64_t> seq_out(n), thr_out(n);
    auto kernel = [](std::size_t i) { return (i * 2654435761u) ^ (i >> 3); };
    foreachindex(n, exec_backend::sequential(), [&](std::size_t i) { seq_out[i] = kernel(i); });
    for (std::size_t t : {1, 2, 8}) {
        foreachindex(n, exec_backend::threaded(t), [&](std::size_t i) { thr_out[i] = kernel(i); });
        CHECK(seq_out == thr_out);
    }
}

TEST_CASE("foreachindex: kernel failure aborts and propagates") {
    const auto ex = exec_backend::threaded(4);
    std::atomic<std::uint64_t> visited{0};
    auto run = [&] {
        foreachindex(1 << 20, ex, [&](std::size_t i) {
            if (i == 12345) {
                throw std::runtime_error("kernel failure");
            }
            visited.fetch_add(1, std::memory_order_relaxed);
        });
    };
    CHECK_THROWS_AS(run(), std::runtime_error);
    // the abort flag stops remaining blocks; some work may have happened
    CHECK(visited.load() < (1u << 20));

    // sequential backend propagates too
    CHECK_THROWS_AS(
        foreachindex(10, exec_backend::sequential(),
                     [](std::size_t i) { if (i == 5) throw std::runtime_error("x"); }),
        std::runtime_error);
}

TEST_CASE("backend construction and thread counts") {
    CHECK(exec_backend::sequential().kind() == exec_kind::sequential);
    CHECK(exec_backend::sequential().thread_count() == 1);
    CHECK(exec_backend::threaded(3).thread_count() == 3);
    CHECK_THROWS_AS(exec_backend::threaded(0), std::invalid_argument);
}

TEST_CASE("AK_THREADS selects the default thread count") {
    ::setenv("AK_THREADS", "5", 1);
    CHECK(exec_backend::threaded().thread_count() == 5);
    ::setenv("AK_THREADS", "bogus", 1);
    CHECK_THROWS_AS(exec_backend::threaded(), std::invalid_argument);
    ::setenv("AK_THREADS", "0", 1);
    CHECK_THROWS_AS(exec_backend::threaded(), std::invalid_argument);
    ::unsetenv("AK_THREADS");
    CHECK(exec_backend::threaded().thread_count() >= 1);
}

TEST_CASE("backend handles are shareable and reusable across calls") {
    const auto ex = exec_backend::threaded(4);
    for (int round = 0; round < 50; ++round) {
        std::vector<int> out(1000, 0);
        foreachindex(out.size(), ex, [&](std::size_t i) { out[i] = 1; });
        CHECK(std::accumulate(out.begin(), out.end(), 0) == 1000);
    }
}
