// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>
#include <numeric>
#include <random>

#include "ak/predicates.hpp"
#include "ak/reduce.hpp"
#include "ak/scan.hpp"
#include "ak/search.hpp"
#include "test_utils.hpp"

using ak::accumulate;
using ak::all_pred;
using ak::any_pred;
using ak::exec_backend;
using ak::mapreduce;
using ak::predicate_algo;
using ak::reduce;
using ak::reduce_config;
using ak::scan_mode;
using ak::scan_spec;
using ak::search_side;
using ak::searchsorted;

namespace {
const exec_backend seq = exec_backend::sequential();
const exec_backend thr2 = exec_backend::threaded(2);
const exec_backend thr8 = exec_backend::threaded(8);
std::vector<exec_backend> backends() { return {seq, thr2, thr8}; }
auto plus = [](auto a, auto b) { return a + b; };
}  // namespace

TEST_CASE("reduce: arithmetic series and empty fold") {
    std::vector<std::int64_t> data(100);
    std::iota(data.begin(), data.end(), 1);
    for (const auto& ex : backends()) {
        CHECK(reduce<std::int64_t>(plus, data, {0, 256}, ex) == 5050);
    }
    const std::int64_t sentinel = std::numeric_limits<std::int64_t>::lowest();
    auto max_op = [](std::int64_t a, std::int64_t b) { return a > b ? a : b; };
    CHECK(reduce<std::int64_t>(max_op, std::span<const std::int64_t>{}, {sentinel, 256}, thr8) ==
          sentinel);
}

TEST_CASE("reduce: matches the sequential left fold exactly on 1e5 ints") {
    std::mt19937_64 rng(7);
    const auto data = testutil::random_values<std::int64_t>(rng, 100000);
    const auto want = testutil::seq_fold<std::int64_t>(0, data, plus);
    for (const auto& ex : backends()) {
        CHECK(reduce<std::int64_t>(plus, data, {0, 256}, ex) == want);
    }
}

TEST_CASE("reduce: switch_below values route through both finishes") {
    std::mt19937_64 rng(8);
    const auto data = testutil::random_values<std::int32_t>(rng, 4097);
    const auto want = testutil::seq_fold<std::int32_t>(0, data, plus);
    for (std::size_t sb : {std::size_t{0}, std::size_t{1}, std::size_t{2}, std::size_t{256}}) {
        CHECK(reduce<std::int32_t>(plus, data, {0, sb}, thr8) == want);
    }
}

TEST_CASE("mapreduce: small hand cases") {
    const std::vector<int> data = {-3, 1, 2};
    auto absf = [](int x) { return x < 0 ? -x : x; };
    auto max_op = [](int a, int b) { return a > b ? a : b; };
    CHECK(mapreduce<int>(absf, max_op, std::span<const int>(data), {0, 256}, thr2) == 3);

    // counting via mapreduce
    std::vector<int> ones(777);
    CHECK(mapreduce<std::int64_t>([](int) { return std::int64_t{1}; }, plus,
                                  std::span<const int>(ones), {0, 256}, thr8) == 777);
}

TEST_CASE("mapreduce: per-dimension minimum equals the brute-force bounding box") {
    struct point { double x, y, z; };
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> dist(-100.0, 100.0);
    std::vector<point> pts(10000);
    for (auto& p : pts) {
        p = {dist(rng), dist(rng), dist(rng)};
    }
    point lo{1e300, 1e300, 1e300};
    for (const auto& p : pts) {
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        lo.z = std::min(lo.z, p.z);
    }
    auto min3 = [](point a, point b) {
        return point{std::min(a.x, b.x), std::min(a.y, b.y), std::min(a.z, b.z)};
    };
    const auto got = mapreduce<point>([](const point& p) { return p; }, min3,
                                      std::span<const point>(pts),
                                      {point{1e300, 1e300, 1e300}, 256}, thr8);
    CHECK(got.x == lo.x);
    CHECK(got.y == lo.y);
    CHECK(got.z == lo.z);
}

TEST_CASE("reduce: f32 sums match the oracle within 1e-5 relative") {
    std::mt19937_64 rng(10);
    const auto data = testutil::random_values<float>(rng, 100000);
    const auto want = static_cast<double>(testutil::seq_fold<float>(0.0f, data, plus));
    for (const auto& ex : backends()) {
        const auto got = static_cast<double>(reduce<float>(plus, data, {0.0f, 256}, ex));
        CHECK(testutil::approx_rel(got, want, 1e-5));
    }
}

TEST_CASE("accumulate: spec examples") {
    const std::vector<int> ones = {1, 1, 1, 1};
    auto inc = accumulate<int>(plus, ones, {scan_mode::inclusive, 0, 4096}, thr2);
    CHECK(inc == std::vector<int>{1, 2, 3, 4});

    const std::vector<int> xs = {1, 2, 3};
    auto exc = accumulate<int>(plus, xs, {scan_mode::exclusive, 0, 4096}, thr2);
    CHECK(exc == std::vector<int>{0, 1, 3});
}

TEST_CASE("accumulate: matches the sequential scan for every chunk size") {
    std::mt19937_64 rng(11);
    const auto data = testutil::random_values<std::int64_t>(rng, 100000);
    const auto want_inc = testutil::seq_scan<std::int64_t>(0, data, plus, true);
    const auto want_exc = testutil::seq_scan<std::int64_t>(0, data, plus, false);
    for (std::size_t cs : {std::size_t{1}, std::size_t{7}, std::size_t{1024}}) {
        for (const auto& ex : backends()) {
            CHECK(accumulate<std::int64_t>(plus, data, {scan_mode::inclusive, 0, cs}, ex) ==
                  want_inc);
            CHECK(accumulate<std::int64_t>(plus, data, {scan_mode::exclusive, 0, cs}, ex) ==
                  want_exc);
        }
    }
}

TEST_CASE("accumulate: in-place and argument checking") {
    std::vector<int> data = {5, 4, 3, 2, 1};
    accumulate<int>(plus, std::span<const int>(data), {scan_mode::inclusive, 0, 2}, thr2,
                    std::span<int>(data));
    CHECK(data == std::vector<int>{5, 9, 12, 14, 15});

    std::vector<int> bad(4);
    CHECK_THROWS_AS(accumulate<int>(plus, std::span<const int>(data),
                                    {scan_mode::inclusive, 0, 2}, thr2, std::span<int>(bad)),
                    std::invalid_argument);
    CHECK_THROWS_AS(accumulate<int>(plus, std::span<const int>(data),
                                    {scan_mode::inclusive, 0, 0}, thr2),
                    std::invalid_argument);
}

TEST_CASE("accumulate: output independent of thread count (seed for nonneutral init)") {
    std::mt19937_64 rng(12);
    const auto data = testutil::random_values<std::int32_t>(rng, 5000);
    const scan_spec<std::int32_t> spec{scan_mode::inclusive, 100, 64};
    const auto base = accumulate<std::int32_t>(plus, data, spec, seq);
    CHECK(base[0] == 100 + data[0]);
    for (std::size_t t : {1, 2, 8}) {
        CHECK(accumulate<std::int32_t>(plus, data, spec, exec_backend::threaded(t)) == base);
    }
}

TEST_CASE("searchsorted: spec examples") {
    const std::vector<int> hay = {1, 2, 4, 4, 7};
    const std::vector<int> needles = {4, 0, 9};
    const auto first = searchsorted<int>(hay, needles, search_side::first, thr2);
    const auto last = searchsorted<int>(hay, needles, search_side::last, thr2);
    CHECK(first[0] == 2);  // count of elements < 4
    CHECK(last[0] == 4);   // count of elements <= 4
    CHECK(first[1] == 0);  // below all
    CHECK(last[1] == 0);
    CHECK(first[2] == 5);  // above all
    CHECK(last[2] == 5);
}

TEST_CASE("searchsorted: linear-scan oracle and sandwich property") {
    std::mt19937_64 rng(13);
    auto hay = testutil::random_values<std::int32_t>(rng, 2000);
    std::sort(hay.begin(), hay.end());
    const auto needles = testutil::random_values<std::int32_t>(rng, 500);
    const auto first = searchsorted<std::int32_t>(hay, needles, search_side::first, thr8);
    const auto last = searchsorted<std::int32_t>(hay, needles, search_side::last, thr8);
    for (std::size_t i = 0; i < needles.size(); ++i) {
        CHECK(first[i] == testutil::count_less<std::int32_t>(hay, needles[i]));
        CHECK(last[i] == testutil::count_less_equal<std::int32_t>(hay, needles[i]));
        // sandwich: everything left of first is < v, everything right of last is > v
        if (first[i] > 0) {
            CHECK(hay[first[i] - 1] < needles[i]);
        }
        if (last[i] < hay.size()) {
            CHECK(hay[last[i]] > needles[i]);
        }
    }
}

TEST_CASE("searchsorted: optional validation flag") {
    const std::vector<int> unsorted = {3, 1, 2};
    const std::vector<int> needles = {2};
    CHECK_NOTHROW(searchsorted<int>(unsorted, needles, search_side::first, seq));
    CHECK_THROWS_AS(searchsorted<int>(unsorted, needles, search_side::first, seq,
                                      std::less<int>{}, true),
                    std::invalid_argument);
}

TEST_CASE("predicates: trivial and empty cases") {
    const std::vector<int> zeros(100, 0);
    const std::vector<int> ones(100, 1);
    auto positive = [](int x) { return x > 0; };
    auto is_one = [](int x) { return x == 1; };
    for (const auto& ex : backends()) {
        for (auto algo : {predicate_algo::early_exit, predicate_algo::via_mapreduce}) {
            CHECK_FALSE(any_pred<int>(zeros, positive, ex, algo));
            CHECK(all_pred<int>(ones, is_one, ex, algo));
            CHECK_FALSE(any_pred<int>(std::span<const int>{}, positive, ex, algo));
            CHECK(all_pred<int>(std::span<const int>{}, positive, ex, algo));
        }
    }
}

TEST_CASE("predicates: random instances match the brute-force disjunction") {
    std::mt19937_64 rng(14);
    std::vector<std::uint8_t> data(100000);
    for (auto& b : data) {
        b = (rng() & 0xfff) == 0 ? 1 : 0;  // sparse trues
    }
    bool want = false;
    for (auto b : data) {
        want = want || b != 0;
    }
    auto truthy = [](std::uint8_t b) { return b != 0; };
    for (const auto& ex : backends()) {
        CHECK(any_pred<std::uint8_t>(data, truthy, ex) == want);
    }
}

TEST_CASE("predicates: fast path equals conservative path on 1e3 random instances") {
    std::mt19937_64 rng(15);
    for (int inst = 0; inst < 1000; ++inst) {
        const std::size_t n = rng() % 200;
        std::vector<std::int32_t> data = testutil::random_values<std::int32_t>(rng, n);
        const std::int32_t cut = static_cast<std::int32_t>(rng() % 20001) - 10000;
        auto pred = [cut](std::int32_t x) { return x < cut; };
        const auto& ex = inst % 2 == 0 ? thr2 : thr8;
        CHECK(any_pred<std::int32_t>(data, pred, ex, predicate_algo::early_exit) ==
              any_pred<std::int32_t>(data, pred, ex, predicate_algo::via_mapreduce));
        CHECK(all_pred<std::int32_t>(data, pred, ex, predicate_algo::early_exit) ==
              all_pred<std::int32_t>(data, pred, ex, predicate_algo::via_mapreduce));
    }
}

TEST_CASE("predicates: duality all(p) == !any(!p)") {
    std::mt19937_64 rng(16);
    for (int inst = 0; inst < 200; ++inst) {
        const std::size_t n = rng() % 500;
        const auto data = testutil::random_values<std::int32_t>(rng, n);
        const std::int32_t cut = static_cast<std::int32_t>(rng() % 20001) - 10000;
        auto pred = [cut](std::int32_t x) { return x < cut; };
        auto not_pred = [cut](std::int32_t x) { return !(x < cut); };
        CHECK(all_pred<std::int32_t>(data, pred, thr8) ==
              !any_pred<std::int32_t>(data, not_pred, thr8));
    }
}
