// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ak/dtype.hpp"
#include "ak/exec.hpp"

namespace ak::bench {

// ---------------------------------------------------------------------------
// Arithmetic kernels
// ---------------------------------------------------------------------------

/// Radial-basis-style kernel over n 3-D points with X, Y, Z stored inline
/// (component-interleaved, xyz.size() == 3 * out.size()):
///   out[i] = exp(-1 / (1 - sqrt(x^2 + y^2 + z^2)))
/// Squares are computed as self-multiplication. Points of norm 1 produce
/// non-finite values under standard floating-point semantics; they are legal
/// outputs, not errors.
template <typename T>
void rbf_kernel(std::span<const T> xyz, std::span<T> out, const exec_backend& ex) {
    static_assert(std::is_floating_point_v<T>);
    if (xyz.size() != 3 * out.size()) {
        throw std::invalid_argument("rbf_kernel: coordinate array must hold 3 * n values");
    }
    foreachindex(out.size(), ex, [&](std::size_t i) {
        const T x = xyz[3 * i];
        const T y = xyz[3 * i + 1];
        const T z = xyz[3 * i + 2];
        out[i] = std::exp(T(-1) / (T(1) - std::sqrt(x * x + y * y + z * z)));
    });
}

/// Runtime parameters of the pair-potential kernel; passing them at runtime
/// keeps constant propagation from folding them into the code.
struct ljg_params {
    double epsilon = 1.0;
    double sigma = 1.0;
    double r0 = 1.5;
    double cutoff = 3.0;
    double amp = 1.0;  ///< Gaussian amplitude
};

/// Lennard-Jones-Gauss pair energy between atoms1[i] and atoms2[i] (both
/// component-interleaved 3 * n arrays):
///   r < cutoff:  4*eps*((sigma/r)^12 - (sigma/r)^6)
///              + amp*exp(-(r - r0)^2 / (2*sigma^2))
///   r >= cutoff: 0 exactly
/// Integer powers are computed by repeated multiplication
/// (p3 = x*x*x, p6 = p3^2, p12 = p6^2).
template <typename T>
void ljg_kernel(std::span<const T> atoms1, std::span<const T> atoms2, const ljg_params& params,
                std::span<T> out, const exec_backend& ex) {
    static_assert(std::is_floating_point_v<T>);
    if (atoms1.size() != 3 * out.size() || atoms2.size() != 3 * out.size()) {
        throw std::invalid_argument("ljg_kernel: atom arrays must hold 3 * n values");
    }
    const T eps = static_cast<T>(params.epsilon);
    const T sigma = static_cast<T>(params.sigma);
    const T r0 = static_cast<T>(params.r0);
    const T cutoff = static_cast<T>(params.cutoff);
    const T amp = static_cast<T>(params.amp);
    foreachindex(out.size(), ex, [&](std::size_t i) {
        const T dx = atoms1[3 * i] - atoms2[3 * i];
        const T dy = atoms1[3 * i + 1] - atoms2[3 * i + 1];
        const T dz = atoms1[3 * i + 2] - atoms2[3 * i + 2];
        const T r = std::sqrt(dx * dx + dy * dy + dz * dz);
        if (r < cutoff) {
            const T sr = sigma / r;
            const T p3 = sr * sr * sr;
            const T p6 = p3 * p3;
            const T p12 = p6 * p6;
            const T lj = T(4) * eps * (p12 - p6);
            const T dr = r - r0;
            const T gauss = amp * std::exp(-(dr * dr) / (T(2) * sigma * sigma));
            out[i] = lj + gauss;
        } else {
            out[i] = T(0);
        }
    });
}

// ---------------------------------------------------------------------------
// Records, cost normalization, timing
// ---------------------------------------------------------------------------

/// One timed observation. For distributed sorting cases n is the per-rank
/// element count and workers the simulated rank count; for kernel cases n is
/// the total element count and workers the thread count.
struct bench_record {
    std::string case_name;
    std::string dtype;
    std::uint64_t n = 0;
    std::uint64_t workers = 1;
    std::uint64_t reps = 0;
    double mean_ms = 0.0;
    double stddev_ms = 0.0;
    double throughput_gbps = 0.0;
    double normalized_ms = 0.0;  ///< mean_ms scaled by the cost model (mean_ms when unscaled)
};

/// Accelerated-to-baseline combined cost ratio; normalized time is raw time
/// times the ratio for accelerated records and raw time otherwise.
struct cost_model {
    double accel_to_baseline_ratio = 22.0;
};

/// Pure transform: returns the records with normalized_ms set; raw times are
/// retained and record order is unchanged. accelerated must have one flag
/// per record.
std::vector<bench_record> normalize_cost(std::vector<bench_record> records,
                                         const cost_model& model,
                                         const std::vector<bool>& accelerated);

struct timing {
    double mean_ms = 0.0;
    double stddev_ms = 0.0;  ///< sample standard deviation over the reps
};

/// Runs body warmup times untimed, then reps times on a monotonic clock.
template <typename Body>
timing time_reps(std::size_t reps, std::size_t warmup, Body&& body) {
    using clock = std::chrono::steady_clock;
    for (std::size_t i = 0; i < warmup; ++i) {
        body();
    }
    std::vector<double> ms(reps);
    for (std::size_t i = 0; i < reps; ++i) {
        const auto t0 = clock::now();
        body();
        const auto t1 = clock::now();
        ms[i] = std::chrono::duration<double, std::milli>(t1 - t0).count();
    }
    timing t;
    for (double v : ms) t.mean_ms += v;
    t.mean_ms /= static_cast<double>(reps);
    if (reps > 1) {
        double ss = 0.0;
        for (double v : ms) ss += (v - t.mean_ms) * (v - t.mean_ms);
        t.stddev_ms = std::sqrt(ss / static_cast<double>(reps - 1));
    }
    return t;
}

// ---------------------------------------------------------------------------
// Harness
// ---------------------------------------------------------------------------

enum class bench_case { rbf, ljg, sort_weak, sort_strong, sihsort_sim };

const char* bench_case_name(bench_case c);

/// Usage-level failure (unknown case/dtype combination, bad counts); the CLI
/// maps it to exit code 2.
struct usage_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct bench_request {
    bench_case which = bench_case::rbf;
    dtype_code dtype = dtype_code::f32;
    std::uint64_t n = 1'000'000;         ///< total elements (rbf/ljg/sort-strong)
    std::uint64_t per_rank = 100'000;    ///< elements per rank (sort-weak/sihsort-sim)
    std::vector<std::uint64_t> ranks = {1};
    std::vector<std::uint64_t> threads = {0};  ///< 0 = default (AK_THREADS or hardware)
    std::uint64_t reps = 5;
    std::uint64_t warmup = 1;
    std::uint64_t seed = 42;
    double amp = 1.0;
    bool singular = false;  ///< rbf only: sample the full [0,1)^3 cube, norm-1 singularities included
    double cost_ratio = 1.0;
};

/// Runs the requested cases and returns one record per (ranks|threads)
/// entry. Throws usage_error for invalid case/dtype combinations or
/// reps < 3 / warmup < 1.
std::vector<bench_record> run_benchmark(const bench_request& req);

/// Per-rank stats block of the last sihsort-sim run, as flat key=value text.
struct sihsort_sim_report {
    std::vector<bench_record> records;
    std::string stats_text;
};

sihsort_sim_report run_sihsort_sim(const bench_request& req,
                                   const std::string& load_fixtures_dir = "",
                                   const std::string& save_fixtures_dir = "");

}  // namespace ak::bench
