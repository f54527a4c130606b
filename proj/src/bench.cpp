// SPDX-License-Identifier: Apache-2.0
#include "ak/bench.hpp"

#include <filesystem>
#include <random>
#include <sstream>

#include "ak/fixture.hpp"
#include "ak/sihsort.hpp"
#include "ak/sim_comm.hpp"

namespace ak::bench {

const char* bench_case_name(bench_case c) {
    switch (c) {
        case bench_case::rbf: return "rbf";
        case bench_case::ljg: return "ljg";
        case bench_case::sort_weak: return "sort-weak";
        case bench_case::sort_strong: return "sort-strong";
        case bench_case::sihsort_sim: return "sihsort-sim";
    }
    return "unknown";
}

std::vector<bench_record> normalize_cost(std::vector<bench_record> records,
                                         const cost_model& model,
                                         const std::vector<bool>& accelerated) {
    if (model.accel_to_baseline_ratio <= 0.0) {
        throw std::invalid_argument("normalize_cost: ratio must be positive");
    }
    if (accelerated.size() != records.size()) {
        throw std::invalid_argument("normalize_cost: one accelerated flag per record required");
    }
    for (std::size_t i = 0; i < records.size(); ++i) {
        records[i].normalized_ms =
            accelerated[i] ? records[i].mean_ms * model.accel_to_baseline_ratio
                           : records[i].mean_ms;
    }
    return records;
}

namespace {

template <typename T>
std::vector<T> random_keys(std::mt19937_64& rng, std::size_t count) {
    std::vector<T> out(count);
    if constexpr (std::is_same_v<T, int128>) {
        for (auto& v : out) {
            v = (static_cast<int128>(rng()) << 64) | static_cast<int128>(rng());
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

template <typename T>
std::vector<T> random_coords(std::mt19937_64& rng, std::size_t points, T lo, T hi) {
    std::uniform_real_distribution<T> dist(lo, hi);
    std::vector<T> out(3 * points);
    for (auto& v : out) {
        v = dist(rng);
    }
    return out;
}

double throughput_gbps(std::uint64_t bytes, double mean_ms) {
    return mean_ms > 0.0 ? static_cast<double>(bytes) / 1e9 / (mean_ms / 1e3) : 0.0;
}

exec_backend backend_for(std::uint64_t threads) {
    return threads == 0 ? exec_backend::threaded() : exec_backend::threaded(threads);
}

void check_reps(const bench_request& req) {
    if (req.reps < 3) {
        throw usage_error("reps must be >= 3");
    }
    if (req.warmup < 1) {
        throw usage_error("warmup must be >= 1");
    }
}

template <typename T>
bench_record run_rbf(const bench_request& req, std::uint64_t threads) {
    const auto ex = backend_for(threads);
    std::mt19937_64 rng(req.seed);
    const T hi = req.singular ? T(1) : T(0.5);
    const auto xyz = random_coords<T>(rng, req.n, T(0), hi);
    std::vector<T> out(req.n);
    const auto t = time_reps(req.reps, req.warmup, [&] {
        rbf_kernel<T>(xyz, std::span<T>(out), ex);
    });
    bench_record rec;
    rec.case_name = "rbf";
    rec.dtype = dtype_name(dtype_of<T>());
    rec.n = req.n;
    rec.workers = ex.thread_count();
    rec.reps = req.reps;
    rec.mean_ms = t.mean_ms;
    rec.stddev_ms = t.stddev_ms;
    rec.throughput_gbps = throughput_gbps(req.n * sizeof(T), t.mean_ms);
    rec.normalized_ms = t.mean_ms;
    return rec;
}

template <typename T>
bench_record run_ljg(const bench_request& req, std::uint64_t threads) {
    const auto ex = backend_for(threads);
    std::mt19937_64 rng(req.seed);
    // [0, 2)^3 coordinates: distances span both sides of the default cutoff
    const auto a1 = random_coords<T>(rng, req.n, T(0), T(2));
    const auto a2 = random_coords<T>(rng, req.n, T(0), T(2));
    ljg_params params;
    params.amp = req.amp;
    std::vector<T> out(req.n);
    const auto t = time_reps(req.reps, req.warmup, [&] {
        ljg_kernel<T>(a1, a2, params, std::span<T>(out), ex);
    });
    bench_record rec;
    rec.case_name = "ljg";
    rec.dtype = dtype_name(dtype_of<T>());
    rec.n = req.n;
    rec.workers = ex.thread_count();
    rec.reps = req.reps;
    rec.mean_ms = t.mean_ms;
    rec.stddev_ms = t.stddev_ms;
    rec.throughput_gbps = throughput_gbps(req.n * sizeof(T), t.mean_ms);
    rec.normalized_ms = t.mean_ms;
    return rec;
}

struct sim_run_result {
    std::vector<sih_stats> stats;
    std::vector<std::uint64_t> out_counts;
};

// One full simulated-world sort of the given per-rank inputs.
template <typename T>
sim_run_result run_world_sort(const std::vector<std::vector<T>>& inputs,
                              std::uint64_t threads_per_rank) {
    const std::size_t world_size = inputs.size();
    sim_run_result result;
    result.stats.resize(world_size);
    result.out_counts.resize(world_size);
    sim::world w(world_size);
    sim::run_ranks(w, [&](sim::rank_comm& comm) {
        const auto ex = threads_per_rank == 0 ? exec_backend::sequential()
                                              : exec_backend::threaded(threads_per_rank);
        auto [out, stats] = sihsort<T>(inputs[comm.rank()], comm, sih_config{}, ex);
        result.stats[comm.rank()] = stats;
        result.out_counts[comm.rank()] = out.size();
    });
    return result;
}

template <typename T>
std::vector<std::vector<T>> generate_rank_inputs(std::uint64_t seed, std::size_t world_size,
                                                 const std::vector<std::uint64_t>& counts) {
    std::vector<std::vector<T>> inputs(world_size);
    for (std::size_t r = 0; r < world_size; ++r) {
        std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * (r + 1));
        inputs[r] = random_keys<T>(rng, counts[r]);
    }
    return inputs;
}

std::vector<std::uint64_t> per_rank_counts(bench_case which, const bench_request& req,
                                           std::uint64_t ranks) {
    std::vector<std::uint64_t> counts(ranks);
    if (which == bench_case::sort_strong) {
        const std::uint64_t base = req.n / ranks;
        const std::uint64_t rem = req.n % ranks;
        for (std::uint64_t r = 0; r < ranks; ++r) {
            counts[r] = base + (r < rem ? 1 : 0);
        }
    } else {
        for (auto& c : counts) {
            c = req.per_rank;
        }
    }
    return counts;
}

template <typename T>
bench_record run_sort_case(const bench_request& req, std::uint64_t ranks) {
    if (ranks == 0) {
        throw usage_error("ranks must be >= 1");
    }
    const auto counts = per_rank_counts(req.which, req, ranks);
    const auto inputs = generate_rank_inputs<T>(req.seed, ranks, counts);
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    const std::uint64_t threads = req.threads.empty() ? 0 : req.threads.front();
    const auto t = time_reps(req.reps, req.warmup, [&] {
        run_world_sort<T>(inputs, threads);
    });
    bench_record rec;
    rec.case_name = bench_case_name(req.which);
    rec.dtype = dtype_name(dtype_of<T>());
    rec.n = total / ranks;
    rec.workers = ranks;
    rec.reps = req.reps;
    rec.mean_ms = t.mean_ms;
    rec.stddev_ms = t.stddev_ms;
    rec.throughput_gbps = throughput_gbps(total * sizeof(T), t.mean_ms);
    rec.normalized_ms = t.mean_ms;
    return rec;
}

template <typename T>
std::vector<bench_record> run_typed(const bench_request& req) {
    std::vector<bench_record> records;
    switch (req.which) {
        case bench_case::rbf:
        case bench_case::ljg: {
            if constexpr (!std::is_floating_point_v<T>) {
                throw usage_error(std::string("case ") + bench_case_name(req.which) +
                                  " supports f32/f64 only");
            } else {
                for (auto threads : req.threads) {
                    records.push_back(req.which == bench_case::rbf ? run_rbf<T>(req, threads)
                                                                   : run_ljg<T>(req, threads));
                }
            }
            break;
        }
        case bench_case::sort_weak:
        case bench_case::sort_strong:
        case bench_case::sihsort_sim: {
            for (auto ranks : req.ranks) {
                records.push_back(run_sort_case<T>(req, ranks));
            }
            break;
        }
    }
    return records;
}

template <typename F>
auto dispatch_dtype(dtype_code code, F f) {
    switch (code) {
        case dtype_code::i16: return f.template operator()<std::int16_t>();
        case dtype_code::i32: return f.template operator()<std::int32_t>();
        case dtype_code::i64: return f.template operator()<std::int64_t>();
        case dtype_code::i128: return f.template operator()<int128>();
        case dtype_code::f32: return f.template operator()<float>();
        case dtype_code::f64: return f.template operator()<double>();
    }
    throw usage_error("unknown dtype");
}

}  // namespace

std::vector<bench_record> run_benchmark(const bench_request& req) {
    check_reps(req);
    auto records = dispatch_dtype(req.dtype, [&]<typename T>() { return run_typed<T>(req); });
    if (req.cost_ratio != 1.0) {
        records = normalize_cost(std::move(records), cost_model{req.cost_ratio},
                                 std::vector<bool>(records.size(), true));
    }
    return records;
}

namespace {

template <typename T>
sihsort_sim_report sim_report(const bench_request& req, const std::string& load_dir,
                              const std::string& save_dir) {
    const std::uint64_t ranks = req.ranks.empty() ? 1 : req.ranks.front();
    if (ranks == 0) {
        throw usage_error("ranks must be >= 1");
    }
    std::vector<std::vector<T>> inputs;
    if (!load_dir.empty()) {
        inputs.resize(ranks);
        for (std::uint64_t r = 0; r < ranks; ++r) {
            const auto path = std::filesystem::path(load_dir) /
                              ("rank_" + std::to_string(r) + ".sihs");
            std::uint32_t file_rank = 0;
            inputs[r] = read_fixture<T>(path, &file_rank);
            if (file_rank != r) {
                throw std::runtime_error("fixture " + path.string() + " carries rank " +
                                         std::to_string(file_rank) + ", expected " +
                                         std::to_string(r));
            }
        }
    } else {
        const auto counts = per_rank_counts(bench_case::sihsort_sim, req, ranks);
        inputs = generate_rank_inputs<T>(req.seed, ranks, counts);
    }
    if (!save_dir.empty()) {
        std::filesystem::create_directories(save_dir);
        for (std::uint64_t r = 0; r < ranks; ++r) {
            const auto path = std::filesystem::path(save_dir) /
                              ("rank_" + std::to_string(r) + ".sihs");
            write_fixture<T>(path, static_cast<std::uint32_t>(r), std::span<const T>(inputs[r]));
        }
    }

    const std::uint64_t threads = req.threads.empty() ? 0 : req.threads.front();
    sim_run_result last;
    std::uint64_t total = 0;
    for (const auto& in : inputs) total += in.size();
    const auto t = time_reps(req.reps, req.warmup, [&] {
        last = run_world_sort<T>(inputs, threads);
    });

    sihsort_sim_report report;
    bench_record rec;
    rec.case_name = "sihsort-sim";
    rec.dtype = dtype_name(dtype_of<T>());
    rec.n = ranks > 0 ? total / ranks : 0;
    rec.workers = ranks;
    rec.reps = req.reps;
    rec.mean_ms = t.mean_ms;
    rec.stddev_ms = t.stddev_ms;
    rec.throughput_gbps = throughput_gbps(total * sizeof(T), t.mean_ms);
    rec.normalized_ms = t.mean_ms;
    report.records.push_back(rec);

    double max_imbalance = 0.0;
    const double mean_out = ranks > 0 ? static_cast<double>(total) / ranks : 0.0;
    for (auto c : last.out_counts) {
        if (mean_out > 0.0) {
            max_imbalance = std::max(max_imbalance, static_cast<double>(c) / mean_out);
        }
    }
    std::ostringstream os;
    os << "case=sihsort-sim\n";
    os << "dtype=" << dtype_name(dtype_of<T>()) << "\n";
    os << "ranks=" << ranks << "\n";
    os << "total_elements=" << total << "\n";
    os << "rounds=" << (last.stats.empty() ? 0 : last.stats[0].rounds_used) << "\n";
    os << "converged=" << (last.stats.empty() ? 0 : (last.stats[0].converged ? 1 : 0)) << "\n";
    os << "max_imbalance=" << max_imbalance << "\n";
    for (std::uint64_t r = 0; r < ranks; ++r) {
        os << "msg_count_rank_" << r << "=" << last.stats[r].redistribution_sends << "\n";
        os << "collectives_rank_" << r << "=" << last.stats[r].collective_ops << "\n";
        os << "out_count_rank_" << r << "=" << last.stats[r].output_count << "\n";
    }
    report.stats_text = os.str();
    return report;
}

}  // namespace

sihsort_sim_report run_sihsort_sim(const bench_request& req, const std::string& load_fixtures_dir,
                                   const std::string& save_fixtures_dir) {
    check_reps(req);
    auto report = dispatch_dtype(req.dtype, [&]<typename T>() {
        return sim_report<T>(req, load_fixtures_dir, save_fixtures_dir);
    });
    if (req.cost_ratio != 1.0) {
        report.records = normalize_cost(std::move(report.records), cost_model{req.cost_ratio},
                                        std::vector<bool>(report.records.size(), true));
    }
    return report;
}

}  // namespace ak::bench
