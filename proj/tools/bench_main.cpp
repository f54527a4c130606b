// SPDX-License-Identifier: Apache-2.0
//
// Benchmark CLI over the library's arithmetic kernels and the simulated
// multi-rank sorter. Exit codes: 0 success, 2 usage error, 1 runtime failure.

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "ak/bench.hpp"
#include "ak/csv.hpp"

namespace {

void print_records(const std::vector<ak::bench::bench_record>& records) {
    std::printf("%-12s %-6s %12s %8s %6s %12s %12s %14s %14s\n", "case", "dtype", "n", "workers",
                "reps", "mean_ms", "stddev_ms", "gbps", "normalized_ms");
    for (const auto& r : records) {
        std::printf("%-12s %-6s %12llu %8llu %6llu %12.4f %12.4f %14.4f %14.4f\n",
                    r.case_name.c_str(), r.dtype.c_str(),
                    static_cast<unsigned long long>(r.n),
                    static_cast<unsigned long long>(r.workers),
                    static_cast<unsigned long long>(r.reps), r.mean_ms, r.stddev_ms,
                    r.throughput_gbps, r.normalized_ms);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parallel-primitives benchmark harness"};
    app.require_subcommand(1);

    ak::bench::bench_request req;
    std::string dtype = "f32";
    std::string csv_path;
    std::string load_fixtures;
    std::string save_fixtures;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--dtype", dtype, "element type: i16|i32|i64|i128|f32|f64")
            ->default_val("f32");
        sub->add_option("--reps", req.reps, "timed repetitions (>= 3)")->default_val(5);
        sub->add_option("--warmup", req.warmup, "discarded warmup runs (>= 1)")->default_val(1);
        sub->add_option("--seed", req.seed, "input generator seed")->default_val(42);
        sub->add_option("--cost-ratio", req.cost_ratio,
                        "accelerated-to-baseline cost ratio applied to normalized_ms")
            ->default_val(1.0);
        sub->add_option("--csv", csv_path, "write records to this CSV file");
        sub->add_option("--threads", req.threads,
                        "worker threads (comma list; 0 = AK_THREADS or hardware)")
            ->delimiter(',');
    };

    auto* rbf = app.add_subcommand("rbf", "radial-basis arithmetic kernel");
    rbf->add_option("--n", req.n, "points")->default_val(1'000'000);
    rbf->add_flag("--singular", req.singular,
                  "sample the full unit cube, including norm-1 singularities");
    add_common(rbf);

    auto* ljg = app.add_subcommand("ljg", "Lennard-Jones-Gauss pair-energy kernel");
    ljg->add_option("--n", req.n, "atom pairs")->default_val(1'000'000);
    ljg->add_option("--amp", req.amp, "Gaussian amplitude")->default_val(1.0);
    add_common(ljg);

    auto* weak = app.add_subcommand("sort-weak",
                                    "simulated-rank sort, fixed elements per rank");
    weak->add_option("--per-rank", req.per_rank, "elements per rank")->default_val(100'000);
    weak->add_option("--ranks", req.ranks, "simulated rank counts (comma list)")
        ->delimiter(',')
        ->default_val(std::vector<std::uint64_t>{1});
    add_common(weak);

    auto* strong = app.add_subcommand("sort-strong",
                                      "simulated-rank sort, fixed total divided over ranks");
    strong->add_option("--n", req.n, "total elements")->default_val(1'000'000);
    strong->add_option("--ranks", req.ranks, "simulated rank counts (comma list)")
        ->delimiter(',')
        ->default_val(std::vector<std::uint64_t>{1});
    add_common(strong);

    auto* sim = app.add_subcommand("sihsort-sim",
                                   "one simulated multi-rank sort with a stats report");
    sim->add_option("--per-rank", req.per_rank, "elements per rank")->default_val(100'000);
    sim->add_option("--ranks", req.ranks, "simulated ranks")
        ->delimiter(',')
        ->default_val(std::vector<std::uint64_t>{4});
    sim->add_option("--load-fixtures", load_fixtures,
                    "read rank inputs from DIR/rank_<r>.sihs instead of generating");
    sim->add_option("--save-fixtures", save_fixtures,
                    "write the rank inputs to DIR/rank_<r>.sihs before sorting");
    add_common(sim);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);  // --help
        }
        app.exit(e);
        return 2;
    }

    try {
        const auto parsed = ak::dtype_from_name(dtype);
        if (!parsed) {
            std::cerr << "unknown dtype: " << dtype << "\n";
            return 2;
        }
        req.dtype = *parsed;
        if (req.threads.empty()) {
            req.threads = {0};
        }

        std::vector<ak::bench::bench_record> records;
        if (rbf->parsed()) {
            req.which = ak::bench::bench_case::rbf;
            records = ak::bench::run_benchmark(req);
        } else if (ljg->parsed()) {
            req.which = ak::bench::bench_case::ljg;
            records = ak::bench::run_benchmark(req);
        } else if (weak->parsed()) {
            req.which = ak::bench::bench_case::sort_weak;
            records = ak::bench::run_benchmark(req);
        } else if (strong->parsed()) {
            req.which = ak::bench::bench_case::sort_strong;
            records = ak::bench::run_benchmark(req);
        } else if (sim->parsed()) {
            req.which = ak::bench::bench_case::sihsort_sim;
            auto report = ak::bench::run_sihsort_sim(req, load_fixtures, save_fixtures);
            records = report.records;
            std::cout << report.stats_text;
        }

        print_records(records);
        if (!csv_path.empty()) {
            ak::bench::emit_csv(std::filesystem::path(csv_path), records);
        }
    } catch (const ak::bench::usage_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
