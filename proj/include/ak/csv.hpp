// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <ostream>
#include <vector>

#include "ak/bench.hpp"

namespace ak::bench {

inline constexpr const char* csv_header =
    "case,dtype,n,workers,reps,mean_ms,stddev_ms,throughput_gbps,normalized_ms";

/// Writes the header plus one row per record, in insertion order, with
/// RFC-4180-style quoting. Times carry nine significant digits.
void emit_csv(std::ostream& out, const std::vector<bench_record>& records);

/// File variant; unwritable destinations raise std::runtime_error.
void emit_csv(const std::filesystem::path& path, const std::vector<bench_record>& records);

/// Parses a file produced by emit_csv (header validated).
std::vector<bench_record> parse_csv(const std::filesystem::path& path);

}  // namespace ak::bench
