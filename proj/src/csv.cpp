// SPDX-License-Identifier: Apache-2.0
#include "ak/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ak::bench {

namespace {

std::string quote_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

// Splits one CSV record, honoring quoted fields.
std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

}  // namespace

void emit_csv(std::ostream& out, const std::vector<bench_record>& records) {
    out << csv_header << "\n";
    for (const auto& r : records) {
        out << quote_field(r.case_name) << ',' << quote_field(r.dtype) << ',' << r.n << ','
            << r.workers << ',' << r.reps << ',' << fmt_double(r.mean_ms) << ','
            << fmt_double(r.stddev_ms) << ',' << fmt_double(r.throughput_gbps) << ','
            << fmt_double(r.normalized_ms) << "\n";
    }
}

void emit_csv(const std::filesystem::path& path, const std::vector<bench_record>& records) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw std::runtime_error("csv: cannot open " + path.string() + " for writing");
    }
    emit_csv(out, records);
    out.flush();
    if (!out) {
        throw std::runtime_error("csv: write to " + path.string() + " failed");
    }
}

std::vector<bench_record> parse_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("csv: cannot open " + path.string() + " for reading");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("csv: " + path.string() + " is empty");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != csv_header) {
        throw std::runtime_error("csv: unexpected header in " + path.string());
    }
    std::vector<bench_record> records;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto f = split_row(line);
        if (f.size() != 9) {
            throw std::runtime_error("csv: malformed row in " + path.string());
        }
        bench_record r;
        r.case_name = f[0];
        r.dtype = f[1];
        r.n = std::stoull(f[2]);
        r.workers = std::stoull(f[3]);
        r.reps = std::stoull(f[4]);
        r.mean_ms = std::stod(f[5]);
        r.stddev_ms = std::stod(f[6]);
        r.throughput_gbps = std::stod(f[7]);
        r.normalized_ms = std::stod(f[8]);
        records.push_back(std::move(r));
    }
    return records;
}

}  // namespace ak::bench
