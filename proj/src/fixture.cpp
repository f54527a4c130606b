// SPDX-License-Identifier: Apache-2.0
#include "ak/fixture.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace ak {

static_assert(std::endian::native == std::endian::little,
              "fixture files are little-endian; big-endian hosts are not supported");

namespace {

constexpr char magic[4] = {'S', 'I', 'H', 'S'};

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
    throw std::runtime_error("fixture " + path.string() + ": " + what);
}

}  // namespace

fixture_header read_fixture_header(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(path, "cannot open for reading");
    }
    char m[4];
    std::uint32_t version = 0;
    std::uint32_t dtype = 0;
    fixture_header h;
    in.read(m, 4);
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&dtype), 4);
    in.read(reinterpret_cast<char*>(&h.rank), 4);
    in.read(reinterpret_cast<char*>(&h.count), 8);
    if (!in) {
        fail(path, "truncated header");
    }
    if (std::memcmp(m, magic, 4) != 0) {
        fail(path, "bad magic (expected SIHS)");
    }
    if (version != fixture_version) {
        fail(path, "unsupported version " + std::to_string(version));
    }
    if (dtype < 1 || dtype > 6) {
        fail(path, "unknown dtype code " + std::to_string(dtype));
    }
    h.version = version;
    h.dtype = static_cast<dtype_code>(dtype);
    return h;
}

namespace detail {

void write_fixture_bytes(const std::filesystem::path& path, dtype_code dtype, std::uint32_t rank,
                         std::uint64_t count, const void* data, std::size_t bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        fail(path, "cannot open for writing");
    }
    const std::uint32_t version = fixture_version;
    const auto dcode = static_cast<std::uint32_t>(dtype);
    out.write(magic, 4);
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(&dcode), 4);
    out.write(reinterpret_cast<const char*>(&rank), 4);
    out.write(reinterpret_cast<const char*>(&count), 8);
    if (bytes > 0) {
        out.write(static_cast<const char*>(data), static_cast<std::streamsize>(bytes));
    }
    if (!out) {
        fail(path, "write failed");
    }
}

std::vector<std::byte> read_fixture_bytes(const std::filesystem::path& path, dtype_code expect,
                                          fixture_header& header) {
    header = read_fixture_header(path);
    if (header.dtype != expect) {
        fail(path, std::string("dtype mismatch: file holds ") + dtype_name(header.dtype) +
                       ", expected " + dtype_name(expect));
    }
    std::ifstream in(path, std::ios::binary);
    in.seekg(24);
    std::vector<std::byte> bytes(header.count * dtype_width(header.dtype));
    if (!bytes.empty()) {
        in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    }
    if (!in) {
        fail(path, "truncated payload");
    }
    return bytes;
}

}  // namespace detail

}  // namespace ak
