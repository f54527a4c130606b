// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <span>
#include <vector>

#include "ak/dtype.hpp"

namespace ak {

/// Binary fixture for one rank's input partition. Little-endian layout:
/// magic "SIHS", version u32, dtype code u32, rank u32, count u64, then the
/// raw elements.
struct fixture_header {
    std::uint32_t version = 1;
    dtype_code dtype = dtype_code::i32;
    std::uint32_t rank = 0;
    std::uint64_t count = 0;
};

inline constexpr std::uint32_t fixture_version = 1;

fixture_header read_fixture_header(const std::filesystem::path& path);

namespace detail {
void write_fixture_bytes(const std::filesystem::path& path, dtype_code dtype, std::uint32_t rank,
                         std::uint64_t count, const void* data, std::size_t bytes);
std::vector<std::byte> read_fixture_bytes(const std::filesystem::path& path, dtype_code expect,
                                          fixture_header& header);
}  // namespace detail

template <typename T>
void write_fixture(const std::filesystem::path& path, std::uint32_t rank,
                   std::span<const T> elements) {
    detail::write_fixture_bytes(path, dtype_of<T>(), rank, elements.size(), elements.data(),
                                elements.size_bytes());
}

/// Reads a fixture, requiring its dtype to match T. The header's rank field
/// is returned through rank_out when non-null.
template <typename T>
std::vector<T> read_fixture(const std::filesystem::path& path, std::uint32_t* rank_out = nullptr) {
    fixture_header header;
    const auto bytes = detail::read_fixture_bytes(path, dtype_of<T>(), header);
    if (rank_out) {
        *rank_out = header.rank;
    }
    std::vector<T> out(header.count);
    if (!out.empty()) {
        std::memcpy(out.data(), bytes.data(), bytes.size());
    }
    return out;
}

}  // namespace ak
