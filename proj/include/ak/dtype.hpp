// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace ak {

using int128 = __int128;

/// Element types instantiated across the sorting and benchmark surfaces.
/// The numeric codes are part of the fixture file format.
enum class dtype_code : std::uint32_t {
    i16 = 1,
    i32 = 2,
    i64 = 3,
    i128 = 4,
    f32 = 5,
    f64 = 6,
};

const char* dtype_name(dtype_code code);
std::optional<dtype_code> dtype_from_name(std::string_view name);
std::size_t dtype_width(dtype_code code);

template <typename T>
constexpr dtype_code dtype_of();

template <> constexpr dtype_code dtype_of<std::int16_t>() { return dtype_code::i16; }
template <> constexpr dtype_code dtype_of<std::int32_t>() { return dtype_code::i32; }
template <> constexpr dtype_code dtype_of<std::int64_t>() { return dtype_code::i64; }
template <> constexpr dtype_code dtype_of<int128>() { return dtype_code::i128; }
template <> constexpr dtype_code dtype_of<float>() { return dtype_code::f32; }
template <> constexpr dtype_code dtype_of<double>() { return dtype_code::f64; }

}  // namespace ak
