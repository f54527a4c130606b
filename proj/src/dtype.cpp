// SPDX-License-Identifier: Apache-2.0
#include "ak/dtype.hpp"

namespace ak {

const char* dtype_name(dtype_code code) {
    switch (code) {
        case dtype_code::i16: return "i16";
        case dtype_code::i32: return "i32";
        case dtype_code::i64: return "i64";
        case dtype_code::i128: return "i128";
        case dtype_code::f32: return "f32";
        case dtype_code::f64: return "f64";
    }
    return "unknown";
}

std::optional<dtype_code> dtype_from_name(std::string_view name) {
    if (name == "i16") return dtype_code::i16;
    if (name == "i32") return dtype_code::i32;
    if (name == "i64") return dtype_code::i64;
    if (name == "i128") return dtype_code::i128;
    if (name == "f32") return dtype_code::f32;
    if (name == "f64") return dtype_code::f64;
    return std::nullopt;
}

std::size_t dtype_width(dtype_code code) {
    switch (code) {
        case dtype_code::i16: return 2;
        case dtype_code::i32: return 4;
        case dtype_code::i64: return 8;
        case dtype_code::i128: return 16;
        case dtype_code::f32: return 4;
        case dtype_code::f64: return 8;
    }
    return 0;
}

}  // namespace ak
