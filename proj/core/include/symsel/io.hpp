#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace symsel {

/// Shortest decimal form that reads back to the same double; "inf", "-inf"
/// and "nan" for non-finite values.
std::string format_double(double x);

/// 64-bit FNV-1a digest as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace symsel
