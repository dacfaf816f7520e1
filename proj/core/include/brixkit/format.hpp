#pragma once

#include <charconv>
#include <string>

namespace brixkit {

/// Shortest decimal string that parses back to exactly the same double.
/// Used everywhere a float lands in CSV so outputs are byte-stable.
inline std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

} // namespace brixkit
