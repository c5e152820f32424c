#pragma once

#include <charconv>
#include <string>

namespace curvecast::detail {

// Shortest representation that parses back to the same double.
inline std::string shortest(double value) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, end);
}

} // namespace curvecast::detail
