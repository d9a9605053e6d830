#pragma once

#include <charconv>
#include <string>

namespace tfdw {

// Shortest round-trip decimal form of a double (used for CSV/JSON emission so
// repeated runs are byte-identical and values survive a parse round trip).
inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace tfdw
