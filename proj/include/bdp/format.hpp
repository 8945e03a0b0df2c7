#pragma once

#include <cstdio>
#include <string>

namespace bdp {

/// Shortest round-trippable decimal form; locale independent, used for all
/// CSV output so repeated runs stay byte-identical.
inline std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Compact form for report row labels.
inline std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

}  // namespace bdp
