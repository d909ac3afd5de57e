#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace spa::detail {

inline std::string fmt_num(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fmt_num(long double v) {
    if (!std::isfinite(v)) return "null";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17Lg", v);
    return buf;
}

}  // namespace spa::detail
