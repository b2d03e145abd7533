#pragma once

#include <charconv>
#include <cmath>
#include <limits>
#include <string>

namespace snumlab {

// Extended non-negative reals are plain doubles where +infinity is a legal,
// distinct value (never a large finite stand-in). Trace weights, segment
// widths and trace values use this convention.
inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool is_inf(double x) { return std::isinf(x); }

// Product with the trace convention inf * 0 = 0: the infinite-weight zero
// block contributes nothing to a trace.
inline double ext_mul(double a, double b) {
    if ((is_inf(a) && b == 0.0) || (is_inf(b) && a == 0.0)) return 0.0;
    return a * b;
}

// Locale-independent shortest round-trip decimal text; infinities print as
// the literal "inf".
inline std::string format_number(double v) {
    if (is_inf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace snumlab
