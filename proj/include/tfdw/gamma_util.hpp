#pragma once

#include <cmath>

namespace tfdw {

// sin(pi*x) with argument reduction done on x itself, so large arguments keep
// full relative accuracy of the fractional part.
inline double sinpi(double x) {
    double r = x - std::nearbyint(x);
    double s = std::sin(M_PI * r);
    // nearbyint shifted by an odd integer flips the sign
    long long n = static_cast<long long>(std::llrint(x - r)) & 1;
    return n ? -s : s;
}

// 1/Gamma(x) for any real x; exactly zero at the poles x = 0, -1, -2, ...
// Gamma overflow (x > ~171.6) also yields zero, which is the correct limit
// for the series terms this is used in.
inline double reciprocal_gamma(double x) {
    if (x > 0.5) {
        double g = std::tgamma(x);
        return std::isinf(g) ? 0.0 : 1.0 / g;
    }
    // reflection: 1/Gamma(x) = sin(pi x) * Gamma(1-x) / pi
    double s = sinpi(x);
    if (s == 0.0) return 0.0;
    double lg = std::lgamma(1.0 - x);
    // may overflow to +-inf for very negative x; callers needing that scale use logs
    return s * std::exp(lg) / M_PI;
}

struct SignedLog {
    double log_abs;  // natural log of |value|; -inf encodes a zero value
    int sign;        // -1, 0, +1
};

// log|1/Gamma(x)| with sign, valid for all real x including x << 0.
inline SignedLog signed_log_reciprocal_gamma(double x) {
    if (x > 0.5) return {-std::lgamma(x), 1};
    double s = sinpi(x);
    if (s == 0.0) return {-std::numeric_limits<double>::infinity(), 0};
    double la = std::log(std::fabs(s) / M_PI) + std::lgamma(1.0 - x);
    return {la, s > 0.0 ? 1 : -1};
}

}  // namespace tfdw
