#pragma once

// Test-only reference dynamics built on unit quaternions. Shares nothing with
// the library's Rodrigues kernels except the physical parameters.

#include <cmath>
#include <vector>

namespace oracle {

struct Quat {
    double w = 1.0, x = 0.0, y = 0.0, z = 0.0;
};

inline Quat mul(const Quat& a, const Quat& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

inline Quat conj(const Quat& q) { return {q.w, -q.x, -q.y, -q.z}; }

struct Vec3 {
    double x, y, z;
};

inline Vec3 rotate(const Quat& q, const Vec3& v) {
    const Quat p{0.0, v.x, v.y, v.z};
    const Quat r = mul(mul(q, p), conj(q));
    return {r.x, r.y, r.z};
}

/// Right-handed rotation for one step: field (A cos phase, A sin phase, nu) in Hz
/// held for dwell seconds.
inline Quat step(double amplitude_hz, double phase, double offset_hz, double dwell_s) {
    const double fx = amplitude_hz * std::cos(phase);
    const double fy = amplitude_hz * std::sin(phase);
    const double fz = offset_hz;
    const double f = std::sqrt(fx * fx + fy * fy + fz * fz);
    const double angle = 2.0 * M_PI * f * dwell_s;
    const double s = std::sin(0.5 * angle) / f;
    return {std::cos(0.5 * angle), fx * s, fy * s, fz * s};
}

/// Product of the step quaternions, first phase applied first.
inline Quat sequence(double amplitude_hz, const std::vector<double>& phases, double offset_hz,
                     double dwell_s) {
    Quat total;
    for (double ph : phases) total = mul(step(amplitude_hz, ph, offset_hz, dwell_s), total);
    return total;
}

} // namespace oracle
