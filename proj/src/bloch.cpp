#include "fbpulse/bloch.hpp"

#include <cmath>
#include <string>

#include "fbpulse/error.hpp"

namespace fbpulse {

namespace {

void require_positive(double value, const char* what) {
    if (!(value > 0.0) || !std::isfinite(value))
        throw InvalidParameter(std::string(what) + " must be positive and finite, got " +
                               std::to_string(value));
}

void require_unit(const Magnetization& m) {
    if (!(std::abs(m.norm() - 1.0) <= 1e-6))
        throw InvalidParameter("magnetization must be unit norm, |m| = " + std::to_string(m.norm()));
}

} // namespace

double Magnetization::norm() const { return std::sqrt(mx * mx + my * my + mz * mz); }
double Magnetization::transverse() const { return std::hypot(mx, my); }
double Magnetization::phase() const { return std::atan2(my, mx); }

double flip_to_duration(double flip_deg, double amplitude_hz) {
    require_positive(flip_deg, "flip angle");
    require_positive(amplitude_hz, "RF amplitude");
    return flip_deg / (360.0 * amplitude_hz);
}

PulseParameters::PulseParameters(double amplitude_hz, double flip_per_step_deg)
    : amplitude_hz_(amplitude_hz),
      flip_per_step_deg_(flip_per_step_deg),
      dwell_s_(flip_to_duration(flip_per_step_deg, amplitude_hz)) {}

PulseParameters PulseParameters::scaled_amplitude(double scale) const {
    require_positive(scale, "amplitude scale");
    return {amplitude_hz_ * scale, flip_per_step_deg_ * scale, dwell_s_};
}

double normalize_phase(double rad) {
    double r = std::fmod(rad, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    // fmod of a tiny negative value can round up to exactly 2pi
    if (r >= kTwoPi) r = 0.0;
    return r;
}

StepRotation step_rotation(const PulseParameters& params, double offset_hz) {
    const double amp = params.amplitude_hz();
    const double field = std::hypot(amp, offset_hz);
    const double angle = kTwoPi * field * params.dwell_s();
    const double half_sin = std::sin(0.5 * angle);
    return {amp / field, offset_hz / field, std::cos(angle), std::sin(angle),
            2.0 * half_sin * half_sin};
}

Magnetization apply_rotation(const Magnetization& m, const StepRotation& r, double cos_phase,
                             double sin_phase) {
    // Rodrigues: m cos b + (n x m) sin b + n (n.m)(1 - cos b). The kernels in
    // kernels_*.cpp mirror this expression operation for operation.
    const double nx = r.axis_transverse * cos_phase;
    const double ny = r.axis_transverse * sin_phase;
    const double nz = r.axis_z;
    const double dot = nx * m.mx + ny * m.my + nz * m.mz;
    const double cx = ny * m.mz - nz * m.my;
    const double cy = nz * m.mx - nx * m.mz;
    const double cz = nx * m.my - ny * m.mx;
    const double k = dot * r.one_minus_cos;
    return {m.mx * r.cos_angle + cx * r.sin_angle + nx * k,
            m.my * r.cos_angle + cy * r.sin_angle + ny * k,
            m.mz * r.cos_angle + cz * r.sin_angle + nz * k};
}

Magnetization rotate_step(const Magnetization& m, const PulseParameters& params, double phase_rad,
                          double offset_hz) {
    require_unit(m);
    return apply_rotation(m, step_rotation(params, offset_hz), std::cos(phase_rad),
                          std::sin(phase_rad));
}

Magnetization propagate(const PulseSequence& seq, double offset_hz, const Magnetization& m0) {
    require_unit(m0);
    const StepRotation r = step_rotation(seq.params, offset_hz);
    Magnetization m = m0;
    for (double phase : seq.phases_rad)
        m = apply_rotation(m, r, std::cos(phase), std::sin(phase));
    return m;
}

Rotation3 Rotation3::transposed() const {
    Rotation3 t;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) t(i, j) = (*this)(j, i);
    return t;
}

double Rotation3::determinant() const {
    const auto& m = *this;
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

Magnetization Rotation3::apply(const Magnetization& v) const {
    const auto& m = *this;
    return {m(0, 0) * v.mx + m(0, 1) * v.my + m(0, 2) * v.mz,
            m(1, 0) * v.mx + m(1, 1) * v.my + m(1, 2) * v.mz,
            m(2, 0) * v.mx + m(2, 1) * v.my + m(2, 2) * v.mz};
}

double Rotation3::max_abs_diff(const Rotation3& other) const {
    double worst = 0.0;
    for (std::size_t i = 0; i < 9; ++i) worst = std::max(worst, std::abs(a[i] - other.a[i]));
    return worst;
}

Rotation3 operator*(const Rotation3& lhs, const Rotation3& rhs) {
    Rotation3 out;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < 3; ++k) s += lhs(i, k) * rhs(k, j);
            out(i, j) = s;
        }
    return out;
}

namespace {

// R = cos b I + sin b [n]x + (1 - cos b) n n^T
Rotation3 step_matrix(const StepRotation& r, double phase) {
    const double nx = r.axis_transverse * std::cos(phase);
    const double ny = r.axis_transverse * std::sin(phase);
    const double nz = r.axis_z;
    const double c = r.cos_angle, s = r.sin_angle, t = r.one_minus_cos;
    Rotation3 m;
    m(0, 0) = c + t * nx * nx;
    m(0, 1) = t * nx * ny - s * nz;
    m(0, 2) = t * nx * nz + s * ny;
    m(1, 0) = t * ny * nx + s * nz;
    m(1, 1) = c + t * ny * ny;
    m(1, 2) = t * ny * nz - s * nx;
    m(2, 0) = t * nz * nx - s * ny;
    m(2, 1) = t * nz * ny + s * nx;
    m(2, 2) = c + t * nz * nz;
    return m;
}

} // namespace

Rotation3 propagator_matrix(const PulseSequence& seq, double offset_hz) {
    const StepRotation r = step_rotation(seq.params, offset_hz);
    Rotation3 total = Rotation3::identity();
    for (double phase : seq.phases_rad) total = step_matrix(r, phase) * total;
    return total;
}

} // namespace fbpulse
