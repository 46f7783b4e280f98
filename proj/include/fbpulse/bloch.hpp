#pragma once

// Rotating-frame dynamics of an uncoupled spin-1/2 ensemble under constant
// amplitude, phase-switched RF. No relaxation.

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fbpulse {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Magnetization {
    double mx = 0.0;
    double my = 0.0;
    double mz = 1.0;

    static constexpr Magnetization north() { return {0.0, 0.0, 1.0}; }
    static constexpr Magnetization south() { return {0.0, 0.0, -1.0}; }
    static constexpr Magnetization plus_y() { return {0.0, 1.0, 0.0}; }

    double norm() const;
    double transverse() const;
    /// Azimuth atan2(my, mx) in (-pi, pi].
    double phase() const;

    friend bool operator==(const Magnetization&, const Magnetization&) = default;
};

/// Seconds needed to nutate by `flip_deg` on resonance at `amplitude_hz`.
double flip_to_duration(double flip_deg, double amplitude_hz);

class PulseParameters {
public:
    PulseParameters(double amplitude_hz, double flip_per_step_deg);

    double amplitude_hz() const noexcept { return amplitude_hz_; }
    double flip_per_step_deg() const noexcept { return flip_per_step_deg_; }
    double dwell_s() const noexcept { return dwell_s_; }

    /// Same dwell, amplitude (and hence flip per step) multiplied by `scale`.
    PulseParameters scaled_amplitude(double scale) const;

    friend bool operator==(const PulseParameters&, const PulseParameters&) = default;

private:
    PulseParameters(double amplitude_hz, double flip_per_step_deg, double dwell_s)
        : amplitude_hz_(amplitude_hz), flip_per_step_deg_(flip_per_step_deg), dwell_s_(dwell_s) {}

    double amplitude_hz_;
    double flip_per_step_deg_;
    double dwell_s_;
};

struct PulseMetadata {
    std::string mode;                 // "inversion", "excitation", "band_selective" or empty
    std::optional<double> band_hz;
    std::optional<double> pass_hz;
    std::map<std::string, std::string> settings;

    friend bool operator==(const PulseMetadata&, const PulseMetadata&) = default;
};

struct PulseSequence {
    PulseParameters params;
    std::vector<double> phases_rad;   // each in [0, 2pi)
    PulseMetadata metadata;

    std::size_t size() const noexcept { return phases_rad.size(); }
    double duration_s() const noexcept { return static_cast<double>(phases_rad.size()) * params.dwell_s(); }
};

/// Wraps an angle into [0, 2pi).
double normalize_phase(double rad);

/// Per-offset constants of one step: the unit effective-field axis without its
/// phase, and the rotation angle. Shared by every kernel so that all of them
/// start from bit-identical inputs.
struct StepRotation {
    double axis_transverse;   // A / sqrt(A^2 + nu^2)
    double axis_z;            // nu / sqrt(A^2 + nu^2)
    double cos_angle;
    double sin_angle;
    double one_minus_cos;     // 2 sin^2(angle / 2)
};

StepRotation step_rotation(const PulseParameters& params, double offset_hz);

/// Right-handed rotation of `m` about (a cos t, a sin t, b) with the cached
/// angle; `cos_phase` / `sin_phase` are cos t / sin t.
Magnetization apply_rotation(const Magnetization& m, const StepRotation& r,
                             double cos_phase, double sin_phase);

Magnetization rotate_step(const Magnetization& m, const PulseParameters& params,
                          double phase_rad, double offset_hz);

Magnetization propagate(const PulseSequence& seq, double offset_hz, const Magnetization& m0);

/// Row-major 3x3 rotation.
struct Rotation3 {
    std::array<double, 9> a{1, 0, 0, 0, 1, 0, 0, 0, 1};

    double operator()(std::size_t row, std::size_t col) const { return a[row * 3 + col]; }
    double& operator()(std::size_t row, std::size_t col) { return a[row * 3 + col]; }

    static Rotation3 identity() { return {}; }
    Rotation3 transposed() const;
    double determinant() const;
    Magnetization apply(const Magnetization& m) const;
    /// Largest |(this - other)_ij|.
    double max_abs_diff(const Rotation3& other) const;

    friend Rotation3 operator*(const Rotation3& lhs, const Rotation3& rhs);
};

/// Composite rotation of the whole sequence at one offset (later steps on the left).
Rotation3 propagator_matrix(const PulseSequence& seq, double offset_hz);

} // namespace fbpulse
