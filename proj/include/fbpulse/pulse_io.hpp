#pragma once

// Text formats: pulse JSON, JCAMP-DX shape files, profile CSV and SVG plots.
// All writers are deterministic.

#include <optional>
#include <string>
#include <string_view>

#include "fbpulse/bloch.hpp"
#include "fbpulse/designer.hpp"
#include "fbpulse/profile.hpp"

namespace fbpulse::io {

inline constexpr int kPulseFormatVersion = 1;
inline constexpr std::string_view kPulseFormatName = "fbpulse-pulse";

struct PulseDocument {
    PulseSequence sequence;
    std::optional<bool> converged;
};

/// Phases in radians, every double printed with 17 significant digits.
std::string write_pulse_json(const PulseSequence& seq, std::optional<bool> converged = {});
std::string write_pulse_json(const DesignReport& report);

PulseDocument read_pulse_document(std::string_view text);
PulseSequence read_pulse_json(std::string_view text);

/// JCAMP-DX 5.00 shape data, phases in degrees, constant amplitude 100%.
std::string write_shape_file(const PulseSequence& seq, std::string_view title = {});

std::string write_profile_csv(const Profile& profile,
                              const std::optional<ProfileMetrics>& metrics = {});

/// Columns "index,time_us,phase_deg".
std::string write_phase_csv(const PulseSequence& seq);

std::string write_plot_svg(const Profile& profile);
/// Phase (degrees) against time (ms).
std::string write_plot_svg(const PulseSequence& seq);

/// Writes to a sibling temporary and renames over `path`.
void write_file_atomic(const std::string& path, std::string_view contents);
std::string read_file(const std::string& path);

} // namespace fbpulse::io
