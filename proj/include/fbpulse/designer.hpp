#pragma once

// Greedy feedback design: simulate every design offset, steer the worst one
// towards the south pole with a small nudge, repeat.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fbpulse/bloch.hpp"

namespace fbpulse {

enum class DesignMode { Inversion, Excitation, BandSelective };
enum class SelectionStrategy { WorstOffset, LinearSweep };

std::string_view to_string(DesignMode mode);
std::string_view to_string(SelectionStrategy strategy);
/// Accepts "inversion", "excitation", "band_selective" (and "band").
DesignMode parse_mode(std::string_view text);
/// Accepts "worst_offset"/"worst" and "linear_sweep"/"linear".
SelectionStrategy parse_strategy(std::string_view text);

inline constexpr double kDefaultEpsilon = 0.01;
inline constexpr std::size_t kDefaultMaxSteps = 200'000;
inline constexpr std::size_t kDefaultDesignOffsets = 40;

struct DesignTask {
    DesignMode mode = DesignMode::Inversion;
    PulseParameters params{10'000.0, 0.57};
    double band_hz = 20'000.0;
    double pass_hz = 0.0;             // band_selective only
    std::size_t n_offsets = kDefaultDesignOffsets;
    double epsilon = kDefaultEpsilon;
    std::size_t max_steps = kDefaultMaxSteps;
    SelectionStrategy strategy = SelectionStrategy::WorstOffset;
    /// Replaces the uniform grid when non-empty (strictly increasing, |nu| <= band_hz).
    std::vector<double> design_offsets_hz;

    /// Throws InvalidParameter on any violated invariant.
    void validate() const;
    std::vector<double> offsets() const;
};

struct DesignState {
    std::vector<double> offsets_hz;
    std::vector<Magnetization> states;
    std::size_t step_count = 0;
};

struct DesignReport {
    /// Deliverable pulse: the forward design for inversion, its time reversal otherwise.
    PulseSequence sequence;
    /// Sequence produced by the feedback loop itself.
    PulseSequence forward;
    bool converged = false;
    std::vector<double> offsets_hz;
    /// States of the forward design at the design offsets.
    std::vector<Magnetization> final_states;
    std::size_t steps = 0;
    double duration_s = 0.0;

    double worst_final_z() const;
};

/// Uniform endpoint-inclusive grid over [-half_width, half_width], mirrored so
/// that grid[k] == -grid[n-1-k] exactly. Any n >= 1.
std::vector<double> uniform_grid(double half_width_hz, std::size_t n);

/// Design grid: uniform_grid with an even count (no point at zero).
std::vector<double> make_offset_grid(double band_hz, std::size_t n_offsets);

std::vector<Magnetization> init_states(const DesignTask& task, std::span<const double> offsets_hz);

std::size_t select_target(const DesignState& state, SelectionStrategy strategy);

/// RF phase pi/2 ahead of the transverse phase of `m`, in [0, 2pi). At a pole
/// (transverse < 1e-12) the transverse phase is taken as 0.
double feedback_phase(const Magnetization& m);

/// Runs the feedback loop for the task's initialization. The returned report
/// carries the forward sequence in both `sequence` and `forward`.
DesignReport design(const DesignTask& task);

/// theta'_i = theta_{n+1-i} + pi. At offset nu the result undoes the original at -nu.
PulseSequence reverse_with_pi(const PulseSequence& seq);

DesignReport design_excitation(const DesignTask& task);
DesignReport design_band_selective(const DesignTask& task);

/// Dispatches on task.mode: inversion -> design, others -> design + reversal.
DesignReport design_pulse(const DesignTask& task);

} // namespace fbpulse
