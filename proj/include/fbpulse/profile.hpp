#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fbpulse/bloch.hpp"

namespace fbpulse {

inline constexpr std::size_t kDefaultEvaluationPoints = 401;

struct Profile {
    std::vector<double> offsets_hz;
    std::vector<double> mx;
    std::vector<double> my;
    std::vector<double> mz;
    Magnetization initial_state;

    std::size_t size() const noexcept { return offsets_hz.size(); }
    Magnetization at(std::size_t i) const { return {mx[i], my[i], mz[i]}; }
    double transverse(std::size_t i) const;

    friend bool operator==(const Profile&, const Profile&) = default;
};

struct ProfileMetrics {
    double worst_inversion = 0.0;     // max mz over the band
    double min_transverse = 0.0;      // over the pass region
    double phase_spread_deg = 0.0;    // unwrapped, over the pass region
    double stopband_leakage = 0.0;    // max transverse over the stop region
    double passband_ripple = 0.0;     // max - min transverse over the pass region
};

struct SweepOptions {
    /// 0 picks std::thread::hardware_concurrency(); 1 runs inline.
    unsigned threads = 1;
};

/// Final magnetization at every grid offset after `seq`, starting from `m0`.
Profile sweep(const PulseSequence& seq, std::span<const double> grid_hz, const Magnetization& m0,
              SweepOptions options = {});

/// The pass region is |nu| <= pass_hz when given, otherwise the whole band.
/// The stop region is pass_hz + transition_hz < |nu| <= band_hz.
ProfileMetrics metrics(const Profile& profile, double band_hz, std::optional<double> pass_hz = {},
                       double transition_hz = 0.0);

std::vector<Profile> amplitude_robustness_sweep(const PulseSequence& seq,
                                                std::span<const double> grid_hz,
                                                const Magnetization& m0,
                                                std::span<const double> scales,
                                                SweepOptions options = {});

} // namespace fbpulse
