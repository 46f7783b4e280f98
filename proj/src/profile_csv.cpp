#include <cmath>
#include <cstdio>
#include <string>

#include "fbpulse/pulse_io.hpp"

namespace fbpulse::io {

namespace {

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

} // namespace

std::string write_profile_csv(const Profile& profile, const std::optional<ProfileMetrics>& metrics) {
    std::string out = "offset_hz,mx,my,mz,transverse,phase_deg\n";
    for (std::size_t i = 0; i < profile.size(); ++i) {
        const double t = profile.transverse(i);
        out += fmt9(profile.offsets_hz[i]) + ',' + fmt9(profile.mx[i]) + ',' + fmt9(profile.my[i]) +
               ',' + fmt9(profile.mz[i]) + ',' + fmt9(t) + ',';
        if (t >= 1e-12) out += fmt9(std::atan2(profile.my[i], profile.mx[i]) * (180.0 / kPi));
        out += '\n';
    }
    if (metrics) {
        out += "# worst_inversion=" + fmt9(metrics->worst_inversion) + "\n";
        out += "# min_transverse=" + fmt9(metrics->min_transverse) + "\n";
        out += "# phase_spread_deg=" + fmt9(metrics->phase_spread_deg) + "\n";
        out += "# stopband_leakage=" + fmt9(metrics->stopband_leakage) + "\n";
        out += "# passband_ripple=" + fmt9(metrics->passband_ripple) + "\n";
    }
    return out;
}

std::string write_phase_csv(const PulseSequence& seq) {
    std::string out = "index,time_us,phase_deg\n";
    const double dwell_us = seq.params.dwell_s() * 1e6;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        out += std::to_string(i) + ',' + fmt9(static_cast<double>(i) * dwell_us) + ',' +
               fmt9(seq.phases_rad[i] * (180.0 / kPi)) + '\n';
    }
    return out;
}

} // namespace fbpulse::io
