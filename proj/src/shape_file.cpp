#include <cmath>
#include <cstdio>
#include <string>

#include "fbpulse/error.hpp"
#include "fbpulse/pulse_io.hpp"

namespace fbpulse::io {

namespace {

std::string one_line(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c == '\n' || c == '\r') c = ' ';
    return out;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string write_shape_file(const PulseSequence& seq, std::string_view title) {
    if (seq.size() == 0) throw InvalidParameter("cannot export an empty sequence as a shape file");

    std::string name = title.empty()
                           ? "fbpulse " + (seq.metadata.mode.empty() ? std::string("feedback")
                                                                     : seq.metadata.mode) +
                                 " pulse"
                           : std::string(title);

    std::string out;
    out.reserve(256 + seq.size() * 24);
    out += "##TITLE= " + one_line(name) + "\n";
    out += "##JCAMP-DX= 5.00\n";
    out += "##DATA TYPE= Shape Data\n";
    out += "##ORIGIN= fbpulse\n";
    if (!seq.metadata.mode.empty()) out += "##$SHAPE_MODE= " + one_line(seq.metadata.mode) + "\n";
    out += "##$AMPLITUDE_HZ= " + fmt17(seq.params.amplitude_hz()) + "\n";
    out += "##$FLIP_PER_STEP_DEG= " + fmt17(seq.params.flip_per_step_deg()) + "\n";
    out += "##$DWELL_S= " + fmt17(seq.params.dwell_s()) + "\n";
    out += "##$DURATION_S= " + fmt17(seq.duration_s()) + "\n";
    if (seq.metadata.band_hz) out += "##$BAND_HZ= " + fmt17(*seq.metadata.band_hz) + "\n";
    if (seq.metadata.pass_hz) out += "##$PASS_HZ= " + fmt17(*seq.metadata.pass_hz) + "\n";
    out += "##$AMPLITUDE_UNIT= percent\n";
    out += "##$PHASE_UNIT= degrees\n";
    out += "##NPOINTS= " + std::to_string(seq.size()) + "\n";
    out += "##XYPOINTS= (XY..XY)\n";

    char line[64];
    for (double phase : seq.phases_rad) {
        double deg = normalize_phase(phase) * (180.0 / kPi);
        // keep the printed value inside [0, 360)
        if (deg >= 359.9999995) deg = 0.0;
        std::snprintf(line, sizeof line, "%.6f, %.6f\n", 100.0, deg);
        out += line;
    }
    out += "##END=\n";
    return out;
}

} // namespace fbpulse::io
