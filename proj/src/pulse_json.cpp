#include <cmath>
#include <cstdio>
#include <string>

#include <json.hpp>

#include "fbpulse/error.hpp"
#include "fbpulse/pulse_io.hpp"

namespace fbpulse::io {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string quoted(const std::string& s) { return json(s).dump(); }

std::string optional_number(const std::optional<double>& v) { return v ? fmt17(*v) : "null"; }

std::size_t line_of(std::string_view text, std::size_t byte) {
    byte = std::min(byte, text.size());
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte; ++i)
        if (text[i] == '\n') ++line;
    return line;
}

const json& field(const json& doc, const char* key) {
    const auto it = doc.find(key);
    if (it == doc.end()) throw ParseError(key, "missing field");
    return *it;
}

double number_field(const json& doc, const char* key) {
    const json& v = field(doc, key);
    if (!v.is_number()) throw ParseError(key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ParseError(key, "not a finite number");
    return d;
}

std::optional<double> optional_number_field(const json& doc, const char* key) {
    const auto it = doc.find(key);
    if (it == doc.end() || it->is_null()) return std::nullopt;
    return number_field(doc, key);
}

} // namespace

std::string write_pulse_json(const PulseSequence& seq, std::optional<bool> converged) {
    const PulseParameters& p = seq.params;
    std::string out;
    out.reserve(64 + seq.size() * 26);
    out += "{\n";
    out += "  \"format\": " + quoted(std::string(kPulseFormatName)) + ",\n";
    out += "  \"format_version\": " + std::to_string(kPulseFormatVersion) + ",\n";
    out += "  \"phase_unit\": \"rad\",\n";
    out += "  \"mode\": " + quoted(seq.metadata.mode) + ",\n";
    out += "  \"amplitude_hz\": " + fmt17(p.amplitude_hz()) + ",\n";
    out += "  \"flip_per_step_deg\": " + fmt17(p.flip_per_step_deg()) + ",\n";
    out += "  \"dwell_s\": " + fmt17(p.dwell_s()) + ",\n";
    out += "  \"band_hz\": " + optional_number(seq.metadata.band_hz) + ",\n";
    out += "  \"pass_hz\": " + optional_number(seq.metadata.pass_hz) + ",\n";
    out += "  \"step_count\": " + std::to_string(seq.size()) + ",\n";
    out += "  \"duration_s\": " + fmt17(seq.duration_s()) + ",\n";
    out += "  \"converged\": ";
    out += converged ? (*converged ? "true" : "false") : "null";
    out += ",\n";
    out += "  \"metadata\": {";
    bool first = true;
    for (const auto& [key, value] : seq.metadata.settings) {
        out += first ? "\n" : ",\n";
        out += "    " + quoted(key) + ": " + quoted(value);
        first = false;
    }
    out += first ? "},\n" : "\n  },\n";
    out += "  \"phases_rad\": [";
    for (std::size_t i = 0; i < seq.size(); ++i) {
        out += i == 0 ? "\n    " : ",\n    ";
        out += fmt17(seq.phases_rad[i]);
    }
    out += seq.size() == 0 ? "]\n" : "\n  ]\n";
    out += "}\n";
    return out;
}

std::string write_pulse_json(const DesignReport& report) {
    return write_pulse_json(report.sequence, report.converged);
}

PulseDocument read_pulse_document(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError("line " + std::to_string(line_of(text, e.byte == 0 ? 0 : e.byte - 1)),
                         e.what());
    }
    if (!doc.is_object()) throw ParseError("line 1", "top level must be an object");

    const json& format = field(doc, "format");
    if (!format.is_string() || format.get<std::string>() != kPulseFormatName)
        throw ParseError("format", "not an fbpulse pulse file");
    const json& version = field(doc, "format_version");
    if (!version.is_number_integer() || version.get<long long>() != kPulseFormatVersion)
        throw ParseError("format_version", "unsupported version " + version.dump());
    if (const auto it = doc.find("phase_unit"); it != doc.end() && *it != "rad")
        throw ParseError("phase_unit", "expected \"rad\"");

    const double amplitude = number_field(doc, "amplitude_hz");
    const double flip = number_field(doc, "flip_per_step_deg");
    if (!(amplitude > 0.0)) throw ParseError("amplitude_hz", "must be positive");
    if (!(flip > 0.0)) throw ParseError("flip_per_step_deg", "must be positive");
    const PulseParameters params(amplitude, flip);
    if (doc.contains("dwell_s")) {
        const double dwell = number_field(doc, "dwell_s");
        if (std::abs(dwell - params.dwell_s()) > 1e-9 * params.dwell_s())
            throw ParseError("dwell_s", "inconsistent with amplitude and flip angle");
    }

    PulseDocument out{PulseSequence{params, {}, {}}, std::nullopt};
    PulseMetadata& meta = out.sequence.metadata;

    if (const auto it = doc.find("mode"); it != doc.end() && !it->is_null()) {
        if (!it->is_string()) throw ParseError("mode", "expected a string");
        meta.mode = it->get<std::string>();
    }
    meta.band_hz = optional_number_field(doc, "band_hz");
    meta.pass_hz = optional_number_field(doc, "pass_hz");

    if (const auto it = doc.find("converged"); it != doc.end() && !it->is_null()) {
        if (!it->is_boolean()) throw ParseError("converged", "expected true, false or null");
        out.converged = it->get<bool>();
    }
    if (const auto it = doc.find("metadata"); it != doc.end() && !it->is_null()) {
        if (!it->is_object()) throw ParseError("metadata", "expected an object");
        for (const auto& [key, value] : it->items()) {
            if (!value.is_string()) throw ParseError("metadata." + key, "expected a string");
            meta.settings[key] = value.get<std::string>();
        }
    }

    const json& phases = field(doc, "phases_rad");
    if (!phases.is_array()) throw ParseError("phases_rad", "expected an array");
    out.sequence.phases_rad.reserve(phases.size());
    for (std::size_t i = 0; i < phases.size(); ++i) {
        const json& v = phases[i];
        const std::string where = "phases_rad[" + std::to_string(i) + "]";
        if (!v.is_number()) throw ParseError(where, "not a number: " + v.dump());
        const double ph = v.get<double>();
        if (!std::isfinite(ph)) throw ParseError(where, "not a finite number");
        if (!(ph >= 0.0 && ph < kTwoPi)) throw ParseError(where, "phase outside [0, 2pi)");
        out.sequence.phases_rad.push_back(ph);
    }

    const json& count = field(doc, "step_count");
    if (!count.is_number_unsigned() || count.get<std::size_t>() != phases.size())
        throw ParseError("step_count", "declares " + count.dump() + " steps but phases_rad has " +
                                           std::to_string(phases.size()));
    return out;
}

PulseSequence read_pulse_json(std::string_view text) { return read_pulse_document(text).sequence; }

} // namespace fbpulse::io
