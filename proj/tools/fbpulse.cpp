// fbpulse: design, reverse, evaluate and export feedback pulses.
//
//   fbpulse design   --preset paper-inversion -o inv.json
//   fbpulse reverse  --in fwd.json -o exc.json
//   fbpulse evaluate --in inv.json --points 401 --csv inv.csv --svg inv.svg
//   fbpulse export   --in inv.json --format shape -o inv.shape
//
// Exit codes: 0 success, 1 usage or input error, 2 design did not converge.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fbpulse/bloch.hpp"
#include "fbpulse/designer.hpp"
#include "fbpulse/error.hpp"
#include "fbpulse/kernels.hpp"
#include "fbpulse/profile.hpp"
#include "fbpulse/pulse_io.hpp"

using namespace fbpulse;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNotConverged = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DesignFlags {
    std::string preset;
    std::string mode;
    std::optional<double> amplitude_khz;
    std::optional<double> band_khz;
    std::optional<double> pass_khz;
    std::optional<double> flip_deg;
    std::size_t offsets = kDefaultDesignOffsets;
    double epsilon = kDefaultEpsilon;
    std::size_t max_steps = kDefaultMaxSteps;
    std::string strategy = "worst_offset";
    std::string out = "pulse.json";
    std::string forward_out;
    std::string shape_out;
};

struct EvaluateFlags {
    std::string in;
    std::size_t points = kDefaultEvaluationPoints;
    std::optional<double> range_khz;
    std::optional<double> band_khz;
    std::optional<double> pass_khz;
    double transition_khz = 0.0;
    std::string from = "north";
    std::string csv_out;
    std::string svg_out;
    unsigned threads = 0;
};

struct ReverseFlags {
    std::string in;
    std::string out;
};

struct ExportFlags {
    std::string in;
    std::string format = "shape";
    std::string out;
    std::string title;
};

std::string command_line(int argc, char** argv) {
    std::string s;
    for (int i = 1; i < argc; ++i) {
        if (i > 1) s += ' ';
        s += argv[i];
    }
    return s;
}

void emit(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    io::write_file_atomic(path, text);
}

io::PulseDocument load(const std::string& path) {
    const std::string text = path == "-" ? std::string(std::istreambuf_iterator<char>(std::cin), {})
                                         : io::read_file(path);
    return io::read_pulse_document(text);
}

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

DesignTask task_from(const DesignFlags& f) {
    std::string mode = f.mode;
    std::optional<double> amp = f.amplitude_khz, band = f.band_khz, pass = f.pass_khz,
                          flip = f.flip_deg;
    auto preset_default = [](std::optional<double>& slot, double value) {
        if (!slot) slot = value;
    };
    if (f.preset == "paper-inversion" || f.preset == "paper-excitation") {
        if (mode.empty()) mode = f.preset == "paper-inversion" ? "inversion" : "excitation";
        preset_default(amp, 10.0);
        preset_default(band, 20.0);
        preset_default(flip, 0.57);
    } else if (f.preset == "paper-band") {
        if (mode.empty()) mode = "band_selective";
        preset_default(amp, 5.0);
        preset_default(band, 5.0);
        preset_default(pass, 2.0);
        preset_default(flip, 0.29);
    } else if (!f.preset.empty()) {
        throw UsageError("unknown preset '" + f.preset + "'");
    }

    if (mode.empty()) throw UsageError("--mode is required (or use --preset)");
    if (!amp) throw UsageError("--amplitude-khz is required");
    if (!band) throw UsageError("--band-khz is required");
    if (!flip) throw UsageError("--flip-deg is required");

    DesignTask task;
    task.mode = parse_mode(mode);
    if (task.mode == DesignMode::BandSelective && !pass)
        throw UsageError("--pass-khz is required for band-selective designs");
    task.params = PulseParameters(*amp * 1e3, *flip);
    task.band_hz = *band * 1e3;
    task.pass_hz = pass.value_or(0.0) * 1e3;
    task.n_offsets = f.offsets;
    task.epsilon = f.epsilon;
    task.max_steps = f.max_steps;
    task.strategy = parse_strategy(f.strategy);
    task.validate();
    return task;
}

int cmd_design(const DesignFlags& f, const std::string& argv_line) {
    const DesignTask task = task_from(f);
    DesignReport report = design_pulse(task);

    report.sequence.metadata.settings["command"] = argv_line;
    report.forward.metadata.settings["command"] = argv_line;
    emit(f.out, io::write_pulse_json(report));
    if (!f.forward_out.empty())
        emit(f.forward_out, io::write_pulse_json(report.forward, report.converged));
    if (!f.shape_out.empty()) emit(f.shape_out, io::write_shape_file(report.sequence));

    std::cout << "mode=" << to_string(task.mode) << " steps=" << report.steps
              << " duration_ms=" << fmt("%.4f", report.duration_s * 1e3)
              << " converged=" << (report.converged ? "true" : "false")
              << " worst_z=" << fmt("%.6f", report.worst_final_z()) << '\n';
    return report.converged ? kExitOk : kExitNotConverged;
}

Magnetization initial_state(const std::string& name) {
    if (name == "north" || name == "z") return Magnetization::north();
    if (name == "south" || name == "-z") return Magnetization::south();
    if (name == "y") return Magnetization::plus_y();
    if (name == "x") return {1.0, 0.0, 0.0};
    throw UsageError("unknown initial state '" + name + "' (north, south, x, y)");
}

int cmd_evaluate(const EvaluateFlags& f) {
    const io::PulseDocument doc = load(f.in);
    const PulseSequence& seq = doc.sequence;
    if (f.points == 0) throw UsageError("--points must be at least 1 (empty evaluation grid)");

    double range_hz;
    if (f.range_khz) range_hz = *f.range_khz * 1e3;
    else if (seq.metadata.band_hz) range_hz = *seq.metadata.band_hz;
    else throw UsageError("--range-khz is required when the pulse carries no band");

    const std::vector<double> grid = uniform_grid(range_hz, f.points);
    const Profile profile = sweep(seq, grid, initial_state(f.from), SweepOptions{f.threads});

    const double band_hz = f.band_khz ? *f.band_khz * 1e3 : range_hz;
    std::optional<double> pass_hz;
    if (f.pass_khz) pass_hz = *f.pass_khz * 1e3;
    else if (seq.metadata.pass_hz) pass_hz = seq.metadata.pass_hz;

    std::optional<ProfileMetrics> m;
    if (band_hz > 0.0 && profile.size() > 1) m = metrics(profile, band_hz, pass_hz, f.transition_khz * 1e3);

    if (!f.csv_out.empty()) emit(f.csv_out, io::write_profile_csv(profile, m));
    if (!f.svg_out.empty()) emit(f.svg_out, io::write_plot_svg(profile));

    std::cout << "points=" << profile.size() << " from=" << f.from;
    if (m) {
        std::cout << " worst_inversion=" << fmt("%.6f", m->worst_inversion)
                  << " min_transverse=" << fmt("%.6f", m->min_transverse)
                  << " phase_spread_deg=" << fmt("%.3f", m->phase_spread_deg)
                  << " stopband_leakage=" << fmt("%.6f", m->stopband_leakage)
                  << " passband_ripple=" << fmt("%.6f", m->passband_ripple);
    }
    std::cout << '\n';
    return kExitOk;
}

int cmd_reverse(const ReverseFlags& f) {
    const io::PulseDocument doc = load(f.in);
    PulseSequence rev = reverse_with_pi(doc.sequence);
    rev.metadata.settings["reversed_from"] = f.in;
    emit(f.out, io::write_pulse_json(rev, doc.converged));
    std::cout << "steps=" << rev.size() << " duration_ms=" << fmt("%.4f", rev.duration_s() * 1e3)
              << '\n';
    return kExitOk;
}

int cmd_export(const ExportFlags& f) {
    const PulseSequence seq = load(f.in).sequence;
    std::string text;
    if (f.format == "shape") text = io::write_shape_file(seq, f.title);
    else if (f.format == "csv") text = io::write_phase_csv(seq);
    else if (f.format == "svg") text = io::write_plot_svg(seq);
    else throw UsageError("unknown export format '" + f.format + "' (shape, csv, svg)");
    emit(f.out, text);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Feedback pulse designer"};
    app.require_subcommand(1);

    std::string kernel = "auto";
    app.add_option("--kernel", kernel, "Rotation kernel: auto, scalar, avx2, neon")
        ->check(CLI::IsMember({"auto", "scalar", "avx2", "neon"}));

    DesignFlags df;
    auto* design_cmd = app.add_subcommand("design", "Run the feedback loop and write a pulse");
    design_cmd->add_option("--preset", df.preset, "paper-inversion | paper-excitation | paper-band");
    design_cmd->add_option("--mode", df.mode, "inversion | excitation | band");
    design_cmd->add_option("--amplitude-khz", df.amplitude_khz, "RF amplitude (kHz)");
    design_cmd->add_option("--band-khz", df.band_khz, "Half-width B of the design band (kHz)");
    design_cmd->add_option("--pass-khz", df.pass_khz, "Half-width C of the pass band (kHz)");
    design_cmd->add_option("--flip-deg", df.flip_deg, "Flip angle per step (degrees)");
    design_cmd->add_option("--offsets", df.offsets, "Number of design offsets (even)")
        ->capture_default_str();
    design_cmd->add_option("--epsilon", df.epsilon, "Stop when every z <= -(1 - epsilon)")
        ->capture_default_str();
    design_cmd->add_option("--max-steps", df.max_steps, "Step cap")->capture_default_str();
    design_cmd->add_option("--strategy", df.strategy, "worst_offset | linear_sweep")
        ->capture_default_str();
    design_cmd->add_option("-o,--out", df.out, "Pulse JSON output ('-' for stdout)")
        ->capture_default_str();
    design_cmd->add_option("--forward-out", df.forward_out,
                           "Also write the un-reversed feedback sequence");
    design_cmd->add_option("--shape", df.shape_out, "Also write a JCAMP-DX shape file");

    EvaluateFlags ef;
    auto* eval_cmd = app.add_subcommand("evaluate", "Sweep a pulse over an offset grid");
    eval_cmd->add_option("-i,--in", ef.in, "Pulse JSON")->required();
    eval_cmd->add_option("--points", ef.points, "Grid points")->capture_default_str();
    eval_cmd->add_option("--range-khz", ef.range_khz, "Grid half-width (default: pulse band)");
    eval_cmd->add_option("--band-khz", ef.band_khz, "Metric band half-width (default: range)");
    eval_cmd->add_option("--pass-khz", ef.pass_khz, "Metric pass band half-width");
    eval_cmd->add_option("--transition-khz", ef.transition_khz,
                         "Margin excluded from stop-band leakage");
    eval_cmd->add_option("--from", ef.from, "Initial state: north | south | x | y")
        ->capture_default_str();
    eval_cmd->add_option("--csv", ef.csv_out, "Profile CSV output");
    eval_cmd->add_option("--svg", ef.svg_out, "Profile plot output");
    eval_cmd->add_option("--threads", ef.threads, "Sweep threads (0 = all cores)")
        ->capture_default_str();

    ReverseFlags rf;
    auto* rev_cmd = app.add_subcommand("reverse", "Time-reverse a pulse and add pi to each phase");
    rev_cmd->add_option("-i,--in", rf.in, "Pulse JSON")->required();
    rev_cmd->add_option("-o,--out", rf.out, "Output pulse JSON")->required();

    ExportFlags xf;
    auto* exp_cmd = app.add_subcommand("export", "Convert a pulse JSON file");
    exp_cmd->add_option("-i,--in", xf.in, "Pulse JSON")->required();
    exp_cmd->add_option("-f,--format", xf.format, "shape | csv | svg")->capture_default_str();
    exp_cmd->add_option("-o,--out", xf.out, "Output file")->required();
    exp_cmd->add_option("--title", xf.title, "Shape file title");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (kernel == "scalar") kernels::select(kernels::Kind::Scalar);
        else if (kernel == "avx2") kernels::select(kernels::Kind::Avx2);
        else if (kernel == "neon") kernels::select(kernels::Kind::Neon);

        if (*design_cmd) return cmd_design(df, command_line(argc, argv));
        if (*eval_cmd) return cmd_evaluate(ef);
        if (*rev_cmd) return cmd_reverse(rf);
        if (*exp_cmd) return cmd_export(xf);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\nRun with --help for more information.\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InvalidParameter& e) {
        std::cerr << "invalid parameter: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
