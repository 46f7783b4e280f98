#include "fbpulse/designer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fbpulse/error.hpp"
#include "fbpulse/kernels.hpp"

namespace fbpulse {

std::string_view to_string(DesignMode mode) {
    switch (mode) {
    case DesignMode::Inversion: return "inversion";
    case DesignMode::Excitation: return "excitation";
    case DesignMode::BandSelective: return "band_selective";
    }
    return "unknown";
}

std::string_view to_string(SelectionStrategy strategy) {
    switch (strategy) {
    case SelectionStrategy::WorstOffset: return "worst_offset";
    case SelectionStrategy::LinearSweep: return "linear_sweep";
    }
    return "unknown";
}

DesignMode parse_mode(std::string_view text) {
    if (text == "inversion") return DesignMode::Inversion;
    if (text == "excitation") return DesignMode::Excitation;
    if (text == "band_selective" || text == "band") return DesignMode::BandSelective;
    throw InvalidParameter("unknown design mode '" + std::string(text) + "'");
}

SelectionStrategy parse_strategy(std::string_view text) {
    if (text == "worst_offset" || text == "worst") return SelectionStrategy::WorstOffset;
    if (text == "linear_sweep" || text == "linear") return SelectionStrategy::LinearSweep;
    throw InvalidParameter("unknown selection strategy '" + std::string(text) + "'");
}

void DesignTask::validate() const {
    if (!(band_hz > 0.0) || !std::isfinite(band_hz))
        throw InvalidParameter("band half-width must be positive");
    if (mode == DesignMode::BandSelective && !(pass_hz > 0.0 && pass_hz < band_hz))
        throw InvalidParameter("pass band half-width must satisfy 0 < C < B");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw InvalidParameter("termination tolerance must lie in (0, 1)");
    if (max_steps < 1) throw InvalidParameter("max_steps must be at least 1");
    if (design_offsets_hz.empty()) {
        if (n_offsets < 2 || n_offsets % 2 != 0)
            throw InvalidParameter("design offset count must be even and at least 2");
        return;
    }
    for (std::size_t i = 0; i < design_offsets_hz.size(); ++i) {
        const double nu = design_offsets_hz[i];
        if (!std::isfinite(nu) || std::abs(nu) > band_hz)
            throw InvalidParameter("design offset outside [-B, B]");
        if (i > 0 && !(nu > design_offsets_hz[i - 1]))
            throw InvalidParameter("design offsets must be strictly increasing");
    }
}

std::vector<double> DesignTask::offsets() const {
    return design_offsets_hz.empty() ? make_offset_grid(band_hz, n_offsets) : design_offsets_hz;
}

double DesignReport::worst_final_z() const {
    double worst = -1.0;
    for (const auto& m : final_states) worst = std::max(worst, m.mz);
    return worst;
}

std::vector<double> uniform_grid(double half_width_hz, std::size_t n) {
    if (n == 0) return {};
    if (!(half_width_hz >= 0.0) || !std::isfinite(half_width_hz))
        throw InvalidParameter("grid half-width must be non-negative");
    std::vector<double> grid(n, 0.0);
    if (n == 1) return grid;
    const double denom = static_cast<double>(n - 1);
    // Fill the upper half, then mirror it so the grid is exactly symmetric.
    for (std::size_t k = n / 2; k < n; ++k) {
        const double twice = static_cast<double>(2 * k) - denom;  // 2k - (n-1), exact
        grid[k] = half_width_hz * twice / denom;
    }
    grid[n - 1] = half_width_hz;
    for (std::size_t k = 0; k < n / 2; ++k) grid[k] = -grid[n - 1 - k];
    if (n % 2 == 1) grid[n / 2] = 0.0;
    return grid;
}

std::vector<double> make_offset_grid(double band_hz, std::size_t n_offsets) {
    if (n_offsets < 2 || n_offsets % 2 != 0)
        throw InvalidParameter("design offset count must be even and at least 2, got " +
                               std::to_string(n_offsets));
    if (!(band_hz > 0.0)) throw InvalidParameter("band half-width must be positive");
    return uniform_grid(band_hz, n_offsets);
}

std::vector<Magnetization> init_states(const DesignTask& task, std::span<const double> offsets_hz) {
    std::vector<Magnetization> states(offsets_hz.size());
    for (std::size_t i = 0; i < offsets_hz.size(); ++i) {
        switch (task.mode) {
        case DesignMode::Inversion: states[i] = Magnetization::north(); break;
        case DesignMode::Excitation: states[i] = Magnetization::plus_y(); break;
        case DesignMode::BandSelective:
            states[i] = std::abs(offsets_hz[i]) <= task.pass_hz ? Magnetization::plus_y()
                                                                : Magnetization::south();
            break;
        }
    }
    return states;
}

namespace {

std::size_t argmax_z(std::span<const double> mz) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < mz.size(); ++i)
        if (mz[i] > mz[best]) best = i;
    return best;
}

} // namespace

std::size_t select_target(const DesignState& state, SelectionStrategy strategy) {
    if (state.states.empty()) throw InvalidParameter("design state is empty");
    if (strategy == SelectionStrategy::LinearSweep) return state.step_count % state.states.size();
    std::size_t best = 0;
    for (std::size_t i = 1; i < state.states.size(); ++i)
        if (state.states[i].mz > state.states[best].mz) best = i;
    return best;
}

double feedback_phase(const Magnetization& m) {
    const double phi = m.transverse() < 1e-12 ? 0.0 : std::atan2(m.my, m.mx);
    return normalize_phase(phi + 0.5 * kPi);
}

DesignReport design(const DesignTask& task) {
    task.validate();
    const std::vector<double> offsets = task.offsets();
    const std::vector<Magnetization> initial = init_states(task, offsets);

    const kernels::RotationTable table(task.params, offsets);
    kernels::StateArrays state(initial);
    const kernels::BatchFn kernel = kernels::function(kernels::active());
    const std::size_t n = offsets.size();
    const double threshold = -(1.0 - task.epsilon);

    PulseSequence seq{task.params, {}, {}};
    seq.metadata.mode = std::string(to_string(task.mode));
    seq.metadata.band_hz = task.band_hz;
    if (task.mode == DesignMode::BandSelective) seq.metadata.pass_hz = task.pass_hz;
    seq.metadata.settings = {
        {"strategy", std::string(to_string(task.strategy))},
        {"epsilon", std::to_string(task.epsilon)},
        {"design_offsets", std::to_string(n)},
        {"max_steps", std::to_string(task.max_steps)},
        {"stage", "forward"},
    };

    bool converged = false;
    std::size_t step = 0;
    for (;;) {
        const std::size_t worst = argmax_z(state.mz);
        if (state.mz[worst] <= threshold) {
            converged = true;
            break;
        }
        if (step == task.max_steps) break;

        const std::size_t target =
            task.strategy == SelectionStrategy::WorstOffset ? worst : step % n;
        const double theta = feedback_phase(state.at(target));
        kernel(table, state, 0, n, std::cos(theta), std::sin(theta));
        seq.phases_rad.push_back(theta);
        ++step;
    }

    const double duration = static_cast<double>(step) * task.params.dwell_s();
    PulseSequence forward = seq;
    DesignReport report{std::move(seq), std::move(forward), converged, offsets,
                        state.to_vector(), step, duration};
    return report;
}

PulseSequence reverse_with_pi(const PulseSequence& seq) {
    PulseSequence out{seq.params, {}, seq.metadata};
    out.phases_rad.reserve(seq.size());
    for (auto it = seq.phases_rad.rbegin(); it != seq.phases_rad.rend(); ++it)
        out.phases_rad.push_back(normalize_phase(*it + kPi));
    const auto prev = seq.metadata.settings.find("reversals");
    const int count = prev == seq.metadata.settings.end() ? 0 : std::stoi(prev->second);
    out.metadata.settings["reversals"] = std::to_string(count + 1);
    out.metadata.settings["stage"] = "reversed";
    return out;
}

namespace {

DesignReport design_reversed(const DesignTask& task, DesignMode expected) {
    if (task.mode != expected)
        throw InvalidParameter("task mode is " + std::string(to_string(task.mode)) + ", expected " +
                               std::string(to_string(expected)));
    DesignReport report = design(task);
    report.sequence = reverse_with_pi(report.forward);
    return report;
}

} // namespace

DesignReport design_excitation(const DesignTask& task) {
    return design_reversed(task, DesignMode::Excitation);
}

DesignReport design_band_selective(const DesignTask& task) {
    return design_reversed(task, DesignMode::BandSelective);
}

DesignReport design_pulse(const DesignTask& task) {
    switch (task.mode) {
    case DesignMode::Excitation: return design_excitation(task);
    case DesignMode::BandSelective: return design_band_selective(task);
    case DesignMode::Inversion: break;
    }
    return design(task);
}

} // namespace fbpulse
