#include "fbpulse/profile.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "fbpulse/error.hpp"
#include "fbpulse/kernels.hpp"

namespace fbpulse {

double Profile::transverse(std::size_t i) const { return std::hypot(mx[i], my[i]); }

namespace {

void check_grid(std::span<const double> grid) {
    if (grid.empty()) throw InvalidParameter("evaluation grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i])) throw InvalidParameter("evaluation grid has a non-finite offset");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw InvalidParameter("evaluation grid must be strictly increasing");
    }
}

// Every lane only ever touches its own index, so any partition of the grid
// yields the same bits.
void run_chunk(const PulseSequence& seq, const kernels::RotationTable& table,
               kernels::StateArrays& state, kernels::BatchFn kernel, std::size_t begin,
               std::size_t end) {
    for (double phase : seq.phases_rad)
        kernel(table, state, begin, end, std::cos(phase), std::sin(phase));
}

} // namespace

Profile sweep(const PulseSequence& seq, std::span<const double> grid_hz, const Magnetization& m0,
              SweepOptions options) {
    check_grid(grid_hz);
    if (!(std::abs(m0.norm() - 1.0) <= 1e-6))
        throw InvalidParameter("initial magnetization must be unit norm");

    const kernels::RotationTable table(seq.params, grid_hz);
    kernels::StateArrays state(grid_hz.size(), m0);
    const kernels::BatchFn kernel = kernels::function(kernels::active());

    unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                            : options.threads;
    const std::size_t n = grid_hz.size();
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));

    if (threads <= 1) {
        run_chunk(seq, table, state, kernel, 0, n);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t begin = n * t / threads;
            const std::size_t end = n * (t + 1) / threads;
            pool.emplace_back(
                [&, begin, end] { run_chunk(seq, table, state, kernel, begin, end); });
        }
    }

    Profile p;
    p.offsets_hz.assign(grid_hz.begin(), grid_hz.end());
    p.mx = std::move(state.mx);
    p.my = std::move(state.my);
    p.mz = std::move(state.mz);
    p.initial_state = m0;
    return p;
}

ProfileMetrics metrics(const Profile& profile, double band_hz, std::optional<double> pass_hz,
                       double transition_hz) {
    if (profile.size() == 0) throw InvalidParameter("profile is empty");
    if (!(band_hz > 0.0)) throw InvalidParameter("band half-width must be positive");
    const double tol = 1e-9 * band_hz;
    if (profile.offsets_hz.front() > -band_hz + tol || profile.offsets_hz.back() < band_hz - tol)
        throw InvalidParameter("band [-" + std::to_string(band_hz) + ", " + std::to_string(band_hz) +
                               "] Hz is not covered by the profile grid");
    if (pass_hz && !(*pass_hz > 0.0 && *pass_hz <= band_hz))
        throw InvalidParameter("pass band must satisfy 0 < C <= B");
    if (transition_hz < 0.0) throw InvalidParameter("transition margin must be non-negative");

    const double pass = pass_hz.value_or(band_hz);

    ProfileMetrics out;
    out.worst_inversion = -1.0;
    double min_t = 1.0, max_t = 0.0, leak = 0.0;
    bool any_pass = false;
    bool have_phase = false;
    double prev_phase = 0.0, unwrapped = 0.0, lo = 0.0, hi = 0.0;

    for (std::size_t i = 0; i < profile.size(); ++i) {
        const double nu = std::abs(profile.offsets_hz[i]);
        if (nu > band_hz + tol) continue;
        const double t = profile.transverse(i);
        out.worst_inversion = std::max(out.worst_inversion, profile.mz[i]);

        if (nu <= pass + tol) {
            any_pass = true;
            min_t = std::min(min_t, t);
            max_t = std::max(max_t, t);
            if (t > 0.1) {
                const double ph = std::atan2(profile.my[i], profile.mx[i]);
                if (!have_phase) {
                    unwrapped = ph;
                    lo = hi = ph;
                    have_phase = true;
                } else {
                    double d = ph - prev_phase;
                    d -= kTwoPi * std::round(d / kTwoPi);
                    unwrapped += d;
                    lo = std::min(lo, unwrapped);
                    hi = std::max(hi, unwrapped);
                }
                prev_phase = ph;
            }
        } else if (nu > pass + transition_hz) {
            leak = std::max(leak, t);
        }
    }

    out.min_transverse = any_pass ? std::min(min_t, 1.0) : 0.0;
    out.passband_ripple = any_pass ? max_t - min_t : 0.0;
    out.stopband_leakage = std::min(leak, 1.0);
    out.phase_spread_deg = have_phase ? (hi - lo) * 180.0 / kPi : 0.0;
    return out;
}

std::vector<Profile> amplitude_robustness_sweep(const PulseSequence& seq,
                                                std::span<const double> grid_hz,
                                                const Magnetization& m0,
                                                std::span<const double> scales,
                                                SweepOptions options) {
    for (double s : scales)
        if (!(s > 0.0) || !std::isfinite(s))
            throw InvalidParameter("amplitude scale must be positive, got " + std::to_string(s));
    std::vector<Profile> out;
    out.reserve(scales.size());
    for (double s : scales) {
        PulseSequence scaled{seq.params.scaled_amplitude(s), seq.phases_rad, seq.metadata};
        out.push_back(sweep(scaled, grid_hz, m0, options));
    }
    return out;
}

} // namespace fbpulse
