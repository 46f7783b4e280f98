#include "fbpulse/kernels.hpp"

#include <atomic>
#include <cmath>
#include <string>

#include "fbpulse/error.hpp"

namespace fbpulse::kernels {

std::string_view name(Kind kind) {
    switch (kind) {
    case Kind::Scalar: return "scalar";
    case Kind::Avx2: return "avx2";
    case Kind::Neon: return "neon";
    }
    return "unknown";
}

RotationTable::RotationTable(const PulseParameters& params, std::span<const double> offsets_hz) {
    const std::size_t n = offsets_hz.size();
    axis_transverse.resize(n);
    axis_z.resize(n);
    cos_angle.resize(n);
    sin_angle.resize(n);
    one_minus_cos.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const StepRotation r = step_rotation(params, offsets_hz[i]);
        axis_transverse[i] = r.axis_transverse;
        axis_z[i] = r.axis_z;
        cos_angle[i] = r.cos_angle;
        sin_angle[i] = r.sin_angle;
        one_minus_cos[i] = r.one_minus_cos;
    }
}

StateArrays::StateArrays(std::span<const Magnetization> states)
    : mx(states.size()), my(states.size()), mz(states.size()) {
    for (std::size_t i = 0; i < states.size(); ++i) {
        mx[i] = states[i].mx;
        my[i] = states[i].my;
        mz[i] = states[i].mz;
    }
}

StateArrays::StateArrays(std::size_t n, const Magnetization& fill)
    : mx(n, fill.mx), my(n, fill.my), mz(n, fill.mz) {}

std::vector<Magnetization> StateArrays::to_vector() const {
    std::vector<Magnetization> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = at(i);
    return out;
}

bool is_available(Kind kind) {
    switch (kind) {
    case Kind::Scalar: return true;
    case Kind::Avx2:
#if defined(FBPULSE_HAVE_AVX2)
        return __builtin_cpu_supports("avx2");
#else
        return false;
#endif
    case Kind::Neon:
#if defined(FBPULSE_HAVE_NEON)
        return true;
#else
        return false;
#endif
    }
    return false;
}

std::vector<Kind> available() {
    std::vector<Kind> out;
    for (Kind k : {Kind::Scalar, Kind::Avx2, Kind::Neon})
        if (is_available(k)) out.push_back(k);
    return out;
}

namespace {

Kind detect() {
    if (is_available(Kind::Avx2)) return Kind::Avx2;
    if (is_available(Kind::Neon)) return Kind::Neon;
    return Kind::Scalar;
}

std::atomic<int> g_override{-1};

} // namespace

Kind active() {
    static const Kind detected = detect();
    const int forced = g_override.load(std::memory_order_relaxed);
    return forced < 0 ? detected : static_cast<Kind>(forced);
}

void select(Kind kind) {
    if (!is_available(kind))
        throw InvalidParameter("kernel '" + std::string(name(kind)) + "' is not available on this CPU");
    g_override.store(static_cast<int>(kind), std::memory_order_relaxed);
}

void reset_selection() { g_override.store(-1, std::memory_order_relaxed); }

BatchFn function(Kind kind) {
    switch (kind) {
#if defined(FBPULSE_HAVE_AVX2)
    case Kind::Avx2: return &rotate_batch_avx2;
#endif
#if defined(FBPULSE_HAVE_NEON)
    case Kind::Neon: return &rotate_batch_neon;
#endif
    default: return &rotate_batch_scalar;
    }
}

void rotate_batch(Kind kind, const RotationTable& table, StateArrays& state, std::size_t begin,
                  std::size_t end, double phase_rad) {
    function(kind)(table, state, begin, end, std::cos(phase_rad), std::sin(phase_rad));
}

void rotate_batch(const RotationTable& table, StateArrays& state, double phase_rad) {
    rotate_batch(active(), table, state, 0, state.size(), phase_rad);
}

} // namespace fbpulse::kernels
