#pragma once

// Batched step rotation over many offsets sharing one RF phase.
//
// State is kept structure-of-arrays so the vector kernels can load lanes
// directly. Every kernel evaluates the same sequence of IEEE multiplies and
// adds as apply_rotation() (the library is built without FP contraction), so
// all variants are bitwise interchangeable.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "fbpulse/bloch.hpp"

namespace fbpulse::kernels {

enum class Kind { Scalar, Avx2, Neon };

std::string_view name(Kind kind);

/// Per-offset step constants, laid out for vector loads.
struct RotationTable {
    std::vector<double> axis_transverse;
    std::vector<double> axis_z;
    std::vector<double> cos_angle;
    std::vector<double> sin_angle;
    std::vector<double> one_minus_cos;

    RotationTable() = default;
    RotationTable(const PulseParameters& params, std::span<const double> offsets_hz);

    std::size_t size() const noexcept { return cos_angle.size(); }
};

struct StateArrays {
    std::vector<double> mx;
    std::vector<double> my;
    std::vector<double> mz;

    StateArrays() = default;
    explicit StateArrays(std::span<const Magnetization> states);
    StateArrays(std::size_t n, const Magnetization& fill);

    std::size_t size() const noexcept { return mx.size(); }
    Magnetization at(std::size_t i) const { return {mx[i], my[i], mz[i]}; }
    std::vector<Magnetization> to_vector() const;
};

/// Lanes [begin, end) of one step at phase with the given cos/sin.
using BatchFn = void (*)(const RotationTable& table, StateArrays& state, std::size_t begin,
                         std::size_t end, double cos_phase, double sin_phase);

void rotate_batch_scalar(const RotationTable&, StateArrays&, std::size_t, std::size_t, double, double);
#if defined(FBPULSE_HAVE_AVX2)
void rotate_batch_avx2(const RotationTable&, StateArrays&, std::size_t, std::size_t, double, double);
#endif
#if defined(FBPULSE_HAVE_NEON)
void rotate_batch_neon(const RotationTable&, StateArrays&, std::size_t, std::size_t, double, double);
#endif

/// Kernels compiled in and supported by the running CPU, scalar first.
std::vector<Kind> available();
bool is_available(Kind kind);

/// Best available kernel unless overridden with select().
Kind active();
/// Forces a kernel; throws InvalidParameter if it is not available.
void select(Kind kind);
/// Returns to automatic selection.
void reset_selection();

BatchFn function(Kind kind);

/// One step on all lanes with the active kernel.
void rotate_batch(const RotationTable& table, StateArrays& state, double phase_rad);
void rotate_batch(Kind kind, const RotationTable& table, StateArrays& state, std::size_t begin,
                  std::size_t end, double phase_rad);

} // namespace fbpulse::kernels
