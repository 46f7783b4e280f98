#include "fbpulse/kernels.hpp"

namespace fbpulse::kernels {

void rotate_batch_scalar(const RotationTable& table, StateArrays& state, std::size_t begin,
                         std::size_t end, double cos_phase, double sin_phase) {
    for (std::size_t i = begin; i < end; ++i) {
        const StepRotation r{table.axis_transverse[i], table.axis_z[i], table.cos_angle[i],
                             table.sin_angle[i], table.one_minus_cos[i]};
        const Magnetization m = apply_rotation(state.at(i), r, cos_phase, sin_phase);
        state.mx[i] = m.mx;
        state.my[i] = m.my;
        state.mz[i] = m.mz;
    }
}

} // namespace fbpulse::kernels
