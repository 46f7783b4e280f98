#include "fbpulse/kernels.hpp"

#include <arm_neon.h>

namespace fbpulse::kernels {

// vmulq/vaddq only: vfmaq would round differently from the scalar reference.
void rotate_batch_neon(const RotationTable& table, StateArrays& state, std::size_t begin,
                       std::size_t end, double cos_phase, double sin_phase) {
    const float64x2_t vcos_phase = vdupq_n_f64(cos_phase);
    const float64x2_t vsin_phase = vdupq_n_f64(sin_phase);

    double* mxp = state.mx.data();
    double* myp = state.my.data();
    double* mzp = state.mz.data();

    std::size_t i = begin;
    for (; i + 2 <= end; i += 2) {
        const float64x2_t a = vld1q_f64(table.axis_transverse.data() + i);
        const float64x2_t nz = vld1q_f64(table.axis_z.data() + i);
        const float64x2_t c = vld1q_f64(table.cos_angle.data() + i);
        const float64x2_t s = vld1q_f64(table.sin_angle.data() + i);
        const float64x2_t t = vld1q_f64(table.one_minus_cos.data() + i);

        const float64x2_t mx = vld1q_f64(mxp + i);
        const float64x2_t my = vld1q_f64(myp + i);
        const float64x2_t mz = vld1q_f64(mzp + i);

        const float64x2_t nx = vmulq_f64(a, vcos_phase);
        const float64x2_t ny = vmulq_f64(a, vsin_phase);

        float64x2_t dot = vaddq_f64(vmulq_f64(nx, mx), vmulq_f64(ny, my));
        dot = vaddq_f64(dot, vmulq_f64(nz, mz));

        const float64x2_t cx = vsubq_f64(vmulq_f64(ny, mz), vmulq_f64(nz, my));
        const float64x2_t cy = vsubq_f64(vmulq_f64(nz, mx), vmulq_f64(nx, mz));
        const float64x2_t cz = vsubq_f64(vmulq_f64(nx, my), vmulq_f64(ny, mx));

        const float64x2_t k = vmulq_f64(dot, t);

        float64x2_t ox = vaddq_f64(vmulq_f64(mx, c), vmulq_f64(cx, s));
        ox = vaddq_f64(ox, vmulq_f64(nx, k));
        float64x2_t oy = vaddq_f64(vmulq_f64(my, c), vmulq_f64(cy, s));
        oy = vaddq_f64(oy, vmulq_f64(ny, k));
        float64x2_t oz = vaddq_f64(vmulq_f64(mz, c), vmulq_f64(cz, s));
        oz = vaddq_f64(oz, vmulq_f64(nz, k));

        vst1q_f64(mxp + i, ox);
        vst1q_f64(myp + i, oy);
        vst1q_f64(mzp + i, oz);
    }
    if (i < end) rotate_batch_scalar(table, state, i, end, cos_phase, sin_phase);
}

} // namespace fbpulse::kernels
