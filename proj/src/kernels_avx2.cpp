// Built with -mavx2; only called after a runtime CPU check.
#include "fbpulse/kernels.hpp"

#include <immintrin.h>

namespace fbpulse::kernels {

void rotate_batch_avx2(const RotationTable& table, StateArrays& state, std::size_t begin,
                       std::size_t end, double cos_phase, double sin_phase) {
    const __m256d vcos_phase = _mm256_set1_pd(cos_phase);
    const __m256d vsin_phase = _mm256_set1_pd(sin_phase);

    double* mxp = state.mx.data();
    double* myp = state.my.data();
    double* mzp = state.mz.data();

    std::size_t i = begin;
    for (; i + 4 <= end; i += 4) {
        const __m256d a = _mm256_loadu_pd(table.axis_transverse.data() + i);
        const __m256d nz = _mm256_loadu_pd(table.axis_z.data() + i);
        const __m256d c = _mm256_loadu_pd(table.cos_angle.data() + i);
        const __m256d s = _mm256_loadu_pd(table.sin_angle.data() + i);
        const __m256d t = _mm256_loadu_pd(table.one_minus_cos.data() + i);

        const __m256d mx = _mm256_loadu_pd(mxp + i);
        const __m256d my = _mm256_loadu_pd(myp + i);
        const __m256d mz = _mm256_loadu_pd(mzp + i);

        const __m256d nx = _mm256_mul_pd(a, vcos_phase);
        const __m256d ny = _mm256_mul_pd(a, vsin_phase);

        __m256d dot = _mm256_add_pd(_mm256_mul_pd(nx, mx), _mm256_mul_pd(ny, my));
        dot = _mm256_add_pd(dot, _mm256_mul_pd(nz, mz));

        const __m256d cx = _mm256_sub_pd(_mm256_mul_pd(ny, mz), _mm256_mul_pd(nz, my));
        const __m256d cy = _mm256_sub_pd(_mm256_mul_pd(nz, mx), _mm256_mul_pd(nx, mz));
        const __m256d cz = _mm256_sub_pd(_mm256_mul_pd(nx, my), _mm256_mul_pd(ny, mx));

        const __m256d k = _mm256_mul_pd(dot, t);

        __m256d ox = _mm256_add_pd(_mm256_mul_pd(mx, c), _mm256_mul_pd(cx, s));
        ox = _mm256_add_pd(ox, _mm256_mul_pd(nx, k));
        __m256d oy = _mm256_add_pd(_mm256_mul_pd(my, c), _mm256_mul_pd(cy, s));
        oy = _mm256_add_pd(oy, _mm256_mul_pd(ny, k));
        __m256d oz = _mm256_add_pd(_mm256_mul_pd(mz, c), _mm256_mul_pd(cz, s));
        oz = _mm256_add_pd(oz, _mm256_mul_pd(nz, k));

        _mm256_storeu_pd(mxp + i, ox);
        _mm256_storeu_pd(myp + i, oy);
        _mm256_storeu_pd(mzp + i, oz);
    }
    if (i < end) rotate_batch_scalar(table, state, i, end, cos_phase, sin_phase);
}

} // namespace fbpulse::kernels
