#include "kernels_internal.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)
#define TICKCAST_HAVE_NEON_LANE 1
#include <arm_neon.h>
#else
#define TICKCAST_HAVE_NEON_LANE 0
#endif

namespace tickcast::kernels {

#if TICKCAST_HAVE_NEON_LANE

namespace {

// aarch64 float64x2 lane. NEON is mandatory on aarch64, so no runtime probe.

double dot_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
        acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    }
    for (; i + 2 <= n; i += 2) acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double sum_neon(const double* a, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc0 = vaddq_f64(acc0, vld1q_f64(a + i));
    double acc = vaddvq_f64(acc0);
    for (; i < n; ++i) acc += a[i];
    return acc;
}

double squared_distance_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        acc0 = vfmaq_f64(acc0, d, d);
    }
    double acc = vaddvq_f64(acc0);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

double centered_sumsq_neon(const double* a, double mean, std::size_t n) {
    const float64x2_t m = vdupq_n_f64(mean);
    float64x2_t acc0 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d = vsubq_f64(vld1q_f64(a + i), m);
        acc0 = vfmaq_f64(acc0, d, d);
    }
    double acc = vaddvq_f64(acc0);
    for (; i < n; ++i) {
        const double d = a[i] - mean;
        acc += d * d;
    }
    return acc;
}

double centered_dot_neon(const double* a, double mean_a, const double* b, double mean_b,
                         std::size_t n) {
    const float64x2_t ma = vdupq_n_f64(mean_a);
    const float64x2_t mb = vdupq_n_f64(mean_b);
    float64x2_t acc0 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t da = vsubq_f64(vld1q_f64(a + i), ma);
        const float64x2_t db = vsubq_f64(vld1q_f64(b + i), mb);
        acc0 = vfmaq_f64(acc0, da, db);
    }
    double acc = vaddvq_f64(acc0);
    for (; i < n; ++i) acc += (a[i] - mean_a) * (b[i] - mean_b);
    return acc;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t prod = vmulq_f64(va, vld1q_f64(x + i));
        vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), prod));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void hadamard_neon(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(out + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    for (; i < n; ++i) out[i] = a[i] * b[i];
}

void shift_scale_neon(const double* a, double shift, double scale, double* out,
                      std::size_t n) {
    const float64x2_t vs = vdupq_n_f64(shift);
    const float64x2_t vm = vdupq_n_f64(scale);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(out + i, vmulq_f64(vaddq_f64(vld1q_f64(a + i), vs), vm));
    for (; i < n; ++i) out[i] = (a[i] + shift) * scale;
}

}  // namespace

const KernelTable* neon_table() {
    static const KernelTable table{
        dot_neon,      sum_neon,      squared_distance_neon, centered_sumsq_neon,
        centered_dot_neon, axpy_neon, hadamard_neon,         shift_scale_neon,
    };
    return &table;
}

#else

const KernelTable* neon_table() { return nullptr; }

#endif  // TICKCAST_HAVE_NEON_LANE

}  // namespace tickcast::kernels
