#include "kernels_internal.hpp"

// Reference lane. Kept branch-free and obvious; the SIMD lanes must agree
// with these semantics.

namespace tickcast::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double sum_scalar(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i];
    return acc;
}

double squared_distance_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

double centered_sumsq_scalar(const double* a, double mean, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - mean;
        acc += d * d;
    }
    return acc;
}

double centered_dot_scalar(const double* a, double mean_a, const double* b, double mean_b,
                           std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += (a[i] - mean_a) * (b[i] - mean_b);
    return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void hadamard_scalar(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void shift_scale_scalar(const double* a, double shift, double scale, double* out,
                        std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = (a[i] + shift) * scale;
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{
        dot_scalar,      sum_scalar,      squared_distance_scalar, centered_sumsq_scalar,
        centered_dot_scalar, axpy_scalar, hadamard_scalar,         shift_scale_scalar,
    };
    return table;
}

}  // namespace tickcast::kernels
