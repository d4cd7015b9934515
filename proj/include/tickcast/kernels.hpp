#pragma once

#include <cstddef>

// Data-parallel primitives behind the whole pipeline: GD matrix-vector
// products, correlation moments, k-means / silhouette / RBF distances and
// column standardization all funnel through these.
//
// Each operation has a scalar reference implementation plus SIMD variants
// (AVX2 on x86-64, NEON on aarch64) selected at runtime. The scalar lane is
// the semantic ground truth; SIMD lanes are equivalence-tested against it.
// Elementwise ops (axpy, hadamard, shift_scale) are bit-identical across
// lanes; reductions may differ in the last bits due to FMA and reassociation.
namespace tickcast::kernels {

enum class Lane { Scalar, Avx2, Neon };

// Lane control. Selection is process-global; switch lanes only at startup or
// between test sections, not while other threads run kernels.
Lane active_lane();
bool lane_available(Lane lane);
void select_lane(Lane lane);  // throws InvalidConfig if unavailable
// Best available lane, unless the TICKCAST_KERNELS env var (scalar|avx2|neon|auto)
// pins one.
void select_best_lane();
const char* lane_name(Lane lane);

// sum_i a[i] * b[i]
double dot(const double* a, const double* b, std::size_t n);

// sum_i a[i]
double sum(const double* a, std::size_t n);

// sum_i (a[i] - b[i])^2
double squared_distance(const double* a, const double* b, std::size_t n);

// sum_i (a[i] - mean)^2
double centered_sumsq(const double* a, double mean, std::size_t n);

// sum_i (a[i] - mean_a) * (b[i] - mean_b)
double centered_dot(const double* a, double mean_a, const double* b, double mean_b,
                    std::size_t n);

// y[i] += alpha * x[i]
void axpy(double alpha, const double* x, double* y, std::size_t n);

// out[i] = a[i] * b[i]
void hadamard(const double* a, const double* b, double* out, std::size_t n);

// out[i] = (a[i] + shift) * scale
void shift_scale(const double* a, double shift, double scale, double* out, std::size_t n);

}  // namespace tickcast::kernels
