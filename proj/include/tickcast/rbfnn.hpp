#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tickcast/matrix.hpp"

namespace tickcast {

// Gaussian RBF network with k-means centroids, one shared spread, and
// closed-form least-squares output weights (no bias neuron by default).
struct RbfModel {
    Matrix centroids;            // K x F
    double sigma = 0.0;          // shared spread
    std::vector<double> weights; // length K
    double lambda = 0.0;         // ridge actually used by the solve
    // Input transform applied before the activations, captured at fit time:
    // x~[f] = (x[f] + offset[f]) * scale[f]. Empty vectors mean identity.
    std::vector<double> input_offset;
    std::vector<double> input_scale;

    std::size_t k() const { return centroids.rows(); }
    std::size_t n_inputs() const { return centroids.cols(); }
};

struct RbfFitConfig {
    std::size_t n_init = 10;
    std::size_t kmeans_max_iter = 100;
    double tol = 1e-8;
    // Ridge added to A^T A; negative requests the automatic floor
    // 1e-8 * trace(A^T A) / K. Zero pins the plain normal equations.
    double ridge = -1.0;
    std::uint64_t seed = 0;
    bool add_bias = false;  // optional constant column, off by default
};

// Mean pairwise centroid distance, floored at 1e-9 * (1 + mean centroid
// norm). Throws SingleCentroid when K < 2.
double spread(const Matrix& centroids);

// A[i][j] = exp(-||x_i - mu_j||^2 / (2 sigma^2)).
Matrix activations(const Matrix& x, const Matrix& centroids, double sigma);

// w = (A^T A + lambda I)^-1 A^T y via Cholesky. Requires N >= K. Throws
// SingularSystem when lambda == 0 and A^T A is numerically singular.
std::vector<double> solve_weights(const Matrix& a, std::span<const double> y, double lambda);

// Stage-2 fit on sample rows: k-means with K = k_star (best inertia over
// n_init restarts), shared spread, closed-form weights. `x` must already
// carry the input transform; pass offset/scale so predict can reapply it.
RbfModel fit_rbfnn(const Matrix& x, std::span<const double> y, std::size_t k_star,
                   const RbfFitConfig& cfg, std::vector<double> input_offset = {},
                   std::vector<double> input_scale = {});

// Applies the stored input transform, then sums weighted activations.
// Throws DimensionMismatch when the column count doesn't match.
std::vector<double> predict(const RbfModel& model, const Matrix& x_raw);

}  // namespace tickcast
