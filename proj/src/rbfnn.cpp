#include "tickcast/rbfnn.hpp"

#include <cmath>

#include "tickcast/cluster.hpp"
#include "tickcast/errors.hpp"
#include "tickcast/kernels.hpp"
#include "tickcast/rng.hpp"

namespace tickcast {

double spread(const Matrix& centroids) {
    const std::size_t k = centroids.rows();
    const std::size_t d = centroids.cols();
    if (k < 2) throw SingleCentroid("spread: need K >= 2");

    double total = 0.0;
    for (std::size_t l = 0; l < k; ++l)
        for (std::size_t m = 0; m < k; ++m) {
            if (m == l) continue;
            total += std::sqrt(kernels::squared_distance(centroids.row(l), centroids.row(m), d));
        }
    const double sigma = total / (static_cast<double>(k) * static_cast<double>(k - 1));

    double norm_sum = 0.0;
    for (std::size_t l = 0; l < k; ++l)
        norm_sum += std::sqrt(kernels::dot(centroids.row(l), centroids.row(l), d));
    const double floor = 1e-9 * (1.0 + norm_sum / static_cast<double>(k));
    return std::max(sigma, floor);
}

Matrix activations(const Matrix& x, const Matrix& centroids, double sigma) {
    if (!(sigma > 0.0)) throw InvalidConfig("activations: sigma must be > 0");
    if (x.cols() != centroids.cols())
        throw DimensionMismatch("activations: input width != centroid width");
    const std::size_t n = x.rows();
    const std::size_t k = centroids.rows();
    const double inv_two_sigma_sq = 1.0 / (2.0 * sigma * sigma);
    Matrix a(n, k);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j)
            a(i, j) = std::exp(-kernels::squared_distance(x.row(i), centroids.row(j),
                                                          x.cols()) *
                               inv_two_sigma_sq);
    return a;
}

namespace {

// Cholesky solve of (G + lambda I) w = g for the K x K normal equations.
// K stays tiny (cluster counts), so an in-place factorization is plenty.
std::vector<double> cholesky_solve(Matrix g, std::vector<double> rhs, double lambda,
                                   bool lambda_was_zero) {
    const std::size_t k = g.rows();
    for (std::size_t i = 0; i < k; ++i) g(i, i) += lambda;

    for (std::size_t j = 0; j < k; ++j) {
        double d = g(j, j);
        for (std::size_t p = 0; p < j; ++p) d -= g(j, p) * g(j, p);
        if (!(d > 0.0) || !std::isfinite(d)) {
            if (lambda_was_zero)
                throw SingularSystem("solve_weights: A^T A numerically singular");
            throw SingularSystem("solve_weights: ridge system not positive definite");
        }
        const double root = std::sqrt(d);
        g(j, j) = root;
        for (std::size_t i = j + 1; i < k; ++i) {
            double v = g(i, j);
            for (std::size_t p = 0; p < j; ++p) v -= g(i, p) * g(j, p);
            g(i, j) = v / root;
        }
    }
    // Forward then back substitution.
    for (std::size_t i = 0; i < k; ++i) {
        double v = rhs[i];
        for (std::size_t p = 0; p < i; ++p) v -= g(i, p) * rhs[p];
        rhs[i] = v / g(i, i);
    }
    for (std::size_t ri = k; ri-- > 0;) {
        double v = rhs[ri];
        for (std::size_t p = ri + 1; p < k; ++p) v -= g(p, ri) * rhs[p];
        rhs[ri] = v / g(ri, ri);
    }
    return rhs;
}

}  // namespace

std::vector<double> solve_weights(const Matrix& a, std::span<const double> y, double lambda) {
    const std::size_t n = a.rows();
    const std::size_t k = a.cols();
    if (n < k) throw DimensionMismatch("solve_weights: need N >= K");
    if (y.size() != n) throw DimensionMismatch("solve_weights: target length != N");
    if (lambda < 0.0) throw InvalidConfig("solve_weights: lambda must be >= 0");

    const Matrix at = a.transposed();  // K x N, rows contiguous per basis column
    Matrix gram(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i; j < k; ++j) {
            const double v = kernels::dot(at.row(i), at.row(j), n);
            gram(i, j) = v;
            gram(j, i) = v;
        }
    std::vector<double> rhs(k);
    for (std::size_t i = 0; i < k; ++i) rhs[i] = kernels::dot(at.row(i), y.data(), n);

    return cholesky_solve(std::move(gram), std::move(rhs), lambda, lambda == 0.0);
}

RbfModel fit_rbfnn(const Matrix& x, std::span<const double> y, std::size_t k_star,
                   const RbfFitConfig& cfg, std::vector<double> input_offset,
                   std::vector<double> input_scale) {
    const std::size_t n = x.rows();
    if (k_star < 2) throw SingleCentroid("fit_rbfnn: need K >= 2");
    if (n < k_star) throw BadK("fit_rbfnn: need N >= K");
    if (y.size() != n) throw DimensionMismatch("fit_rbfnn: target length != N");

    // Best-of-restarts sample-space k-means; strict comparison keeps the
    // earliest restart on inertia ties.
    Clustering best;
    bool have = false;
    for (std::size_t init = 0; init < cfg.n_init; ++init) {
        Clustering cl = kmeans(x, k_star, Rng::derive(cfg.seed, init), cfg.kmeans_max_iter,
                               cfg.tol, false);
        if (!have || cl.inertia < best.inertia) {
            best = std::move(cl);
            have = true;
        }
    }

    RbfModel model;
    model.centroids = std::move(best.centroids);
    model.sigma = spread(model.centroids);
    model.input_offset = std::move(input_offset);
    model.input_scale = std::move(input_scale);

    Matrix a = activations(x, model.centroids, model.sigma);
    if (cfg.add_bias) {
        Matrix ab(a.rows(), a.cols() + 1);
        for (std::size_t i = 0; i < a.rows(); ++i) {
            for (std::size_t j = 0; j < a.cols(); ++j) ab(i, j) = a(i, j);
            ab(i, a.cols()) = 1.0;
        }
        a = std::move(ab);
    }

    double lambda = cfg.ridge;
    if (lambda < 0.0) {
        double trace = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i)
            trace += kernels::dot(a.row(i), a.row(i), a.cols());
        lambda = 1e-8 * trace / static_cast<double>(a.cols());
    }
    model.lambda = lambda;
    model.weights = solve_weights(a, y, lambda);
    return model;
}

std::vector<double> predict(const RbfModel& model, const Matrix& x_raw) {
    if (x_raw.cols() != model.n_inputs())
        throw DimensionMismatch("predict: input width != model width");
    const bool has_transform = !model.input_offset.empty();
    if (has_transform && (model.input_offset.size() != x_raw.cols() ||
                          model.input_scale.size() != x_raw.cols()))
        throw DimensionMismatch("predict: transform width != input width");

    const std::size_t n = x_raw.rows();
    const std::size_t f = x_raw.cols();
    const std::size_t k = model.k();
    const bool has_bias = model.weights.size() == k + 1;
    const double inv_two_sigma_sq = 1.0 / (2.0 * model.sigma * model.sigma);

    std::vector<double> row(f);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (has_transform) {
            for (std::size_t j = 0; j < f; ++j)
                row[j] = (x_raw(i, j) + model.input_offset[j]) * model.input_scale[j];
        } else {
            for (std::size_t j = 0; j < f; ++j) row[j] = x_raw(i, j);
        }
        double acc = has_bias ? model.weights[k] : 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const double d = kernels::squared_distance(row.data(), model.centroids.row(j), f);
            acc += model.weights[j] * std::exp(-d * inv_two_sigma_sq);
        }
        out[i] = acc;
    }
    return out;
}

}  // namespace tickcast
