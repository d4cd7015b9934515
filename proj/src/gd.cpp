#include "tickcast/gd.hpp"

#include <cmath>

#include "tickcast/errors.hpp"
#include "tickcast/kernels.hpp"

namespace tickcast {

void GdConfig::validate() const {
    if (!(learning_rate > 0.0)) throw InvalidConfig("learning_rate must be > 0");
    if (iterations < 1) throw InvalidConfig("iterations must be >= 1");
    if (!(divergence_factor > 0.0)) throw InvalidConfig("divergence_factor must be > 0");
}

std::vector<double> gd_fit(const Matrix& x, std::span<const double> y, const GdConfig& cfg) {
    cfg.validate();
    const std::size_t n = x.rows();
    const std::size_t f = x.cols();
    if (n == 0 || f == 0) throw DimensionMismatch("gd_fit: empty matrix");
    if (n != y.size()) throw DimensionMismatch("gd_fit: rows != targets");
    if (!cfg.init_theta.empty() && cfg.init_theta.size() != f)
        throw DimensionMismatch("gd_fit: init_theta size != F");

    std::vector<double> theta =
        cfg.init_theta.empty() ? std::vector<double>(f, 0.0) : cfg.init_theta;
    const double norm0 = std::sqrt(kernels::dot(theta.data(), theta.data(), f));
    const double limit_sq =
        cfg.divergence_factor * (1.0 + norm0) * cfg.divergence_factor * (1.0 + norm0);

    std::vector<double> residual(n);
    std::vector<double> grad(f);
    const double grad_scale =
        cfg.normalize_gradient ? 2.0 / static_cast<double>(n) : 2.0;

    for (std::size_t r = 0; r < cfg.iterations; ++r) {
        for (std::size_t i = 0; i < n; ++i)
            residual[i] = kernels::dot(x.row(i), theta.data(), f) - y[i];

        std::fill(grad.begin(), grad.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i)
            kernels::axpy(residual[i], x.row(i), grad.data(), f);

        kernels::axpy(-cfg.learning_rate * grad_scale, grad.data(), theta.data(), f);

        const double norm_sq = kernels::dot(theta.data(), theta.data(), f);
        if (!(norm_sq <= limit_sq) || !std::isfinite(norm_sq))
            throw Diverged("gd_fit: weights exploded, learning rate too large");
    }
    return theta;
}

}  // namespace tickcast
