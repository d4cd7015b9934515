#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tickcast/matrix.hpp"

namespace tickcast {

struct GdConfig {
    double learning_rate = 0.01;
    std::size_t iterations = 100;
    // The raw update uses grad = 2 * X^T e, which couples the stable step
    // size to the window length; the normalized form divides by N.
    bool normalize_gradient = true;
    std::vector<double> init_theta;  // empty -> zero vector
    double divergence_factor = 1e6;

    void validate() const;
};

// Fixed-step gradient descent on the squared-error objective, returning the
// final weight vector as the feature-importance vector. Deterministic.
// Throws Diverged when ||theta|| exceeds divergence_factor * (1 + ||theta0||).
std::vector<double> gd_fit(const Matrix& x, std::span<const double> y, const GdConfig& cfg);

}  // namespace tickcast
