#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "tickcast/errors.hpp"
#include "tickcast/gd.hpp"
#include "tickcast/kernels.hpp"
#include "tickcast/oracles.hpp"
#include "tickcast/rng.hpp"

using namespace tickcast;

namespace {

double distance(const std::vector<double>& a, const std::vector<double>& b) {
    return std::sqrt(kernels::squared_distance(a.data(), b.data(), a.size()));
}

// Column-standardized random matrix plus targets driven by its first column.
struct RandomWindow {
    Matrix x;
    std::vector<double> y;
};

RandomWindow standardized_window(Rng& rng, std::size_t n, std::size_t f) {
    RandomWindow out;
    out.x = Matrix(n, f);
    for (auto& v : out.x.data()) v = rng.normal();
    for (std::size_t j = 0; j < f; ++j) {
        double mean = 0.0, ssq = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += out.x(i, j);
        mean /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            out.x(i, j) -= mean;
            ssq += out.x(i, j) * out.x(i, j);
        }
        const double sd = std::sqrt(ssq / static_cast<double>(n));
        for (std::size_t i = 0; i < n; ++i) out.x(i, j) /= sd;
    }
    out.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.y[i] = rng.normal();
    return out;
}

}  // namespace

TEST_CASE("zero targets keep a zero weight vector") {
    Matrix x(3, 2);
    x(0, 0) = 1;
    x(1, 1) = 2;
    x(2, 0) = -1;
    const std::vector<double> y(3, 0.0);
    GdConfig cfg;
    cfg.iterations = 25;
    const auto theta = gd_fit(x, y, cfg);
    CHECK(theta == std::vector<double>{0.0, 0.0});
}

TEST_CASE("recovers the least-squares slope on a 1-feature system") {
    Matrix x(3, 1);
    x(0, 0) = 1;
    x(1, 0) = 2;
    x(2, 0) = 3;
    const std::vector<double> y{2, 4, 6};

    // Closed-form oracle: theta* = (X^T X)^-1 X^T y.
    const auto star = oracles::least_squares_longdouble(x, y);
    CHECK(star[0] == doctest::Approx(2.0).epsilon(1e-12));

    GdConfig cfg;
    cfg.learning_rate = 0.05;
    cfg.iterations = 2000;
    const auto theta = gd_fit(x, y, cfg);
    CHECK(std::abs(theta[0] - star[0]) <= 1e-3);
}

TEST_CASE("importance concentrates on the informative feature") {
    Rng rng(3);
    RandomWindow w = standardized_window(rng, 80, 2);
    for (std::size_t i = 0; i < 80; ++i) w.y[i] = 1.5 * w.x(i, 0) + 0.05 * rng.normal();

    GdConfig cfg;
    cfg.iterations = 400;
    const auto theta = gd_fit(w.x, w.y, cfg);
    CHECK(std::abs(theta[0]) > std::abs(theta[1]));
}

TEST_CASE("converges to the least-squares solution on standardized windows") {
    Rng rng(40);
    const RandomWindow w = standardized_window(rng, 50, 3);
    const auto star = oracles::least_squares_longdouble(w.x, w.y);

    GdConfig cfg;  // alpha 0.01, normalized gradient
    cfg.iterations = 5000;
    const auto theta = gd_fit(w.x, w.y, cfg);
    CHECK(distance(theta, star) <= 1e-6);

    // Distance to the optimum shrinks monotonically along the schedule.
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t r : {50u, 100u, 200u, 400u, 800u, 1600u, 3200u, 5000u}) {
        GdConfig at;
        at.iterations = r;
        const double d = distance(gd_fit(w.x, w.y, at), star);
        CHECK(d <= prev * (1.0 + 1e-12));
        prev = d;
    }
}

TEST_CASE("verbatim unnormalized update matches the hand-computed step") {
    Matrix x(2, 1);
    x(0, 0) = 1.0;
    x(1, 0) = 2.0;
    const std::vector<double> y{1.0, 1.0};

    GdConfig cfg;
    cfg.normalize_gradient = false;
    cfg.iterations = 1;
    cfg.learning_rate = 0.01;
    cfg.init_theta = {0.5};
    const auto theta = gd_fit(x, y, cfg);

    // predictions (0.5, 1.0), errors (-0.5, 0.0), gradient 2*(1*-0.5 + 2*0).
    const double expected = 0.5 - 0.01 * (2.0 * (1.0 * (0.5 * 1.0 - 1.0) + 2.0 * (0.5 * 2.0 - 1.0)));
    CHECK(std::abs(theta[0] - expected) <= 1e-15);
}

TEST_CASE("deterministic") {
    Rng rng(8);
    const RandomWindow w = standardized_window(rng, 30, 4);
    GdConfig cfg;
    const auto a = gd_fit(w.x, w.y, cfg);
    const auto b = gd_fit(w.x, w.y, cfg);
    CHECK(a == b);
}

TEST_CASE("unnormalized update diverges at raw price scales") {
    Matrix x(4, 1);
    x(0, 0) = 100.0;
    x(1, 0) = 101.0;
    x(2, 0) = 102.0;
    x(3, 0) = 103.0;
    const std::vector<double> y{1.0, 2.0, 3.0, 4.0};

    GdConfig cfg;
    cfg.normalize_gradient = false;  // step size couples to sum x^2 ~ 4e4
    cfg.iterations = 50;
    CHECK_THROWS_AS(gd_fit(x, y, cfg), Diverged);
}

TEST_CASE("config invariants") {
    Matrix x(2, 1);
    const std::vector<double> y{0.0, 0.0};
    GdConfig bad;
    bad.learning_rate = 0.0;
    CHECK_THROWS_AS(gd_fit(x, y, bad), InvalidConfig);
    bad.learning_rate = 0.1;
    bad.iterations = 0;
    CHECK_THROWS_AS(gd_fit(x, y, bad), InvalidConfig);
}
