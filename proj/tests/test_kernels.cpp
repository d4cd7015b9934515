#include <doctest.h>

#include <cmath>
#include <vector>

#include "tickcast/kernels.hpp"
#include "tickcast/rng.hpp"

using namespace tickcast;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n, double scale = 1.0) {
    std::vector<double> v(n);
    for (double& x : v) x = scale * rng.normal();
    return v;
}

struct LaneGuard {
    kernels::Lane saved = kernels::active_lane();
    ~LaneGuard() { kernels::select_lane(saved); }
};

}  // namespace

TEST_CASE("lane selection") {
    LaneGuard guard;
    CHECK(kernels::lane_available(kernels::Lane::Scalar));
    kernels::select_lane(kernels::Lane::Scalar);
    CHECK(kernels::active_lane() == kernels::Lane::Scalar);
    kernels::select_best_lane();
    CHECK(kernels::lane_available(kernels::active_lane()));
}

TEST_CASE("simd lanes match scalar reference") {
    LaneGuard guard;
    kernels::Lane simd_lane = kernels::Lane::Scalar;
    for (kernels::Lane lane : {kernels::Lane::Avx2, kernels::Lane::Neon})
        if (kernels::lane_available(lane)) simd_lane = lane;
    if (simd_lane == kernels::Lane::Scalar) return;  // scalar-only host

    Rng rng(991);
    // Sizes straddling the vector width and remainder handling.
    for (std::size_t n : {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 32, 100, 257}) {
        const auto a = random_vec(rng, n, 3.0);
        const auto b = random_vec(rng, n, 2.0);
        const double ma = 0.25, mb = -1.5;

        kernels::select_lane(kernels::Lane::Scalar);
        const double dot_ref = kernels::dot(a.data(), b.data(), n);
        const double sum_ref = kernels::sum(a.data(), n);
        const double sqd_ref = kernels::squared_distance(a.data(), b.data(), n);
        const double css_ref = kernels::centered_sumsq(a.data(), ma, n);
        const double cdot_ref = kernels::centered_dot(a.data(), ma, b.data(), mb, n);
        std::vector<double> axpy_ref = b;
        kernels::axpy(0.37, a.data(), axpy_ref.data(), n);
        std::vector<double> had_ref(n), shs_ref(n);
        kernels::hadamard(a.data(), b.data(), had_ref.data(), n);
        kernels::shift_scale(a.data(), -0.5, 1.75, shs_ref.data(), n);

        kernels::select_lane(simd_lane);
        const double tol = 1e-12 * (1.0 + static_cast<double>(n));
        CHECK(std::abs(kernels::dot(a.data(), b.data(), n) - dot_ref) <=
              tol * (1.0 + std::abs(dot_ref)));
        CHECK(std::abs(kernels::sum(a.data(), n) - sum_ref) <=
              tol * (1.0 + std::abs(sum_ref)));
        CHECK(std::abs(kernels::squared_distance(a.data(), b.data(), n) - sqd_ref) <=
              tol * (1.0 + sqd_ref));
        CHECK(std::abs(kernels::centered_sumsq(a.data(), ma, n) - css_ref) <=
              tol * (1.0 + css_ref));
        CHECK(std::abs(kernels::centered_dot(a.data(), ma, b.data(), mb, n) - cdot_ref) <=
              tol * (1.0 + std::abs(cdot_ref)));

        // Elementwise ops are bit-identical across lanes.
        std::vector<double> axpy_simd = b;
        kernels::axpy(0.37, a.data(), axpy_simd.data(), n);
        std::vector<double> had_simd(n), shs_simd(n);
        kernels::hadamard(a.data(), b.data(), had_simd.data(), n);
        kernels::shift_scale(a.data(), -0.5, 1.75, shs_simd.data(), n);
        CHECK(axpy_simd == axpy_ref);
        CHECK(had_simd == had_ref);
        CHECK(shs_simd == shs_ref);
    }
}

TEST_CASE("kernel reductions agree with plain formulas") {
    Rng rng(17);
    const std::size_t n = 53;
    const auto a = random_vec(rng, n);
    const auto b = random_vec(rng, n);

    long double dot = 0.0L, sum = 0.0L, sqd = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        dot += a[i] * b[i];
        sum += a[i];
        const long double d = a[i] - b[i];
        sqd += d * d;
    }
    CHECK(kernels::dot(a.data(), b.data(), n) ==
          doctest::Approx(static_cast<double>(dot)).epsilon(1e-13));
    CHECK(kernels::sum(a.data(), n) ==
          doctest::Approx(static_cast<double>(sum)).epsilon(1e-13));
    CHECK(kernels::squared_distance(a.data(), b.data(), n) ==
          doctest::Approx(static_cast<double>(sqd)).epsilon(1e-13));
}
