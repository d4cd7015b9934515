#include <doctest.h>

#include <cmath>

#include "tickcast/errors.hpp"
#include "tickcast/features.hpp"

using namespace tickcast;

namespace {

Tick make_tick(double ask, double bid, double av = 100, double bv = 100) {
    return {0, ask, bid, av, bv};
}

TickSeries constant_series(std::size_t n, double ask = 100.02, double bid = 100.00) {
    TickSeries s;
    s.symbol = "T";
    for (std::size_t i = 0; i < n; ++i)
        s.ticks.push_back({static_cast<std::int64_t>(i), ask, bid, 100.0, 200.0});
    return s;
}

}  // namespace

TEST_CASE("extract_simple is the raw quadruple") {
    const auto row = extract_simple(make_tick(100.02, 100.00, 300, 500));
    CHECK(row[0] == 100.02);
    CHECK(row[1] == 300.0);
    CHECK(row[2] == 100.00);
    CHECK(row[3] == 500.0);

    const auto zeros = extract_simple(make_tick(10.0, 9.0, 0, 0));
    CHECK(zeros[1] == 0.0);
    CHECK(zeros[3] == 0.0);

    const auto equal = extract_simple(make_tick(42.0, 42.0, 7, 9));
    CHECK(equal[0] == equal[2]);
}

TEST_CASE("extended feature formulas") {
    const KernelParams params;  // gamma 1, c0 1, degree 2

    SUBCASE("price difference") {
        const auto u = extract_extended(make_tick(100.02, 100.00), params);
        CHECK(u[5] == doctest::Approx(0.02).epsilon(1e-9));
    }
    SUBCASE("rbf kernel at zero distance") {
        const auto u = extract_extended(make_tick(75.0, 75.0), params);
        CHECK(u[15] == 1.0);
        CHECK(u[14] == 1.0);
    }
    SUBCASE("polynomial kernel") {
        const auto u = extract_extended(make_tick(2.0, 3.0), params);
        CHECK(u[12] == doctest::Approx(49.0).epsilon(1e-14));  // (2*3 + 1)^2
    }
    SUBCASE("remaining closed forms") {
        const Tick tick = make_tick(3.0, 2.0, 4.0, 5.0);
        const auto u = extract_extended(tick, params);
        CHECK(u[4] == 5.0);                                    // sum
        CHECK(u[6] == doctest::Approx(std::sin(6.0)));         // sin of product
        CHECK(u[7] == 6.0);                                    // product
        CHECK(u[8] == 20.0);                                   // volume product
        CHECK(u[9] == 13.0);                                   // squared price sum
        CHECK(u[10] == 41.0);                                  // squared volume sum
        CHECK(u[13] == doctest::Approx(std::tanh(7.0)));       // sigmoid kernel
        CHECK(u[14] == doctest::Approx(std::exp(-1.0)));       // exponential kernel
        CHECK(u[15] == doctest::Approx(std::exp(-1.0)));       // rbf kernel
    }
}

TEST_CASE("linear kernel column duplicates the synthesized product exactly") {
    const KernelParams params;
    for (double ask : {1.5, 100.02, 4321.0})
        for (double bid : {1.49, 99.98, 4320.5}) {
            const auto u = extract_extended(make_tick(ask, bid), params);
            CHECK(u[7] == u[11]);
        }
}

TEST_CASE("kernel features stay in (0,1] with equality only at ask == bid") {
    const KernelParams params{0.5, 1.0, 2};
    for (double diff : {-1.0, -0.01, 0.0, 0.005, 2.0}) {
        const auto u = extract_extended(make_tick(100.0 + diff, 100.0), params);
        CHECK(u[14] > 0.0);
        CHECK(u[14] <= 1.0);
        CHECK(u[15] > 0.0);
        CHECK(u[15] <= 1.0);
        if (diff == 0.0) {
            CHECK(u[14] == 1.0);
            CHECK(u[15] == 1.0);
        } else {
            CHECK(u[14] < 1.0);
            CHECK(u[15] < 1.0);
        }
    }
}

TEST_CASE("extended prefix equals simple; re-evaluation is bit-identical") {
    const KernelParams params{2.0, -0.5, 3};
    const Tick tick = make_tick(100.07, 100.01, 321, 654);
    const auto ext = extract_extended(tick, params);
    const auto simple = extract_simple(tick);
    for (std::size_t i = 0; i < 4; ++i) CHECK(ext[i] == simple[i]);
    CHECK(extract_extended(tick, params) == ext);
}

TEST_CASE("extended features overflow to NumericOverflow") {
    KernelParams params;
    params.degree = 8;
    CHECK_THROWS_AS(extract_extended(make_tick(1e80, 1e80), params), NumericOverflow);
}

TEST_CASE("build_matrix shapes and targets") {
    const KernelParams params;
    const TickSeries series = constant_series(100);

    const FeatureMatrix simple = build_matrix(series, {0, 100}, FeatureSet::Simple, params, 1);
    CHECK(simple.n_rows() == 99);
    CHECK(simple.n_features() == 4);
    CHECK(simple.targets.size() == 99);
    CHECK(simple.targets[0] == doctest::Approx(100.01));
    CHECK(simple.feature_names.size() == 4);

    const FeatureMatrix ext = build_matrix(series, {0, 100}, FeatureSet::Extended, params, 1);
    CHECK(ext.n_rows() == 99);
    CHECK(ext.n_features() == 16);

    const FeatureMatrix dropped =
        build_matrix(series, {0, 100}, FeatureSet::Extended, params, 1, true);
    CHECK(dropped.n_features() == 12);
    CHECK(dropped.feature_names[0] == "price_sum");

    CHECK_THROWS_AS(build_matrix(series, {0, 2}, FeatureSet::Simple, params, 2),
                    RangeTooShort);
}

TEST_CASE("build_matrix aligns targets at the horizon") {
    const KernelParams params;
    TickSeries series;
    for (std::size_t i = 0; i < 12; ++i)
        series.ticks.push_back({static_cast<std::int64_t>(i), 10.0 + i, 8.0 + i, 1, 1});
    const FeatureMatrix fm = build_matrix(series, {2, 10}, FeatureSet::Simple, params, 2);
    CHECK(fm.n_rows() == 6);
    for (std::size_t i = 0; i < fm.n_rows(); ++i) {
        CHECK(fm.values(i, 0) == 10.0 + (2 + i));                   // ask of tick 2+i
        CHECK(fm.targets[i] == mid_price(series.ticks[2 + i + 2]));  // mid at +h
    }
}
