#include "tickcast/features.hpp"

#include <cmath>

namespace tickcast {

void KernelParams::validate() const {
    if (!(gamma > 0.0)) throw InvalidConfig("kernel gamma must be > 0");
    if (degree < 1) throw InvalidConfig("kernel degree must be >= 1");
    if (!std::isfinite(c0)) throw InvalidConfig("kernel c0 must be finite");
}

std::array<double, 4> extract_simple(const Tick& tick) {
    return {tick.ask_px, tick.ask_vol, tick.bid_px, tick.bid_vol};
}

std::array<double, 16> extract_extended(const Tick& tick, const KernelParams& params) {
    const double pa = tick.ask_px;
    const double pb = tick.bid_px;
    const double va = tick.ask_vol;
    const double vb = tick.bid_vol;
    const double prod = pa * pb;
    const double diff = pa - pb;

    std::array<double, 16> u;
    u[0] = pa;
    u[1] = va;
    u[2] = pb;
    u[3] = vb;
    u[4] = pa + pb;
    u[5] = diff;
    u[6] = std::sin(prod);
    u[7] = prod;
    u[8] = va * vb;
    u[9] = pa * pa + pb * pb;
    u[10] = va * va + vb * vb;
    u[11] = prod;
    u[12] = std::pow(prod + params.c0, static_cast<double>(params.degree));
    u[13] = std::tanh(params.gamma * prod + params.c0);
    u[14] = std::exp(-params.gamma * std::abs(diff));
    u[15] = std::exp(-params.gamma * diff * diff);

    for (double v : u)
        if (!std::isfinite(v)) throw NumericOverflow("extended feature overflow");
    return u;
}

std::size_t feature_count(FeatureSet set, bool drop_raw_columns) {
    if (set == FeatureSet::Simple) return 4;
    return drop_raw_columns ? 12 : 16;
}

std::vector<std::string> feature_names(FeatureSet set, bool drop_raw_columns) {
    static const std::vector<std::string> raw = {"ask_px", "ask_vol", "bid_px", "bid_vol"};
    static const std::vector<std::string> derived = {
        "price_sum",     "price_diff",     "price_prod_sin", "price_prod",
        "vol_prod",      "price_sumsq",    "vol_sumsq",      "linear_kernel",
        "poly_kernel",   "sigmoid_kernel", "exp_kernel",     "rbf_kernel"};
    if (set == FeatureSet::Simple) return raw;
    std::vector<std::string> names;
    if (!drop_raw_columns) names = raw;
    names.insert(names.end(), derived.begin(), derived.end());
    return names;
}

void fill_feature_row(const Tick& tick, FeatureSet set, const KernelParams& params,
                      bool drop_raw_columns, double* out) {
    if (set == FeatureSet::Simple) {
        const auto row = extract_simple(tick);
        for (std::size_t j = 0; j < 4; ++j) out[j] = row[j];
        return;
    }
    const auto row = extract_extended(tick, params);
    const std::size_t offset = drop_raw_columns ? 4 : 0;
    for (std::size_t j = offset; j < 16; ++j) out[j - offset] = row[j];
}

FeatureMatrix build_matrix(const TickSeries& series, IndexRange range, FeatureSet set,
                           const KernelParams& params, std::size_t horizon,
                           bool drop_raw_columns) {
    if (horizon < 1) throw InvalidConfig("horizon must be >= 1");
    if (range.end > series.size()) throw RangeTooShort("range exceeds series");
    if (range.size() < horizon + 2) throw RangeTooShort("range shorter than horizon + 2");
    params.validate();

    const std::size_t n = range.size() - horizon;
    const std::size_t f = feature_count(set, drop_raw_columns);
    FeatureMatrix fm;
    fm.values = Matrix(n, f);
    fm.feature_names = feature_names(set, drop_raw_columns);
    fm.targets.resize(n);
    fm.horizon = horizon;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t t = range.begin + i;
        fill_feature_row(series.ticks[t], set, params, drop_raw_columns, fm.values.row(i));
        fm.targets[i] = mid_price(series.ticks[t + horizon]);
    }
    return fm;
}

}  // namespace tickcast
