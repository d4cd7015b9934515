#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "tickcast/lob.hpp"
#include "tickcast/matrix.hpp"

namespace tickcast {

enum class FeatureSet { Simple, Extended };

// Kernel-feature parameters (polynomial / sigmoid / exponential / RBF rows).
struct KernelParams {
    double gamma = 1.0;
    double c0 = 1.0;
    int degree = 2;

    void validate() const;
};

// N x F window of features with targets aligned at horizon h:
// row i pairs tick t_i with mid-price at t_{i+h}.
struct FeatureMatrix {
    Matrix values;
    std::vector<std::string> feature_names;
    std::vector<double> targets;
    std::size_t horizon = 1;

    std::size_t n_rows() const { return values.rows(); }
    std::size_t n_features() const { return values.cols(); }
};

// [ask_px, ask_vol, bid_px, bid_vol]
std::array<double, 4> extract_simple(const Tick& tick);

// Raw quadruple followed by the twelve derived values. Throws NumericOverflow
// if any entry is non-finite.
//   [0..3]  ask_px, ask_vol, bid_px, bid_vol
//   [4]     ask_px + bid_px
//   [5]     ask_px - bid_px
//   [6]     sin(ask_px * bid_px)        -- numerically sensitive at price
//                                          magnitudes ~1e4; plain platform sin
//   [7]     ask_px * bid_px
//   [8]     ask_vol * bid_vol
//   [9]     ask_px^2 + bid_px^2
//   [10]    ask_vol^2 + bid_vol^2
//   [11]    ask_px * bid_px             -- linear kernel, duplicates [7] on purpose
//   [12]    (ask_px * bid_px + c0)^d
//   [13]    tanh(gamma * ask_px * bid_px + c0)
//   [14]    exp(-gamma * |ask_px - bid_px|)
//   [15]    exp(-gamma * (ask_px - bid_px)^2)
std::array<double, 16> extract_extended(const Tick& tick, const KernelParams& params);

std::size_t feature_count(FeatureSet set, bool drop_raw_columns = false);
std::vector<std::string> feature_names(FeatureSet set, bool drop_raw_columns = false);

// One feature row for any set; out must hold feature_count() doubles.
void fill_feature_row(const Tick& tick, FeatureSet set, const KernelParams& params,
                      bool drop_raw_columns, double* out);

// Feature matrix over series[range) with targets at +horizon.
// Throws RangeTooShort when range.size() < horizon + 2.
FeatureMatrix build_matrix(const TickSeries& series, IndexRange range, FeatureSet set,
                           const KernelParams& params, std::size_t horizon,
                           bool drop_raw_columns = false);

}  // namespace tickcast
