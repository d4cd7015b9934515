#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "tickcast/cluster.hpp"
#include "tickcast/features.hpp"
#include "tickcast/forest.hpp"
#include "tickcast/gd.hpp"
#include "tickcast/lob.hpp"

namespace tickcast {

enum class Method { Mdi, Gd };

const char* method_name(Method method);

// What the per-window network is solved against. The intercept-free output
// layer cannot carry the raw price level (the shared spread never exceeds
// the centroid diameter, so activations vary across any spread-out window
// and no weight vector reproduces a constant at price scale); the engine
// therefore transforms targets per window and inverts the transform on
// prediction.
//   Delta: one-step mid-price changes, prediction adds the latest mid.
//   Level: window-mean-centered mids, prediction adds the window mean.
//   Raw:   untransformed mids (the literal composition, kept for comparison).
enum class RbfTargetMode { Delta, Level, Raw };

struct PipelineConfig {
    FeatureSet feature_set = FeatureSet::Simple;
    bool drop_raw_columns = false;
    KernelParams kernel;
    WindowPlan window;
    std::size_t n_folds = 5;
    std::size_t horizon = 1;
    ForestConfig forest;
    GdConfig gd;
    ClusterSearchConfig cluster;
    double ridge = -1.0;  // < 0 -> automatic trace-scaled floor
    RbfTargetMode target_mode = RbfTargetMode::Delta;
    bool rbf_bias = false;  // optional constant column in the output solve
    std::size_t selector_lookback = 10;
    std::uint64_t master_seed = 42;
    // Stride 1 predicts every event. Larger strides trade protocol fidelity
    // for speed and are reported as such.
    std::size_t stride = 1;
    bool parallel_pipelines = false;

    void validate() const;
};

struct EventRecord {
    std::size_t t = 0;  // predicted event index
    double prediction_mdi = 0.0;
    double prediction_gd = 0.0;
    double actual = 0.0;
    double sqerr_mdi = 0.0;
    double sqerr_gd = 0.0;
    std::size_t k_mdi = 0;
    std::size_t k_gd = 0;
    Method active = Method::Mdi;
    double train_mse_mdi = 0.0;
    double train_mse_gd = 0.0;
    bool warmup = false;  // fit-only first window, excluded from metrics
    bool fallback_mdi = false;
    bool fallback_gd = false;
};

struct MethodMetrics {
    std::size_t n_events = 0;
    double mse_train = 0.0;
    double mse_test = 0.0;
    double rmse_train = 0.0;
    double rmse_test = 0.0;
    double rrmse_test = 0.0;
};

struct FoldMetrics {
    std::size_t fold = 0;  // 1-based
    std::size_t n_events = 0;
    MethodMetrics mdi;
    MethodMetrics gd;
};

struct MetricsReport {
    std::vector<FoldMetrics> folds;
    FoldMetrics overall;  // fold == 0
    std::size_t regime_changes = 0;
    double mean_events_between_changes = 0.0;
    std::map<std::size_t, std::size_t> k_hist_mdi;
    std::map<std::size_t, std::size_t> k_hist_gd;
    std::size_t predicted_events = 0;
    std::size_t warmup_events = 0;
    std::size_t fallback_events = 0;
};

struct RunResult {
    MetricsReport report;
    std::vector<EventRecord> trace;
};

// Carries window-to-window state; GD keeps its last converged weights as the
// divergence fallback.
struct EngineState {
    std::vector<double> prev_gd_theta;
};

double mse(std::span<const double> y, std::span<const double> y_hat);
double rmse(std::span<const double> y, std::span<const double> y_hat);
// rmse divided by the mean mid-price over the evaluated span.
double rrmse(double rmse_value, std::span<const double> mid_prices);

// Lower summed squared test error over the last `lookback` records wins;
// ties keep the current regime; empty history defaults to MDI.
Method competitive_select(std::span<const EventRecord> history, std::size_t lookback);

// One online step: predict event `event_index` from the trailing window,
// running both competitive pipelines. A pipeline failure falls back to the
// latest observed mid-price and flags the record.
EventRecord step(const TickSeries& series, std::size_t event_index,
                 const PipelineConfig& cfg, EngineState& state);

// Full protocol: cumulative folds, per-event trailing-window refits, metrics
// per fold and method plus regime statistics.
RunResult run(const TickSeries& series, const PipelineConfig& cfg);

// Per-step wall times in milliseconds over up to n_steps events.
std::vector<double> bench_step_millis(const TickSeries& series, const PipelineConfig& cfg,
                                      std::size_t n_steps);

}  // namespace tickcast
