#include "tickcast/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>

#include "tickcast/errors.hpp"
#include "tickcast/kernels.hpp"
#include "tickcast/rbfnn.hpp"
#include "tickcast/rng.hpp"

namespace tickcast {

const char* method_name(Method method) { return method == Method::Mdi ? "MDI" : "GD"; }

void PipelineConfig::validate() const {
    kernel.validate();
    forest.validate();
    gd.validate();
    cluster.validate();
    if (window.window_len < 2) throw InvalidConfig("window_len must be >= 2");
    if (horizon < 1) throw InvalidConfig("horizon must be >= 1");
    if (horizon + 2 > window.window_len)
        throw InvalidConfig("window too short for the horizon");
    if (n_folds < 2) throw InvalidConfig("n_folds must be >= 2");
    if (stride < 1) throw InvalidConfig("stride must be >= 1");
}

double mse(std::span<const double> y, std::span<const double> y_hat) {
    if (y.size() != y_hat.size()) throw LengthMismatch("mse: length mismatch");
    if (y.empty()) throw LengthMismatch("mse: empty input");
    return kernels::squared_distance(y.data(), y_hat.data(), y.size()) /
           static_cast<double>(y.size());
}

double rmse(std::span<const double> y, std::span<const double> y_hat) {
    return std::sqrt(mse(y, y_hat));
}

double rrmse(double rmse_value, std::span<const double> mid_prices) {
    if (mid_prices.empty()) throw EmptySpan("rrmse: empty span");
    const double mean =
        kernels::sum(mid_prices.data(), mid_prices.size()) /
        static_cast<double>(mid_prices.size());
    if (!(mean > 0.0)) throw EmptySpan("rrmse: non-positive mean mid-price");
    return rmse_value / mean;
}

Method competitive_select(std::span<const EventRecord> history, std::size_t lookback) {
    if (history.empty()) return Method::Mdi;
    const Method current = history.back().active;
    const std::size_t n = std::min(lookback, history.size());
    double se_mdi = 0.0, se_gd = 0.0;
    for (std::size_t i = history.size() - n; i < history.size(); ++i) {
        se_mdi += history[i].sqerr_mdi;
        se_gd += history[i].sqerr_gd;
    }
    if (se_mdi < se_gd) return Method::Mdi;
    if (se_gd < se_mdi) return Method::Gd;
    return current;
}

namespace {

// Substream ids keyed by (event, component) so the two pipelines and any
// parallel execution draw from independent deterministic streams.
enum StreamTag : std::uint64_t {
    kStreamForest = 1,
    kStreamClusterMdi = 2,
    kStreamClusterGd = 3,
    kStreamRbfMdi = 4,
    kStreamRbfGd = 5,
};

std::uint64_t event_seed(std::uint64_t master, std::size_t event, StreamTag tag) {
    return Rng::derive(master, static_cast<std::uint64_t>(event) * 16u + tag);
}

struct ColumnStats {
    std::vector<double> mean;
    std::vector<double> scale;  // floored standard deviation
};

ColumnStats column_stats(const Matrix& xt /* F x N, feature-major */) {
    const std::size_t f = xt.rows();
    const std::size_t n = xt.cols();
    ColumnStats st;
    st.mean.resize(f);
    st.scale.resize(f);
    for (std::size_t j = 0; j < f; ++j) {
        st.mean[j] = kernels::sum(xt.row(j), n) / static_cast<double>(n);
        const double var =
            kernels::centered_sumsq(xt.row(j), st.mean[j], n) / static_cast<double>(n);
        double sd = std::sqrt(var);
        if (sd < 1e-12 * (1.0 + std::abs(st.mean[j]))) sd = 1.0;  // constant column
        st.scale[j] = sd;
    }
    return st;
}

struct PipelineOutcome {
    double prediction = 0.0;
    std::size_t k = 2;
    double train_mse = 0.0;
    bool fallback = false;
};

struct StepInputs {
    FeatureMatrix fm;        // raw window features + targets
    Matrix x_std;            // column-standardized values
    ColumnStats stats;
    Matrix predict_row_raw;  // 1 x F features of the latest tick
    double last_mid = 0.0;   // persistence fallback value, also the Delta base
    std::vector<double> row_mid;  // mid at each feature row's own tick
};

StepInputs make_step_inputs(const TickSeries& series, std::size_t event_index,
                            const PipelineConfig& cfg) {
    const std::size_t w = cfg.window.window_len;
    const std::size_t h = cfg.horizon;
    const std::size_t begin = event_index + 1 - h - w;
    StepInputs in;
    in.fm = build_matrix(series, {begin, begin + w}, cfg.feature_set, cfg.kernel, h,
                         cfg.drop_raw_columns);

    Matrix xt = in.fm.values.transposed();
    in.stats = column_stats(xt);
    for (std::size_t j = 0; j < xt.rows(); ++j)
        kernels::shift_scale(xt.row(j), -in.stats.mean[j], 1.0 / in.stats.scale[j],
                             xt.row(j), xt.cols());
    in.x_std = xt.transposed();

    const Tick& latest = series.ticks[event_index - h];
    in.predict_row_raw = Matrix(1, in.fm.n_features());
    fill_feature_row(latest, cfg.feature_set, cfg.kernel, cfg.drop_raw_columns,
                     in.predict_row_raw.row(0));
    in.last_mid = mid_price(latest);
    in.row_mid.resize(in.fm.n_rows());
    for (std::size_t i = 0; i < in.fm.n_rows(); ++i)
        in.row_mid[i] = mid_price(series.ticks[begin + i]);
    return in;
}

PipelineOutcome run_pipeline(Method method, const StepInputs& in, const PipelineConfig& cfg,
                             EngineState& state, std::size_t event_index) {
    PipelineOutcome out;
    const std::size_t f = in.fm.n_features();

    ImportanceVector importance;
    importance.source = method == Method::Mdi ? ImportanceSource::Mdi : ImportanceSource::Gd;
    if (method == Method::Mdi) {
        // Trees are scale-equivariant, so the forest sees raw values.
        ForestConfig fc = cfg.forest;
        fc.seed = event_seed(cfg.master_seed, event_index, kStreamForest);
        const Forest forest = fit_forest(in.fm.values, in.fm.targets, fc);
        importance.weights = mdi_importance(forest, fc.weighted_normalized_mdi);
    } else {
        try {
            importance.weights = gd_fit(in.x_std, in.fm.targets, cfg.gd);
        } catch (const Diverged&) {
            GdConfig retry = cfg.gd;
            retry.learning_rate = cfg.gd.learning_rate / 10.0;
            try {
                importance.weights = gd_fit(in.x_std, in.fm.targets, retry);
            } catch (const Diverged&) {
                importance.weights = state.prev_gd_theta.empty()
                                         ? std::vector<double>(f, 0.0)
                                         : state.prev_gd_theta;
            }
        }
        state.prev_gd_theta = importance.weights;
    }

    const WeightedMatrix fi = apply_importance(in.x_std, importance);
    const DistanceMatrix dist = distance_matrix(correlation_matrix(fi));

    ClusterSearchConfig cc = cfg.cluster;
    cc.seed = event_seed(cfg.master_seed, event_index,
                         method == Method::Mdi ? kStreamClusterMdi : kStreamClusterGd);
    const SelectKResult sel = select_k(dist, cc);
    out.k = sel.k_star;

    RbfFitConfig rc;
    rc.n_init = cfg.cluster.n_init;
    rc.kmeans_max_iter = cfg.cluster.kmeans_max_iter;
    rc.tol = cfg.cluster.tol;
    rc.ridge = cfg.ridge;
    rc.add_bias = cfg.rbf_bias;
    rc.seed = event_seed(cfg.master_seed, event_index,
                         method == Method::Mdi ? kStreamRbfMdi : kStreamRbfGd);

    // The model stores the composed input transform so prediction rows can be
    // fed raw: x~ = (x - mean) / sd * importance.
    std::vector<double> offset(f), scale(f);
    for (std::size_t j = 0; j < f; ++j) {
        offset[j] = -in.stats.mean[j];
        scale[j] = importance.weights[j] / in.stats.scale[j];
    }

    // Per-window target transform (see RbfTargetMode); base_i is subtracted
    // before the solve and restored on prediction.
    const std::size_t n = in.fm.n_rows();
    std::vector<double> base(n, 0.0);
    double predict_base = 0.0;
    switch (cfg.target_mode) {
        case RbfTargetMode::Delta:
            base = in.row_mid;
            predict_base = in.last_mid;
            break;
        case RbfTargetMode::Level: {
            const double mean =
                kernels::sum(in.fm.targets.data(), n) / static_cast<double>(n);
            base.assign(n, mean);
            predict_base = mean;
            break;
        }
        case RbfTargetMode::Raw:
            break;
    }
    std::vector<double> solved_targets(n);
    for (std::size_t i = 0; i < n; ++i) solved_targets[i] = in.fm.targets[i] - base[i];

    const RbfModel model = fit_rbfnn(fi.values, solved_targets, sel.k_star, rc,
                                     std::move(offset), std::move(scale));

    // In-sample one-step-ahead residuals of this fit.
    const Matrix a = activations(fi.values, model.centroids, model.sigma);
    const std::size_t k = model.k();
    const double bias_term = model.weights.size() == k + 1 ? model.weights[k] : 0.0;
    std::vector<double> fitted(n);
    for (std::size_t i = 0; i < n; ++i)
        fitted[i] = base[i] + bias_term +
                    kernels::dot(a.row(i), model.weights.data(), k);
    out.train_mse = mse(in.fm.targets, fitted);

    out.prediction = predict_base + predict(model, in.predict_row_raw)[0];
    return out;
}

PipelineOutcome safe_pipeline(Method method, const StepInputs& in, const PipelineConfig& cfg,
                              EngineState& state, std::size_t event_index) {
    try {
        return run_pipeline(method, in, cfg, state, event_index);
    } catch (const Error&) {
        PipelineOutcome out;
        out.prediction = in.last_mid;  // persistence fallback
        out.fallback = true;
        return out;
    }
}

MethodMetrics aggregate_method(std::span<const EventRecord> records, Method method) {
    MethodMetrics m;
    std::vector<double> actual, pred, train;
    actual.reserve(records.size());
    for (const EventRecord& r : records) {
        if (r.warmup) continue;
        actual.push_back(r.actual);
        pred.push_back(method == Method::Mdi ? r.prediction_mdi : r.prediction_gd);
        train.push_back(method == Method::Mdi ? r.train_mse_mdi : r.train_mse_gd);
    }
    m.n_events = actual.size();
    if (actual.empty()) {
        m.mse_train = m.mse_test = m.rmse_train = m.rmse_test = m.rrmse_test =
            std::numeric_limits<double>::quiet_NaN();
        return m;
    }
    m.mse_test = mse(actual, pred);
    m.mse_train = kernels::sum(train.data(), train.size()) /
                  static_cast<double>(train.size());
    m.rmse_test = std::sqrt(m.mse_test);
    m.rmse_train = std::sqrt(m.mse_train);
    m.rrmse_test = rrmse(m.rmse_test, actual);
    return m;
}

}  // namespace

EventRecord step(const TickSeries& series, std::size_t event_index,
                 const PipelineConfig& cfg, EngineState& state) {
    const std::size_t w = cfg.window.window_len;
    const std::size_t h = cfg.horizon;
    if (event_index + 1 < w + h || event_index >= series.size())
        throw SeriesTooShort("step: no full window before the event");

    StepInputs in;
    try {
        in = make_step_inputs(series, event_index, cfg);
    } catch (const Error&) {
        // Feature extraction failed for the whole window; both pipelines
        // fall back to persistence.
        EventRecord rec;
        rec.t = event_index;
        const double last_mid = mid_price(series.ticks[event_index - h]);
        rec.prediction_mdi = rec.prediction_gd = last_mid;
        rec.actual = mid_price(series.ticks[event_index]);
        rec.sqerr_mdi = rec.sqerr_gd = (last_mid - rec.actual) * (last_mid - rec.actual);
        rec.k_mdi = rec.k_gd = 2;
        rec.fallback_mdi = rec.fallback_gd = true;
        return rec;
    }

    PipelineOutcome mdi_out, gd_out;
    if (cfg.parallel_pipelines) {
        // Only the GD pipeline touches EngineState, so the concurrent MDI
        // task shares nothing mutable with it.
        auto mdi_fut = std::async(std::launch::async, [&] {
            return safe_pipeline(Method::Mdi, in, cfg, state, event_index);
        });
        gd_out = safe_pipeline(Method::Gd, in, cfg, state, event_index);
        mdi_out = mdi_fut.get();
    } else {
        mdi_out = safe_pipeline(Method::Mdi, in, cfg, state, event_index);
        gd_out = safe_pipeline(Method::Gd, in, cfg, state, event_index);
    }

    EventRecord rec;
    rec.t = event_index;
    rec.prediction_mdi = mdi_out.prediction;
    rec.prediction_gd = gd_out.prediction;
    rec.actual = mid_price(series.ticks[event_index]);
    rec.sqerr_mdi = (rec.prediction_mdi - rec.actual) * (rec.prediction_mdi - rec.actual);
    rec.sqerr_gd = (rec.prediction_gd - rec.actual) * (rec.prediction_gd - rec.actual);
    rec.k_mdi = mdi_out.k;
    rec.k_gd = gd_out.k;
    rec.train_mse_mdi = mdi_out.train_mse;
    rec.train_mse_gd = gd_out.train_mse;
    rec.fallback_mdi = mdi_out.fallback;
    rec.fallback_gd = gd_out.fallback;
    return rec;
}

RunResult run(const TickSeries& series, const PipelineConfig& cfg) {
    cfg.validate();
    const std::size_t len = series.size();
    const std::size_t w = cfg.window.window_len;
    const std::size_t h = cfg.horizon;
    if (len < w + h + 1) throw SeriesTooShort("run: need at least window + horizon + 1 events");
    const FoldPlan folds = fold_plan(len, cfg.n_folds);

    RunResult result;
    EngineState state;
    const std::size_t first_event = w + h - 1;
    for (std::size_t e = first_event; e < len; e += cfg.stride) {
        EventRecord rec = step(series, e, cfg, state);
        rec.warmup = (e == first_event);  // fit-only warm-up window
        rec.active = competitive_select(result.trace, cfg.selector_lookback);
        result.trace.push_back(rec);
    }

    MetricsReport& rep = result.report;
    rep.predicted_events = result.trace.size();

    std::vector<std::vector<EventRecord>> by_fold(cfg.n_folds);
    for (const EventRecord& r : result.trace) {
        if (r.warmup) ++rep.warmup_events;
        if (r.fallback_mdi || r.fallback_gd) ++rep.fallback_events;
        ++rep.k_hist_mdi[r.k_mdi];
        ++rep.k_hist_gd[r.k_gd];
        by_fold[folds.fold_of(r.t)].push_back(r);
    }

    rep.folds.resize(cfg.n_folds);
    for (std::size_t k = 0; k < cfg.n_folds; ++k) {
        FoldMetrics& fm = rep.folds[k];
        fm.fold = k + 1;
        fm.mdi = aggregate_method(by_fold[k], Method::Mdi);
        fm.gd = aggregate_method(by_fold[k], Method::Gd);
        fm.n_events = fm.mdi.n_events;
    }
    rep.overall.fold = 0;
    rep.overall.mdi = aggregate_method(result.trace, Method::Mdi);
    rep.overall.gd = aggregate_method(result.trace, Method::Gd);
    rep.overall.n_events = rep.overall.mdi.n_events;

    for (std::size_t i = 1; i < result.trace.size(); ++i)
        if (result.trace[i].active != result.trace[i - 1].active) ++rep.regime_changes;
    rep.mean_events_between_changes =
        rep.regime_changes > 0
            ? static_cast<double>(result.trace.size()) /
                  static_cast<double>(rep.regime_changes)
            : static_cast<double>(result.trace.size());
    return result;
}

std::vector<double> bench_step_millis(const TickSeries& series, const PipelineConfig& cfg,
                                      std::size_t n_steps) {
    cfg.validate();
    const std::size_t first_event = cfg.window.window_len + cfg.horizon - 1;
    if (series.size() <= first_event) throw SeriesTooShort("bench: series too short");

    EngineState state;
    std::vector<double> millis;
    millis.reserve(n_steps);
    for (std::size_t e = first_event; e < series.size() && millis.size() < n_steps; ++e) {
        const auto t0 = std::chrono::steady_clock::now();
        (void)step(series, e, cfg, state);
        const auto t1 = std::chrono::steady_clock::now();
        millis.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return millis;
}

}  // namespace tickcast
