#include "tickcast/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string_view>

#include <json.hpp>

#include "tickcast/kernels.hpp"

namespace tickcast {

namespace {

constexpr const char* kTickHeader = "ts_ns,bid_px,ask_px,bid_sz,ask_sz";
constexpr const char* kTraceHeader =
    "event,prediction_mdi,prediction_gd,actual,sqerr_mdi,sqerr_gd,k_mdi,k_gd,"
    "active_method,train_mse_mdi,train_mse_gd,warmup,fallback_mdi,fallback_gd";

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = line.find(',', pos);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(pos));
            break;
        }
        out.push_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return out;
}

double parse_double(std::string_view text, std::size_t line_no, const char* what) {
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw ParseError(line_no, std::string("bad ") + what);
    return v;
}

std::int64_t parse_i64(std::string_view text, std::size_t line_no, const char* what) {
    std::int64_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw ParseError(line_no, std::string("bad ") + what);
    return v;
}

// Round-trip exact formatting for data files.
std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Six significant digits for report metrics.
std::string fmt_metric(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

TickSeries load_ticks(const std::string& path, std::string symbol) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw EmptyFile("empty file: " + path);
    strip_cr(line);
    if (line != kTickHeader)
        throw ParseError(1, "expected header '" + std::string(kTickHeader) + "'");

    TickSeries series;
    series.symbol = symbol.empty() ? std::filesystem::path(path).stem().string()
                                   : std::move(symbol);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != 5) throw ParseError(line_no, "expected 5 columns");

        Tick tick;
        tick.ts_ns = parse_i64(fields[0], line_no, "ts_ns");
        tick.bid_px = parse_double(fields[1], line_no, "bid_px");
        tick.ask_px = parse_double(fields[2], line_no, "ask_px");
        tick.bid_vol = parse_double(fields[3], line_no, "bid_sz");
        tick.ask_vol = parse_double(fields[4], line_no, "ask_sz");

        if (const char* reason = tick_validity_error(tick))
            throw ParseError(line_no, reason);
        if (!series.ticks.empty() && tick.ts_ns < series.ticks.back().ts_ns)
            throw UnsortedTimestamps("timestamps decrease at line " + std::to_string(line_no));
        if (tick.bid_px > tick.ask_px) ++series.crossed_count;
        series.ticks.push_back(tick);
    }
    if (series.ticks.empty()) throw EmptyFile("no data rows: " + path);
    return series;
}

void write_ticks(const TickSeries& series, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << kTickHeader << '\n';
    for (const Tick& tick : series.ticks)
        out << tick.ts_ns << ',' << fmt_full(tick.bid_px) << ',' << fmt_full(tick.ask_px)
            << ',' << fmt_full(tick.bid_vol) << ',' << fmt_full(tick.ask_vol) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

namespace {

void write_report_csv(const MetricsReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "fold,method,mse_train,mse_test,rmse_train,rmse_test,rrmse_test\n";
    for (const FoldMetrics& fm : report.folds) {
        for (const auto* pair : {&fm.mdi, &fm.gd}) {
            out << fm.fold << ','
                << (pair == &fm.mdi ? "MDI" : "GD") << ','
                << fmt_metric(pair->mse_train) << ',' << fmt_metric(pair->mse_test) << ','
                << fmt_metric(pair->rmse_train) << ',' << fmt_metric(pair->rmse_test) << ','
                << fmt_metric(pair->rrmse_test) << '\n';
        }
    }
    if (!out) throw IoError("write failed: " + path);
}

void write_trace_csv(const std::vector<EventRecord>& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << kTraceHeader << '\n';
    for (const EventRecord& r : trace) {
        out << r.t << ',' << fmt_full(r.prediction_mdi) << ',' << fmt_full(r.prediction_gd)
            << ',' << fmt_full(r.actual) << ',' << fmt_full(r.sqerr_mdi) << ','
            << fmt_full(r.sqerr_gd) << ',' << r.k_mdi << ',' << r.k_gd << ','
            << method_name(r.active) << ',' << fmt_full(r.train_mse_mdi) << ','
            << fmt_full(r.train_mse_gd) << ',' << (r.warmup ? 1 : 0) << ','
            << (r.fallback_mdi ? 1 : 0) << ',' << (r.fallback_gd ? 1 : 0) << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

nlohmann::ordered_json metrics_json(const MethodMetrics& m) {
    return {{"n_events", m.n_events},   {"mse_train", m.mse_train},
            {"mse_test", m.mse_test},   {"rmse_train", m.rmse_train},
            {"rmse_test", m.rmse_test}, {"rrmse_test", m.rrmse_test}};
}

nlohmann::ordered_json hist_json(const std::map<std::size_t, std::size_t>& hist) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, count] : hist) j[std::to_string(k)] = count;
    return j;
}

void write_summary_json(const RunResult& result, const PipelineConfig& cfg,
                        const std::string& path, const std::string& symbol,
                        std::size_t crossed_ticks, const std::string& format_version) {
    nlohmann::ordered_json j;
    j["format_version"] = format_version;
    j["symbol"] = symbol;
    j["kernels_lane"] = kernels::lane_name(kernels::active_lane());

    nlohmann::ordered_json c;
    c["feature_set"] = cfg.feature_set == FeatureSet::Simple ? "simple" : "extended";
    c["drop_raw_columns"] = cfg.drop_raw_columns;
    c["window"] = cfg.window.window_len;
    c["folds"] = cfg.n_folds;
    c["horizon"] = cfg.horizon;
    c["seed"] = cfg.master_seed;
    c["gamma"] = cfg.kernel.gamma;
    c["c0"] = cfg.kernel.c0;
    c["degree"] = cfg.kernel.degree;
    c["trees"] = cfg.forest.n_trees;
    c["max_depth"] = cfg.forest.max_depth;
    c["min_samples_split"] = cfg.forest.min_samples_split;
    c["feature_subsample"] = cfg.forest.feature_subsample;
    c["bootstrap"] = cfg.forest.bootstrap;
    c["mdi_weighted_normalized"] = cfg.forest.weighted_normalized_mdi;
    c["gd_alpha"] = cfg.gd.learning_rate;
    c["gd_iterations"] = cfg.gd.iterations;
    c["gd_normalize"] = cfg.gd.normalize_gradient;
    c["gd_divergence_factor"] = cfg.gd.divergence_factor;
    c["max_clusters"] = cfg.cluster.max_clusters;
    c["n_init"] = cfg.cluster.n_init;
    c["kmeans_max_iter"] = cfg.cluster.kmeans_max_iter;
    c["kmeans_tol"] = cfg.cluster.tol;
    c["kmeanspp"] = cfg.cluster.kmeanspp;
    c["ridge"] = cfg.ridge;
    c["target_mode"] = cfg.target_mode == RbfTargetMode::Delta
                           ? "delta"
                           : (cfg.target_mode == RbfTargetMode::Level ? "level" : "raw");
    c["rbf_bias"] = cfg.rbf_bias;
    c["selector_lookback"] = cfg.selector_lookback;
    c["stride"] = cfg.stride;
    c["parallel_pipelines"] = cfg.parallel_pipelines;
    j["config"] = std::move(c);

    const MetricsReport& rep = result.report;
    j["events"] = {{"predicted", rep.predicted_events},
                   {"warmup", rep.warmup_events},
                   {"fallback", rep.fallback_events},
                   {"crossed_ticks", crossed_ticks}};
    j["regime"] = {{"changes", rep.regime_changes},
                   {"mean_events_between_changes", rep.mean_events_between_changes}};
    j["k_histogram"] = {{"mdi", hist_json(rep.k_hist_mdi)}, {"gd", hist_json(rep.k_hist_gd)}};
    j["overall"] = {{"mdi", metrics_json(rep.overall.mdi)},
                    {"gd", metrics_json(rep.overall.gd)}};

    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace

EmitPaths emit(const RunResult& result, const PipelineConfig& cfg,
               const std::string& out_dir, const std::string& symbol,
               std::size_t crossed_ticks, const std::string& format_version) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());

    EmitPaths paths;
    paths.report_csv = out_dir + "/report.csv";
    paths.trace_csv = out_dir + "/trace.csv";
    paths.summary_json = out_dir + "/summary.json";
    write_report_csv(result.report, paths.report_csv);
    write_trace_csv(result.trace, paths.trace_csv);
    write_summary_json(result, cfg, paths.summary_json, symbol, crossed_ticks,
                       format_version);
    return paths;
}

std::vector<EventRecord> load_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw EmptyFile("empty trace: " + path);
    strip_cr(line);
    if (line != kTraceHeader) throw ParseError(1, "unexpected trace header");

    std::vector<EventRecord> trace;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (line.empty()) continue;
        const auto f = split_fields(line);
        if (f.size() != 14) throw ParseError(line_no, "expected 14 columns");
        EventRecord r;
        r.t = static_cast<std::size_t>(parse_i64(f[0], line_no, "event"));
        r.prediction_mdi = parse_double(f[1], line_no, "prediction_mdi");
        r.prediction_gd = parse_double(f[2], line_no, "prediction_gd");
        r.actual = parse_double(f[3], line_no, "actual");
        r.sqerr_mdi = parse_double(f[4], line_no, "sqerr_mdi");
        r.sqerr_gd = parse_double(f[5], line_no, "sqerr_gd");
        r.k_mdi = static_cast<std::size_t>(parse_i64(f[6], line_no, "k_mdi"));
        r.k_gd = static_cast<std::size_t>(parse_i64(f[7], line_no, "k_gd"));
        if (f[8] == "MDI")
            r.active = Method::Mdi;
        else if (f[8] == "GD")
            r.active = Method::Gd;
        else
            throw ParseError(line_no, "bad active_method");
        r.train_mse_mdi = parse_double(f[9], line_no, "train_mse_mdi");
        r.train_mse_gd = parse_double(f[10], line_no, "train_mse_gd");
        r.warmup = parse_i64(f[11], line_no, "warmup") != 0;
        r.fallback_mdi = parse_i64(f[12], line_no, "fallback_mdi") != 0;
        r.fallback_gd = parse_i64(f[13], line_no, "fallback_gd") != 0;
        trace.push_back(r);
    }
    return trace;
}

void write_trace_svg(const std::vector<EventRecord>& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);

    const double width = 1000.0, height = 420.0, margin = 45.0;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const EventRecord& r : trace) {
        lo = std::min(lo, r.actual);
        hi = std::max(hi, r.actual);
    }
    if (!(hi > lo)) {
        lo -= 1.0;
        hi += 1.0;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;

    const std::size_t n = trace.size();
    const std::size_t stride = std::max<std::size_t>(1, n / 2000);
    const auto sx = [&](std::size_t i) {
        return margin + (width - 2 * margin) * static_cast<double>(i) /
                            static_cast<double>(std::max<std::size_t>(1, n - 1));
    };
    const auto sy = [&](double v) {
        const double c = std::min(hi, std::max(lo, v));  // clamp off-chart spikes
        return height - margin - (height - 2 * margin) * (c - lo) / (hi - lo);
    };
    const auto polyline = [&](const char* color, auto getter) {
        out << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1\" points=\"";
        for (std::size_t i = 0; i < n; i += stride) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.1f,%.1f ", sx(i), sy(getter(trace[i])));
            out << buf;
        }
        out << "\"/>\n";
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height
        << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    polyline("black", [](const EventRecord& r) { return r.actual; });
    polyline("#4682b4", [](const EventRecord& r) { return r.prediction_mdi; });
    polyline("#ff8c00", [](const EventRecord& r) { return r.prediction_gd; });
    out << "<text x=\"" << margin << "\" y=\"20\" font-size=\"13\">actual (black)  "
        << "MDI (blue)  GD (orange)</text>\n</svg>\n";
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace tickcast
