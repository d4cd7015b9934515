// tickcast: tick-by-tick LOB mid-price forecasting with competitive feature
// importance (MDI vs GD), automatic cluster-count selection, and an RBF
// network refit per event.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "tickcast/config.hpp"
#include "tickcast/csv_io.hpp"
#include "tickcast/engine.hpp"
#include "tickcast/kernels.hpp"
#include "tickcast/oracles.hpp"
#include "tickcast/synthetic.hpp"

namespace {

using namespace tickcast;

void apply_kernel_lane(const std::string& lane) {
    if (lane.empty() || lane == "auto") {
        kernels::select_best_lane();
        return;
    }
    if (lane == "scalar") return kernels::select_lane(kernels::Lane::Scalar);
    if (lane == "avx2") return kernels::select_lane(kernels::Lane::Avx2);
    if (lane == "neon") return kernels::select_lane(kernels::Lane::Neon);
    throw InvalidConfig("unknown kernel lane '" + lane + "'");
}

// CLI values staged separately so precedence stays simple:
// defaults < config file < TICKCAST_SEED < explicit CLI flags.
struct CliStage {
    std::string config_path;
    std::string kernels = "auto";
    std::string input;
    std::string synthetic;
    std::string feature_set;
    std::string out;
    std::uint64_t seed = 0;
    std::size_t window = 0;
    std::size_t folds = 0;
    std::size_t horizon = 0;
    bool plot = false;

    CLI::App* sub = nullptr;

    void add_options(CLI::App* cmd) {
        sub = cmd;
        cmd->add_option("--config", config_path, "flat key=value config file");
        cmd->add_option("--kernels", kernels, "scalar|avx2|neon|auto");
        cmd->add_option("--input", input, "tick CSV (ts_ns,bid_px,ask_px,bid_sz,ask_sz)");
        cmd->add_option("--synthetic", synthetic,
                        "synthetic spec, e.g. ar1:n=3000,phi=0.95,noise=0.01");
        cmd->add_option("--seed", seed, "master seed (overrides TICKCAST_SEED and config)");
        cmd->add_option("--feature-set", feature_set, "simple|extended");
        cmd->add_option("--window", window, "window length");
        cmd->add_option("--folds", folds, "cumulative fold count");
        cmd->add_option("--horizon", horizon, "prediction horizon in events");
        cmd->add_option("--out", out, "output directory");
        cmd->add_flag("--plot", plot, "also write predictions.svg");
    }

    RunConfig resolve() const {
        RunConfig cfg;
        if (!config_path.empty()) apply_config_file(cfg, config_path);
        if (const char* env = std::getenv("TICKCAST_SEED");
            env != nullptr && sub->count("--seed") == 0)
            apply_config_entry(cfg, "seed", env);

        const auto given = [&](const char* name) { return sub->count(name) > 0; };
        if (given("--input")) cfg.input_path = input;
        if (given("--synthetic")) cfg.synthetic_spec = synthetic;
        if (given("--seed")) cfg.pipeline.master_seed = seed;
        if (given("--feature-set")) apply_config_entry(cfg, "feature_set", feature_set);
        if (given("--window")) cfg.pipeline.window.window_len = window;
        if (given("--folds")) cfg.pipeline.n_folds = folds;
        if (given("--horizon")) cfg.pipeline.horizon = horizon;
        if (given("--out")) cfg.out_dir = out;
        if (given("--plot")) cfg.plot = plot;
        return cfg;
    }
};

TickSeries resolve_series(RunConfig& cfg) {
    if (!cfg.input_path.empty() && !cfg.synthetic_spec.empty())
        throw InvalidConfig("give either input or synthetic, not both");
    if (!cfg.input_path.empty()) {
        TickSeries series = load_ticks(cfg.input_path, cfg.symbol);
        if (cfg.symbol.empty()) cfg.symbol = series.symbol;
        return series;
    }
    if (!cfg.synthetic_spec.empty()) {
        SyntheticSpec spec = parse_synthetic_spec(cfg.synthetic_spec);
        if (!synthetic_spec_has_seed(cfg.synthetic_spec))
            spec.seed = cfg.pipeline.master_seed;
        if (!cfg.symbol.empty()) spec.symbol = cfg.symbol;
        TickSeries series = gen_synthetic(spec);
        cfg.symbol = series.symbol;
        return series;
    }
    throw InvalidConfig("need --input PATH or --synthetic SPEC");
}

int cmd_run(RunConfig cfg) {
    const TickSeries series = resolve_series(cfg);
    std::printf("tickcast run: %s, %zu events, seed %llu, kernels %s\n",
                cfg.symbol.c_str(), series.size(),
                static_cast<unsigned long long>(cfg.pipeline.master_seed),
                kernels::lane_name(kernels::active_lane()));

    const RunResult result = run(series, cfg.pipeline);
    const EmitPaths paths = emit(result, cfg.pipeline, cfg.out_dir, cfg.symbol,
                                 series.crossed_count, RunConfig::kFormatVersion);
    if (cfg.plot) write_trace_svg(result.trace, cfg.out_dir + "/predictions.svg");

    const MetricsReport& rep = result.report;
    std::printf("predicted %zu events (%zu warmup, %zu fallback)\n", rep.predicted_events,
                rep.warmup_events, rep.fallback_events);
    std::printf("overall  MDI: test RMSE %.6g  RRMSE %.6g\n", rep.overall.mdi.rmse_test,
                rep.overall.mdi.rrmse_test);
    std::printf("overall  GD : test RMSE %.6g  RRMSE %.6g\n", rep.overall.gd.rmse_test,
                rep.overall.gd.rrmse_test);
    std::printf("regime changes %zu (mean %.3g events between)\n", rep.regime_changes,
                rep.mean_events_between_changes);
    std::printf("wrote %s, %s, %s\n", paths.report_csv.c_str(), paths.trace_csv.c_str(),
                paths.summary_json.c_str());
    return 0;
}

int cmd_bench(RunConfig cfg, std::size_t steps, bool feature_set_given) {
    if (!feature_set_given && cfg.synthetic_spec.empty() && cfg.input_path.empty())
        cfg.pipeline.feature_set = FeatureSet::Extended;  // quoted throughput target
    if (cfg.synthetic_spec.empty() && cfg.input_path.empty())
        cfg.synthetic_spec = "ar1:n=" + std::to_string(cfg.pipeline.window.window_len +
                                                       steps + cfg.pipeline.horizon + 8);
    const TickSeries series = resolve_series(cfg);
    std::vector<double> ms = bench_step_millis(series, cfg.pipeline, steps);
    std::sort(ms.begin(), ms.end());
    const double total = kernels::sum(ms.data(), ms.size());
    const double median = ms[ms.size() / 2];
    const double p90 = ms[std::min(ms.size() - 1, ms.size() * 9 / 10)];
    std::printf("bench: %zu steps, %s set, window %zu, kernels %s\n", ms.size(),
                cfg.pipeline.feature_set == FeatureSet::Simple ? "simple" : "extended",
                cfg.pipeline.window.window_len, kernels::lane_name(kernels::active_lane()));
    std::printf("per-step ms: median %.3f  mean %.3f  p90 %.3f  max %.3f\n", median,
                total / static_cast<double>(ms.size()), p90, ms.back());
    return 0;
}

int cmd_oracle(std::size_t trials, std::uint64_t seed) {
    std::printf("oracle suite: %zu trials, seed %llu\n", trials,
                static_cast<unsigned long long>(seed));
    const bool ok = oracles::run_oracle_suite(trials, seed);
    std::printf("%s\n", ok ? "all oracle checks passed" : "ORACLE CHECKS FAILED");
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tick-by-tick LOB mid-price forecasting engine"};
    app.require_subcommand(1);

    CliStage run_stage, bench_stage;
    std::size_t bench_steps = 200;
    std::size_t oracle_trials = 100;
    std::uint64_t oracle_seed = 12345;
    std::string oracle_kernels = "auto";

    CLI::App* run_cmd = app.add_subcommand("run", "run the forecasting protocol");
    run_stage.add_options(run_cmd);

    CLI::App* bench_cmd = app.add_subcommand("bench", "per-event step timing");
    bench_stage.add_options(bench_cmd);
    bench_cmd->add_option("--steps", bench_steps, "number of timed steps");

    CLI::App* oracle_cmd = app.add_subcommand("oracle", "brute-force verification suite");
    oracle_cmd->add_option("--trials", oracle_trials, "random instances per check");
    oracle_cmd->add_option("--seed", oracle_seed, "oracle RNG seed");
    oracle_cmd->add_option("--kernels", oracle_kernels, "scalar|avx2|neon|auto");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("oracle")) {
            apply_kernel_lane(oracle_kernels);
            return cmd_oracle(oracle_trials, oracle_seed);
        }
        if (app.got_subcommand("bench")) {
            apply_kernel_lane(bench_stage.kernels);
            return cmd_bench(bench_stage.resolve(), bench_steps,
                             bench_cmd->count("--feature-set") > 0);
        }
        apply_kernel_lane(run_stage.kernels);
        return cmd_run(run_stage.resolve());
    } catch (const tickcast::Error& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 1;
    }
}
