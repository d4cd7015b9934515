#include "tickcast/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "tickcast/errors.hpp"

namespace tickcast {

namespace {

double to_double(const std::string& key, const std::string& value) {
    double v = 0.0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size())
        throw InvalidConfig(key + ": bad number '" + value + "'");
    return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size())
        throw InvalidConfig(key + ": bad integer '" + value + "'");
    return v;
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true" || value == "on" || value == "yes") return true;
    if (value == "0" || value == "false" || value == "off" || value == "no") return false;
    throw InvalidConfig(key + ": bad boolean '" + value + "'");
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

}  // namespace

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
    PipelineConfig& p = cfg.pipeline;
    if (key == "input")
        cfg.input_path = value;
    else if (key == "synthetic")
        cfg.synthetic_spec = value;
    else if (key == "out")
        cfg.out_dir = value;
    else if (key == "symbol")
        cfg.symbol = value;
    else if (key == "plot")
        cfg.plot = to_bool(key, value);
    else if (key == "feature_set") {
        if (value == "simple")
            p.feature_set = FeatureSet::Simple;
        else if (value == "extended")
            p.feature_set = FeatureSet::Extended;
        else
            throw InvalidConfig("feature_set must be simple|extended");
    } else if (key == "drop_raw")
        p.drop_raw_columns = to_bool(key, value);
    else if (key == "window")
        p.window.window_len = static_cast<std::size_t>(to_u64(key, value));
    else if (key == "folds")
        p.n_folds = static_cast<std::size_t>(to_u64(key, value));
    else if (key == "horizon")
        p.horizon = static_cast<std::size_t>(to_u64(key, value));
    else if (key == "seed")
        p.master_seed = to_u64(key, value);
    else if (key == "gamma")
        p.kernel.gamma = to_double(key, value);
    else if (key == "c0")
        p.kernel.c0 = to_double(key, value);
    else if (key == "degree")
        p.kernel.degree = static_cast<int>(to_u64(key, value));
    else if (key == "trees")
        p.forest.n_trees = static_cast<std::size_t>(to_u64(key, value));
    else if (key == "max_depth")
        p.forest.max_depth = static_cast<std::size_t>(to_u64(key, value));
    else if (key == "min_samples_split")
        p.forest.min_samples_split = static_cast<std::size_t>(to_u64(key, value));
    else if (key == "feature_subsample")
        p.forest.feature_subsample = static_cast<std::size_t>(to_u64(key, value));
    else if (key == "bootstrap")
        p.forest.bootstrap = to_bool(key, value);
    else if (key == "mdi_weighted")
        p.forest.weighted_normalized_mdi = to_bool(key, value);
    else if (key == "gd_alpha")
        p.gd.learning_rate = to_double(key, value);
    else if (key == "gd_iterations")
        p.gd.iterations = static_cast<std::size_t>(to_u64(key, value));
    else if (key == "gd_normalize")
        p.gd.normalize_gradient = to_bool(key, value);
    else if (key == "gd_divergence_factor")
        p.gd.divergence_factor = to_double(key, value);
    else if (key == "max_clusters")
        p.cluster.max_clusters = static_cast<std::size_t>(to_u64(key, value));
    else if (key == "n_init")
        p.cluster.n_init = static_cast<std::size_t>(to_u64(key, value));
    else if (key == "kmeans_max_iter")
        p.cluster.kmeans_max_iter = static_cast<std::size_t>(to_u64(key, value));
    else if (key == "kmeans_tol")
        p.cluster.tol = to_double(key, value);
    else if (key == "kmeanspp")
        p.cluster.kmeanspp = to_bool(key, value);
    else if (key == "ridge")
        p.ridge = to_double(key, value);
    else if (key == "target_mode") {
        if (value == "delta")
            p.target_mode = RbfTargetMode::Delta;
        else if (value == "level")
            p.target_mode = RbfTargetMode::Level;
        else if (value == "raw")
            p.target_mode = RbfTargetMode::Raw;
        else
            throw InvalidConfig("target_mode must be delta|level|raw");
    } else if (key == "rbf_bias")
        p.rbf_bias = to_bool(key, value);
    else if (key == "lookback")
        p.selector_lookback = static_cast<std::size_t>(to_u64(key, value));
    else if (key == "stride")
        p.stride = static_cast<std::size_t>(to_u64(key, value));
    else if (key == "parallel")
        p.parallel_pipelines = to_bool(key, value);
    else
        throw InvalidConfig("unknown config key '" + key + "'");
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidConfig("config line " + std::to_string(line_no) +
                                ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        apply_config_entry(cfg, key, value);
    }
}

}  // namespace tickcast
