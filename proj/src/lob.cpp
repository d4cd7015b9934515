#include "tickcast/lob.hpp"

#include <cmath>

namespace tickcast {

std::size_t FoldPlan::fold_of(std::size_t idx) const {
    for (std::size_t k = 0; k < bounds.size(); ++k)
        if (idx < bounds[k].end) return k;
    return bounds.size() - 1;
}

const char* tick_validity_error(const Tick& tick) {
    if (!(tick.ask_px > 0.0) || !std::isfinite(tick.ask_px)) return "ask price must be > 0";
    if (!(tick.bid_px > 0.0) || !std::isfinite(tick.bid_px)) return "bid price must be > 0";
    if (tick.ask_vol < 0.0 || !std::isfinite(tick.ask_vol)) return "ask volume must be >= 0";
    if (tick.bid_vol < 0.0 || !std::isfinite(tick.bid_vol)) return "bid volume must be >= 0";
    return nullptr;
}

std::vector<IndexRange> make_windows(std::size_t n_events, const WindowPlan& plan) {
    const std::size_t w = plan.window_len;
    if (w < 2) throw InvalidConfig("window_len must be >= 2");
    if (plan.step < 1 || plan.step > w) throw InvalidConfig("step must be in [1, window_len]");
    if (n_events < w) throw SeriesTooShort("series shorter than one window");
    const std::size_t count = (n_events - w) / plan.step + 1;
    std::vector<IndexRange> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        out.push_back({i * plan.step, i * plan.step + w});
    return out;
}

std::vector<IndexRange> make_windows(const TickSeries& series, const WindowPlan& plan) {
    return make_windows(series.size(), plan);
}

FoldPlan fold_plan(std::size_t n_events, std::size_t n_folds) {
    if (n_folds < 2) throw TooFewEvents("need at least 2 folds");
    if (n_events < n_folds) throw TooFewEvents("fewer events than folds");
    FoldPlan plan;
    plan.n_folds = n_folds;
    plan.bounds.reserve(n_folds);
    const std::size_t base = n_events / n_folds;
    const std::size_t rem = n_events % n_folds;
    std::size_t begin = 0;
    for (std::size_t k = 0; k < n_folds; ++k) {
        const std::size_t len = base + (k < rem ? 1 : 0);
        plan.bounds.push_back({begin, begin + len});
        begin += len;
    }
    return plan;
}

}  // namespace tickcast
