#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tickcast/errors.hpp"

namespace tickcast {

// One Level-1 LOB event: best bid/ask with volumes, nanosecond timestamp.
struct Tick {
    std::int64_t ts_ns = 0;
    double ask_px = 0.0;
    double bid_px = 0.0;
    double ask_vol = 0.0;
    double bid_vol = 0.0;
};

struct TickSeries {
    std::string symbol;
    std::vector<Tick> ticks;
    // Crossed books (bid > ask) are accepted and counted, not rejected;
    // transient crossings are normal in raw HFT feeds.
    std::size_t crossed_count = 0;

    std::size_t size() const { return ticks.size(); }
};

struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;  // exclusive
    std::size_t size() const { return end - begin; }
};

struct WindowPlan {
    std::size_t window_len = 100;
    std::size_t step = 1;  // step 1 == overlap window_len - 1
};

struct FoldPlan {
    std::size_t n_folds = 0;
    std::vector<IndexRange> bounds;  // contiguous, disjoint, covering

    // Index of the fold containing event idx.
    std::size_t fold_of(std::size_t idx) const;
    // Training span for fold k: everything before it.
    IndexRange training_span(std::size_t k) const { return {0, bounds[k].begin}; }
};

// Mid-price of the best level: (ask + bid) / 2.
inline double mid_price(const Tick& tick) { return (tick.ask_px + tick.bid_px) * 0.5; }

// Reason string if the tick violates its invariants, nullptr if fine.
// Crossed books are not a violation.
const char* tick_validity_error(const Tick& tick);

// Sliding windows [i, i+W) for i = 0, step, 2*step, ...
// Throws SeriesTooShort when n_events < plan.window_len, InvalidConfig on a bad plan.
std::vector<IndexRange> make_windows(std::size_t n_events, const WindowPlan& plan);
std::vector<IndexRange> make_windows(const TickSeries& series, const WindowPlan& plan);

// Near-equal contiguous folds; the remainder goes to the earliest folds.
// Throws TooFewEvents when n_events < n_folds or n_folds < 2.
FoldPlan fold_plan(std::size_t n_events, std::size_t n_folds);

}  // namespace tickcast
