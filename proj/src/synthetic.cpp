#include "tickcast/synthetic.hpp"

#include <cmath>
#include <charconv>

#include "tickcast/rng.hpp"

namespace tickcast {

void SyntheticSpec::validate() const {
    if (!(phi > -1.0 && phi < 1.0)) throw BadSpec("phi must be in (-1, 1)");
    if (n_events < 3) throw BadSpec("n_events must be >= 3");
    if (!(noise_scale >= 0.0)) throw BadSpec("noise must be >= 0");
    if (!(base_price > 0.0)) throw BadSpec("base price must be > 0");
    if (!(spread_ticks > 0.0)) throw BadSpec("spread_ticks must be > 0");
    if (!(tick_size > 0.0)) throw BadSpec("tick size must be > 0");
    if (!(vol_median > 0.0)) throw BadSpec("vol_median must be > 0");
    if (!(vol_sigma >= 0.0)) throw BadSpec("vol_sigma must be >= 0");
    if (!(jitter_prob >= 0.0 && jitter_prob <= 1.0)) throw BadSpec("jitter in [0, 1]");
}

namespace {

double parse_number(const std::string& text) {
    double v = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        throw BadSpec("synthetic spec: bad number '" + text + "'");
    return v;
}

}  // namespace

SyntheticSpec parse_synthetic_spec(const std::string& text) {
    SyntheticSpec spec;
    const auto colon = text.find(':');
    const std::string model = text.substr(0, colon);
    if (model == "random_walk")
        spec.model = SyntheticModel::RandomWalk;
    else if (model == "ar1")
        spec.model = SyntheticModel::Ar1;
    else if (model == "rbf_mixture")
        spec.model = SyntheticModel::RbfMixture;
    else
        throw BadSpec("synthetic spec: unknown model '" + model + "'");

    if (colon == std::string::npos) return spec;
    std::string rest = text.substr(colon + 1);
    std::size_t pos = 0;
    while (pos < rest.size()) {
        std::size_t comma = rest.find(',', pos);
        if (comma == std::string::npos) comma = rest.size();
        const std::string kv = rest.substr(pos, comma - pos);
        pos = comma + 1;
        if (kv.empty()) continue;
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw BadSpec("synthetic spec: expected key=value in '" + kv + "'");
        const std::string key = kv.substr(0, eq);
        const std::string val = kv.substr(eq + 1);
        if (key == "n")
            spec.n_events = static_cast<std::size_t>(parse_number(val));
        else if (key == "phi")
            spec.phi = parse_number(val);
        else if (key == "noise")
            spec.noise_scale = parse_number(val);
        else if (key == "base")
            spec.base_price = parse_number(val);
        else if (key == "spread_ticks")
            spec.spread_ticks = parse_number(val);
        else if (key == "tick")
            spec.tick_size = parse_number(val);
        else if (key == "vol_median")
            spec.vol_median = parse_number(val);
        else if (key == "vol_sigma")
            spec.vol_sigma = parse_number(val);
        else if (key == "jitter")
            spec.jitter_prob = parse_number(val);
        else if (key == "seed")
            spec.seed = static_cast<std::uint64_t>(parse_number(val));
        else
            throw BadSpec("synthetic spec: unknown key '" + key + "'");
    }
    spec.validate();
    return spec;
}

bool synthetic_spec_has_seed(const std::string& text) {
    return text.find("seed=") != std::string::npos;
}

TickSeries gen_synthetic(const SyntheticSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    TickSeries series;
    series.symbol = spec.symbol;
    series.ticks.reserve(spec.n_events);

    const double half_spread = 0.5 * spec.spread_ticks * spec.tick_size;
    const double mix_amp = 100.0 * spec.tick_size;
    double state = 0.0;  // AR(1) deviation / latent mixture state
    std::int64_t ts = 1'700'000'000'000'000'000;

    for (std::size_t i = 0; i < spec.n_events; ++i) {
        double mid = spec.base_price;
        switch (spec.model) {
            case SyntheticModel::RandomWalk:
                state += spec.noise_scale * rng.normal();
                mid += state;
                break;
            case SyntheticModel::Ar1:
                state = spec.phi * state + spec.noise_scale * rng.normal();
                mid += state;
                break;
            case SyntheticModel::RbfMixture: {
                state = spec.phi * state + spec.noise_scale * rng.normal();
                const double up = std::exp(-0.5 * (state - 1.0) * (state - 1.0));
                const double dn = std::exp(-0.5 * (state + 1.0) * (state + 1.0));
                mid += mix_amp * (up - dn);
                break;
            }
        }
        // Keep the bid strictly positive even on deep random-walk excursions.
        if (mid < half_spread + spec.tick_size) mid = half_spread + spec.tick_size;

        Tick tick;
        tick.ts_ns = ts;
        ts += 1'000'000;  // one event per millisecond
        tick.ask_px = mid + half_spread;
        tick.bid_px = mid - half_spread;
        if (spec.jitter_prob > 0.0) {
            if (rng.next_double() < spec.jitter_prob) tick.ask_px += spec.tick_size;
            if (rng.next_double() < spec.jitter_prob) tick.bid_px -= spec.tick_size;
        }
        tick.ask_vol = std::max(0.0, std::round(spec.vol_median * std::exp(spec.vol_sigma * rng.normal())));
        tick.bid_vol = std::max(0.0, std::round(spec.vol_median * std::exp(spec.vol_sigma * rng.normal())));
        series.ticks.push_back(tick);
    }
    return series;
}

}  // namespace tickcast
