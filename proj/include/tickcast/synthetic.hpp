#pragma once

#include <cstdint>
#include <string>

#include "tickcast/lob.hpp"

namespace tickcast {

enum class SyntheticModel { RandomWalk, Ar1, RbfMixture };

// Synthetic Level-1 feed standing in for a proprietary tick source.
// Mid-price path per model; ask/bid sit half a spread away, optionally
// jittered outward by whole ticks; volumes are lognormal.
struct SyntheticSpec {
    SyntheticModel model = SyntheticModel::Ar1;
    std::size_t n_events = 3000;
    double phi = 0.95;          // AR(1) coefficient, also drives the latent
                                // state of the rbf_mixture model
    double noise_scale = 0.01;  // innovation standard deviation
    double base_price = 100.0;
    double spread_ticks = 2.0;
    double tick_size = 0.01;
    double vol_median = 100.0;
    double vol_sigma = 0.5;     // lognormal shape
    double jitter_prob = 0.0;   // chance per side of widening by one tick
    std::uint64_t seed = 1;
    std::string symbol = "SYN";

    void validate() const;
};

// "model:key=value,key=value" with keys n, phi, noise, base, spread_ticks,
// tick, vol_median, vol_sigma, jitter, seed. Throws BadSpec.
SyntheticSpec parse_synthetic_spec(const std::string& text);

// True when the spec text carried an explicit seed (otherwise callers
// usually inherit the run seed).
bool synthetic_spec_has_seed(const std::string& text);

TickSeries gen_synthetic(const SyntheticSpec& spec);

}  // namespace tickcast
