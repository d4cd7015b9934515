#pragma once

#include <string>

#include "tickcast/engine.hpp"

namespace tickcast {

// Full run configuration: engine tunables plus input/output plumbing.
struct RunConfig {
    PipelineConfig pipeline;
    std::string input_path;      // CSV tick file; empty when synthetic
    std::string synthetic_spec;  // e.g. "ar1:n=3000,phi=0.95,noise=0.01"
    std::string out_dir = "out";
    std::string symbol;          // defaults to the input stem / "SYN"
    bool plot = false;

    static constexpr const char* kFormatVersion = "tickcast/1";
};

// Flat key=value file; '#' starts a comment. Unknown keys are rejected.
// Applies on top of the defaults already in `cfg`.
void apply_config_file(RunConfig& cfg, const std::string& path);

// Single key=value assignment (also used by CLI overrides).
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);

}  // namespace tickcast
