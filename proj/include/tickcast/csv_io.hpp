#pragma once

#include <string>
#include <vector>

#include "tickcast/engine.hpp"
#include "tickcast/lob.hpp"

namespace tickcast {

// Input CSV contract: header exactly `ts_ns,bid_px,ask_px,bid_sz,ask_sz`,
// integer nanosecond timestamps, one tick per row, rows sorted by timestamp.
// Crossed books are accepted and counted. Throws ParseError (with the line
// number), UnsortedTimestamps, or EmptyFile.
TickSeries load_ticks(const std::string& path, std::string symbol = "");

// Same column contract as load_ticks; doubles at round-trip precision.
void write_ticks(const TickSeries& series, const std::string& path);

struct EmitPaths {
    std::string report_csv;
    std::string trace_csv;
    std::string summary_json;
};

// Writes report.csv (per fold x method, 6 significant digits), trace.csv
// (per-event records at round-trip precision), and summary.json (config echo,
// regime stats, K histogram). Deterministic bytes for a given result.
EmitPaths emit(const RunResult& result, const PipelineConfig& cfg,
               const std::string& out_dir, const std::string& symbol,
               std::size_t crossed_ticks, const std::string& format_version);

// Reparses a trace.csv produced by emit.
std::vector<EventRecord> load_trace(const std::string& path);

// Prediction-vs-actual line chart of the trace; no rendering dependencies.
void write_trace_svg(const std::vector<EventRecord>& trace, const std::string& path);

}  // namespace tickcast
