#pragma once

// JSON configs and CSV/JSON artifacts.
//
// FilterBankSpec:   {"M": int, "d": int, "filters": [[h(0), h(1), ...], ...]}
// ExperimentConfig: {"bank": <FilterBankSpec>,
//                    "input": {"model": "white"|"shaped", "variance": x, "shaping": [g(0), ...]},
//                    "seed": u64, "algorithm": "nlms"|"lms", "step": x, "tap_len": n,
//                    "iterations": n, "snapshots": [n, ...],
//                    "normalization": "per_channel"|"joint", "eps": x,
//                    "per_component_trace": bool}
// Only "bank" is required; the rest default to the Experiment-1 adaptive settings.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "json.hpp"
#include "ufb/harness.hpp"

namespace ufb::io {

using json = nlohmann::json;

/// Parses a file; syntax errors become ConfigError with line and column.
json load_json_file(const std::filesystem::path& path);
json parse_json(const std::string& text, const std::string& origin = "<string>");

FilterBankSpec bank_from_json(const json& j, const std::string& where = "bank");
json bank_to_json(const FilterBankSpec& fb);
InputModel input_from_json(const json& j, const std::string& where = "input");
json input_to_json(const InputModel& m);
ExperimentConfig config_from_json(const json& j);
json config_to_json(const ExperimentConfig& cfg);

json wiener_to_json(const WienerSolution& ws);
json metrics_to_json(const ExperimentResult& res);

void write_trace_csv(std::ostream& os, const AdaptationTrace& trace);
void write_trace_db_csv(std::ostream& os, const AdaptationTrace& trace, double reference_power);
/// One row per tap index, one column per (p, q) pair labelled a_{p+1,q+1}.
void write_tap_table_csv(std::ostream& os, const TapTable& taps);
void write_blocked_signal_csv(std::ostream& os, const BlockedSignal& s, const std::string& prefix = "v");
void write_residual_csv(std::ostream& os, const ReconstructionReport& rep);

/// trace.csv, trace_db.csv, taps_iter<k>.csv per snapshot and final,
/// wiener_taps.csv, wiener.json, metrics.json, config.json.
void write_result_dir(const ExperimentResult& res, const std::filesystem::path& dir);

/// Creates `dir`; refuses a non-empty existing directory unless `force`.
void prepare_output_dir(const std::filesystem::path& dir, bool force);

}  // namespace ufb::io
