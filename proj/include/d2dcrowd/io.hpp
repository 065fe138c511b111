#pragma once

// Config files and result files.
//
// Config is JSON. Top-level keys: scenario (ScenarioConfig fields),
// rounds, schemes, incentive, incentive_params, confidence_level,
// output_dir, format, jobs, timing. Missing keys keep their defaults;
// unknown keys are rejected. Ranges are {"min": x, "max": y}.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "d2dcrowd/simkit.hpp"

namespace d2dcrowd::io {

const char* version();

ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const ExperimentConfig& cfg, int indent = 2);

const char* to_string(OutputFormat f);
std::optional<OutputFormat> parse_format(std::string_view name);

/// --out, then $D2DCROWD_OUT_DIR, then the config's output_dir.
std::filesystem::path resolve_output_dir(const std::optional<std::string>& cli_out,
                                         const ExperimentConfig& cfg);

inline constexpr const char* out_dir_env = "D2DCROWD_OUT_DIR";

/// Quotes a field when it holds a comma, quote, CR or LF; quotes double.
std::string csv_field(std::string_view s);

/// Shortest decimal that reads back to the same double.
std::string format_double(double v);

/// round,scheme,tasks,energy_j,saving_ratio,solve_ms,n_local,n_offload,
/// n_exchange,all_local_j,input_hash. solve_ms is empty unless timed.
void write_rounds_csv(std::ostream& os, const std::vector<RoundRecord>& records);

/// scheme,rounds,mean_saving_ratio,ci_half_width,confidence_level,
/// aggregate_saving_ratio,mean_energy_j,mean_tasks,mean_solve_ms,
/// p50_solve_ms,p95_solve_ms
void write_summary_csv(std::ostream& os, const ExperimentSummary& s, double confidence_level);

/// param,value,seed,scheme, then the summary columns after scheme.
void write_sweep_csv(std::ostream& os, SweepParam param, const std::vector<SweepPoint>& points,
                     double confidence_level);

/// Writes rounds, summary (csv or json), the incentive trace when present,
/// and manifest.json. Returns the file names written.
std::vector<std::string> write_run_outputs(const std::filesystem::path& dir,
                                           const ExperimentConfig& cfg,
                                           const ExperimentResult& result);

std::vector<std::string> write_sweep_outputs(const std::filesystem::path& dir,
                                             const ExperimentConfig& cfg, SweepParam param,
                                             const std::vector<double>& values, bool keep_density,
                                             const std::vector<SweepPoint>& points);

}  // namespace d2dcrowd::io
