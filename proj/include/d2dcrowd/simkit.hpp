#pragma once

// Multi-round experiment driver and summary statistics.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "d2dcrowd/incentive.hpp"
#include "d2dcrowd/scenario.hpp"
#include "d2dcrowd/schemes.hpp"

namespace d2dcrowd {

enum class OutputFormat { Csv, Json };

/// A scheme failed on one round; the message names both.
class RoundError : public std::runtime_error {
public:
    RoundError(std::size_t round, Scheme scheme, const std::string& what);
    std::size_t round() const { return round_; }
    Scheme scheme() const { return scheme_; }

private:
    std::size_t round_;
    Scheme scheme_;
};

struct ExperimentConfig {
    ScenarioConfig scenario;
    std::size_t rounds = 100;
    std::vector<Scheme> schemes = default_schemes();
    bool incentive = false;
    std::optional<IncentiveConfig> incentive_params;  // defaults from the scenario when unset
    double confidence_level = 0.9;
    std::string output_dir = "out";
    OutputFormat format = OutputFormat::Csv;
    std::size_t jobs = 1;
    // Wall-clock solve times make outputs non-reproducible, so they are
    // only measured on request.
    bool timing = false;
    // Check the blossom dual certificate of every optimal solve.
    bool verify_certificates = false;

    void validate() const;
    IncentiveConfig effective_incentive() const;
};

struct RoundRecord {
    std::size_t round = 0;
    Scheme scheme = Scheme::Optimal;
    std::size_t tasks = 0;
    double energy_j = 0.0;
    double all_local_j = 0.0;
    double saving_ratio = 0.0;
    std::optional<double> solve_ms;
    std::size_t n_local = 0;
    std::size_t n_offload = 0;
    std::size_t n_exchange = 0;
    std::uint64_t input_hash = 0;
    std::optional<bool> certificate_ok;  // optimal scheme with verify_certificates only
    std::size_t violations = 0;          // feasibility violations found
};

struct SchemeSummary {
    Scheme scheme = Scheme::Optimal;
    std::size_t rounds = 0;
    double mean_saving_ratio = 0.0;
    double ci_half_width = 0.0;
    double aggregate_saving_ratio = 0.0;  // 1 - sum(energy) / sum(all-local)
    double mean_energy_j = 0.0;
    double mean_tasks = 0.0;
    std::optional<double> mean_solve_ms;
    std::optional<double> p50_solve_ms;
    std::optional<double> p95_solve_ms;
};

struct ExperimentSummary {
    std::vector<SchemeSummary> schemes;  // in configured order

    const SchemeSummary& at(Scheme s) const;
};

struct IncentiveTrace {
    // Ledger totals after each round: X_cpu, Y_cpu, X_cell, Y_cell.
    std::vector<std::array<double, 4>> totals;
    // Tasks of owners that were not allowed to offload but were offloaded.
    std::size_t ineligible_offloads = 0;
    // Ledger after the last round, credited with the first configured
    // scheme's assignments.
    CreditLedger ledger;
};

struct ExperimentResult {
    std::vector<RoundRecord> records;  // sorted by (round, configured scheme order)
    ExperimentSummary summary;
    std::optional<IncentiveTrace> incentive;
};

/// Rounds for `cfg` with mobility, loads, tasks and connectivity redrawn
/// per round from streams derived from cfg.rng_seed.
std::vector<Round> generate_rounds(const ScenarioConfig& cfg, std::size_t rounds);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Pure function of the records; run_experiment uses it too.
ExperimentSummary summarize(const std::vector<RoundRecord>& records,
                            const std::vector<Scheme>& schemes, double confidence_level);

enum class SweepParam { Devices, TaskFrequency };

const char* to_string(SweepParam p);
std::optional<SweepParam> parse_sweep_param(std::string_view name);

struct SweepPoint {
    double value = 0.0;
    std::uint64_t seed = 0;
    ExperimentSummary summary;
};

/// One experiment per value. Each value runs with a seed derived from the
/// base seed and the value's position. With keep_density, a device sweep
/// scales the area so devices per square meter stay at the base config's.
std::vector<SweepPoint> sweep(const ExperimentConfig& cfg, SweepParam param,
                              const std::vector<double>& values, bool keep_density = false);

}  // namespace d2dcrowd
