#pragma once

// Resource tit-for-tat credits. A device may consume CPU cycles and
// cellular bits from others only in proportion to what it has given:
//
//   alpha_cpu  * X_cpu  <= beta_cpu  + Y_cpu
//   alpha_cell * X_cell <= beta_cell + Y_cell
//
// X counts resources received, Y resources contributed. The betas are
// allowances in resource units: beta = fraction * allowance.

#include <cstddef>
#include <vector>

#include "d2dcrowd/assignment.hpp"
#include "d2dcrowd/scenario.hpp"

namespace d2dcrowd {

struct IncentiveConfig {
    double alpha_cpu = 1.0;       // [0, 1]
    double alpha_cell = 1.0;      // [0, 1]
    double beta_cpu_fraction = 1.0;   // [0, 1]
    double beta_cell_fraction = 1.0;  // [0, 1]
    double cpu_allowance = 0.0;   // cycles
    double cell_allowance = 0.0;  // bits

    void validate() const;
};

/// Allowances of one average task under `cfg`: mix-weighted mean cycles
/// and mean cellular bits of a task with mid-range input size.
IncentiveConfig default_incentive(const ScenarioConfig& cfg);

struct Credit {
    double received_cpu = 0.0;     // X_cpu
    double contributed_cpu = 0.0;  // Y_cpu
    double received_cell = 0.0;    // X_cell
    double contributed_cell = 0.0; // Y_cell
};

class CreditLedger {
public:
    CreditLedger() = default;
    CreditLedger(std::size_t device_count, const IncentiveConfig& cfg);

    std::size_t size() const { return credits_.size(); }
    const Credit& credit(DeviceId d) const { return credits_.at(d); }
    const IncentiveConfig& config() const { return cfg_; }
    double beta_cpu() const { return cfg_.beta_cpu_fraction * cfg_.cpu_allowance; }
    double beta_cell() const { return cfg_.beta_cell_fraction * cfg_.cell_allowance; }

    /// Both tit-for-tat constraints hold for `d` right now.
    bool eligible(DeviceId d) const;

    /// Both constraints would still hold after `d` additionally received
    /// `cycles` and `cell_bits`.
    bool eligible_after(DeviceId d, double cycles, double cell_bits) const;

    /// Credits every cross-device placement: the owner receives, the
    /// executor contributes. Local executions change nothing.
    void record(const Assignment& a, const Round& round);

    double total_received_cpu() const;
    double total_contributed_cpu() const;
    double total_received_cell() const;
    double total_contributed_cell() const;

private:
    IncentiveConfig cfg_;
    std::vector<Credit> credits_;
};

bool eligible(DeviceId d, const CreditLedger& ledger);

/// Copy of `round` where owners that could not afford to offload their
/// current task have it pinned to local execution.
Round filter_round(const Round& round, const CreditLedger& ledger);

}  // namespace d2dcrowd
