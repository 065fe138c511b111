#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "d2dcrowd/model.hpp"
#include "d2dcrowd/scenario.hpp"

namespace d2dcrowd {

/// One task's placement. executor == owner means local execution.
struct Placement {
    DeviceId owner = 0;
    DeviceId executor = 0;
    double energy_j = 0.0;
};

/// Task-to-executor decisions for one round, ordered by owner.
struct Assignment {
    std::vector<Placement> placements;
    double total_energy_j = 0.0;

    std::size_t task_count() const { return placements.size(); }
    std::size_t local_count() const;
    /// Tasks sent to an idle device.
    std::size_t offload_count() const;
    /// Tasks swapped between two task owners (two per exchanging pair).
    std::size_t exchange_count() const;
};

/// Lists every violated assignment constraint: links must exist, every
/// task is placed exactly once, each device executes at most one task,
/// cross-assignments between owners are mutual, and decisions are binary
/// (no repeated owner/executor pair). Empty means feasible.
std::vector<std::string> feasibility_violations(const Assignment& a, const Round& round);

/// Objective recomputed from the energy model, ignoring the stored
/// per-placement energies.
double objective_energy(const Assignment& a, const Round& round);

/// Every owner runs its own task.
Assignment all_local_assignment(const Round& round);

}  // namespace d2dcrowd
