#pragma once

// Device, task and energy model for one offloading round.
//
// Units throughout: bits, CPU cycles, seconds, watts, joules, meters.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace d2dcrowd {

using DeviceId = std::uint32_t;

struct Position {
    double x = 0.0;
    double y = 0.0;
};

double distance(Position a, Position b);

struct DeviceProfile {
    DeviceId id = 0;
    double cpu_capacity = 0.0;       // Z, cycles/s
    double load = 0.0;               // delta in [0, 1]
    double compute_power = 0.0;      // rho^c, W
    double cellular_tx_power = 0.0;  // P^b, W
    double cellular_rate = 0.0;      // D, bits/s
    double d2d_tx_power = 0.0;       // P^d, W
    double d2d_rx_power = 0.0;       // P^r, W
    Position position;

    /// Cycles per second left over for a crowd task: (1 - load) * Z.
    double available_capacity() const { return (1.0 - load) * cpu_capacity; }
};

enum class TaskKind : std::uint8_t { PureCpu, PureCellular, Hybrid };

const char* to_string(TaskKind kind);

struct Task {
    DeviceId owner = 0;
    double input_bits = 0.0;      // I
    double cpu_cycles = 0.0;      // Psi
    double output_bits = 0.0;     // O
    double cellular_bits = 0.0;   // B
    TaskKind kind = TaskKind::PureCpu;
    // Cleared by the incentive filter; a task that may not offload runs locally.
    bool offload_allowed = true;
};

struct EnergyBreakdown {
    double compute = 0.0;
    double cellular = 0.0;
    double d2d_transfer = 0.0;
    double total = 0.0;

    // The summation order is shared with the batched kernels so results
    // agree bit-for-bit.
    static EnergyBreakdown make(double compute, double cellular, double d2d_transfer) {
        return {compute, cellular, d2d_transfer, (d2d_transfer + compute) + cellular};
    }
};

/// Raised when a task needs CPU cycles on a device with no spare capacity.
class CapacityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised when a transfer is required over a link with nonpositive rate.
class RateError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

void validate(const DeviceProfile& dev);
void validate(const Task& task);

/// Energy for the owner running its own task: CPU time at the spare
/// capacity plus cellular airtime at the device's own rate.
EnergyBreakdown local_energy(const DeviceProfile& dev, const Task& task);

/// Energy for running `task` on `executor`: input shipped over D2D at
/// `rate_up`, output returned at `rate_down`, then CPU and cellular
/// work charged at the executor's capacity, powers and cellular rate.
EnergyBreakdown offload_energy(const DeviceProfile& owner, const DeviceProfile& executor,
                               const Task& task, double rate_up, double rate_down);

}  // namespace d2dcrowd
