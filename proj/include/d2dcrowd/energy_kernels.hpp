#pragma once

// Batched offload-energy evaluation over structure-of-arrays columns.
//
// Every candidate (owner, executor) pair in a round needs one offload
// energy; the matching-graph builder packs them into columns and calls
// offload_energy_batch. Variants:
//
//   scalar  reference kernel, always available
//   avx2    4 doubles per step, x86-64 with runtime CPU check
//   neon    2 doubles per step, aarch64
//
// All variants evaluate the same expression in the same order without
// fused multiply-add, so they agree bit-for-bit with each other and with
// offload_energy() in model.hpp.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace d2dcrowd::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa);

/// Column views; all spans must have the same length.
struct OffloadColumns {
    std::span<const double> input_bits;
    std::span<const double> cpu_cycles;
    std::span<const double> output_bits;
    std::span<const double> cellular_bits;
    std::span<const double> uplink_power;    // owner tx + executor rx
    std::span<const double> downlink_power;  // executor tx + owner rx
    std::span<const double> uplink_rate;
    std::span<const double> downlink_rate;
    std::span<const double> exec_compute_power;
    std::span<const double> exec_capacity;
    std::span<const double> exec_cellular_power;
    std::span<const double> exec_cellular_rate;

    std::size_t size() const { return input_bits.size(); }
};

/// Owning storage for OffloadColumns.
struct OffloadBatch {
    std::vector<double> input_bits, cpu_cycles, output_bits, cellular_bits;
    std::vector<double> uplink_power, downlink_power, uplink_rate, downlink_rate;
    std::vector<double> exec_compute_power, exec_capacity, exec_cellular_power,
        exec_cellular_rate;

    void reserve(std::size_t n);
    std::size_t size() const { return input_bits.size(); }
    OffloadColumns columns() const;
};

/// Instruction sets usable on this machine, scalar first.
std::vector<Isa> available_isas();

/// Best available ISA. Setting D2DCROWD_FORCE_SCALAR=1 pins the scalar kernel.
Isa active_isa();

/// Writes the total offload energy of each row to `total`.
/// Rows with zero cycles/output/cellular skip the matching term, so their
/// capacity or rate column may be zero. Callers validate the other rows.
void offload_energy_batch(const OffloadColumns& cols, std::span<double> total, Isa isa);
void offload_energy_batch(const OffloadColumns& cols, std::span<double> total);

namespace detail {
void offload_energy_scalar(const OffloadColumns& cols, std::span<double> total,
                           std::size_t begin, std::size_t end);
void offload_energy_avx2(const OffloadColumns& cols, std::span<double> total);
void offload_energy_neon(const OffloadColumns& cols, std::span<double> total);
bool cpu_has_avx2();
}  // namespace detail

}  // namespace d2dcrowd::kernels
