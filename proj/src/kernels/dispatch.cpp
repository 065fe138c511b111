#include <cstdlib>
#include <stdexcept>
#include <string>

#include "d2dcrowd/energy_kernels.hpp"

namespace d2dcrowd::kernels {

std::string_view to_string(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
        case Isa::Neon: return "neon";
    }
    return "unknown";
}

void OffloadBatch::reserve(std::size_t n) {
    for (auto* v : {&input_bits, &cpu_cycles, &output_bits, &cellular_bits, &uplink_power,
                    &downlink_power, &uplink_rate, &downlink_rate, &exec_compute_power,
                    &exec_capacity, &exec_cellular_power, &exec_cellular_rate})
        v->reserve(n);
}

OffloadColumns OffloadBatch::columns() const {
    return {input_bits,     cpu_cycles,         output_bits,   cellular_bits,
            uplink_power,   downlink_power,     uplink_rate,   downlink_rate,
            exec_compute_power, exec_capacity,  exec_cellular_power, exec_cellular_rate};
}

std::vector<Isa> available_isas() {
    std::vector<Isa> out{Isa::Scalar};
    if (detail::cpu_has_avx2()) out.push_back(Isa::Avx2);
#if defined(__aarch64__)
    out.push_back(Isa::Neon);
#endif
    return out;
}

Isa active_isa() {
    static const Isa isa = [] {
        if (const char* env = std::getenv("D2DCROWD_FORCE_SCALAR"); env && std::string(env) == "1")
            return Isa::Scalar;
        return available_isas().back();
    }();
    return isa;
}

void offload_energy_batch(const OffloadColumns& cols, std::span<double> total, Isa isa) {
    const std::size_t n = cols.size();
    for (auto s : {cols.cpu_cycles, cols.output_bits, cols.cellular_bits, cols.uplink_power,
                   cols.downlink_power, cols.uplink_rate, cols.downlink_rate,
                   cols.exec_compute_power, cols.exec_capacity, cols.exec_cellular_power,
                   cols.exec_cellular_rate})
        if (s.size() != n) throw std::invalid_argument("offload_energy_batch: column length mismatch");
    if (total.size() != n) throw std::invalid_argument("offload_energy_batch: output length mismatch");

    switch (isa) {
        case Isa::Scalar: detail::offload_energy_scalar(cols, total, 0, n); return;
        case Isa::Avx2:
            if (!detail::cpu_has_avx2()) throw std::runtime_error("avx2 not supported by this cpu");
            detail::offload_energy_avx2(cols, total);
            return;
        case Isa::Neon: detail::offload_energy_neon(cols, total); return;
    }
}

void offload_energy_batch(const OffloadColumns& cols, std::span<double> total) {
    offload_energy_batch(cols, total, active_isa());
}

}  // namespace d2dcrowd::kernels
