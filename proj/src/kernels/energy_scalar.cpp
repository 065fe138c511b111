#include "d2dcrowd/energy_kernels.hpp"

namespace d2dcrowd::kernels::detail {

void offload_energy_scalar(const OffloadColumns& c, std::span<double> total, std::size_t begin,
                           std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
        double d2d = c.uplink_power[k] * (c.input_bits[k] / c.uplink_rate[k]);
        if (c.output_bits[k] > 0.0)
            d2d += c.downlink_power[k] * (c.output_bits[k] / c.downlink_rate[k]);
        const double compute = c.cpu_cycles[k] > 0.0
                                   ? c.exec_compute_power[k] * (c.cpu_cycles[k] / c.exec_capacity[k])
                                   : 0.0;
        const double cellular =
            c.cellular_bits[k] > 0.0
                ? c.exec_cellular_power[k] * (c.cellular_bits[k] / c.exec_cellular_rate[k])
                : 0.0;
        total[k] = (d2d + compute) + cellular;
    }
}

}  // namespace d2dcrowd::kernels::detail
