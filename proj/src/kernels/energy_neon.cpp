#include "d2dcrowd/energy_kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>
#endif

#include <stdexcept>

namespace d2dcrowd::kernels::detail {

#if defined(__aarch64__)

namespace {

inline float64x2_t masked_term(float64x2_t power, float64x2_t amount, float64x2_t rate) {
    const float64x2_t zero = vdupq_n_f64(0.0);
    const uint64x2_t mask = vcgtq_f64(amount, zero);
    const float64x2_t term = vmulq_f64(power, vdivq_f64(amount, rate));
    return vbslq_f64(mask, term, zero);
}

}  // namespace

void offload_energy_neon(const OffloadColumns& c, std::span<double> total) {
    const std::size_t n = c.size();
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        const float64x2_t up =
            vmulq_f64(vld1q_f64(&c.uplink_power[k]),
                      vdivq_f64(vld1q_f64(&c.input_bits[k]), vld1q_f64(&c.uplink_rate[k])));
        const float64x2_t down = masked_term(vld1q_f64(&c.downlink_power[k]),
                                             vld1q_f64(&c.output_bits[k]),
                                             vld1q_f64(&c.downlink_rate[k]));
        const float64x2_t compute = masked_term(vld1q_f64(&c.exec_compute_power[k]),
                                                vld1q_f64(&c.cpu_cycles[k]),
                                                vld1q_f64(&c.exec_capacity[k]));
        const float64x2_t cellular = masked_term(vld1q_f64(&c.exec_cellular_power[k]),
                                                 vld1q_f64(&c.cellular_bits[k]),
                                                 vld1q_f64(&c.exec_cellular_rate[k]));
        const float64x2_t d2d = vaddq_f64(up, down);
        vst1q_f64(&total[k], vaddq_f64(vaddq_f64(d2d, compute), cellular));
    }
    offload_energy_scalar(c, total, k, n);
}

#else

void offload_energy_neon(const OffloadColumns&, std::span<double>) {
    throw std::logic_error("neon kernel not built for this architecture");
}

#endif

}  // namespace d2dcrowd::kernels::detail
