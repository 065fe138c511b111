#include "d2dcrowd/energy_kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define D2DCROWD_HAVE_AVX2_KERNEL 1
#include <immintrin.h>
#else
#define D2DCROWD_HAVE_AVX2_KERNEL 0
#endif

#include <stdexcept>

namespace d2dcrowd::kernels::detail {

#if D2DCROWD_HAVE_AVX2_KERNEL

bool cpu_has_avx2() { return __builtin_cpu_supports("avx2"); }

namespace {

// Division in masked-off lanes may produce inf/NaN; those lanes are replaced
// by zero through the blend, matching the scalar branch.
__attribute__((target("avx2"))) inline __m256d masked_term(__m256d power, __m256d amount,
                                                           __m256d rate) {
    const __m256d zero = _mm256_setzero_pd();
    const __m256d mask = _mm256_cmp_pd(amount, zero, _CMP_GT_OQ);
    const __m256d term = _mm256_mul_pd(power, _mm256_div_pd(amount, rate));
    return _mm256_blendv_pd(zero, term, mask);
}

}  // namespace

__attribute__((target("avx2"))) void offload_energy_avx2(const OffloadColumns& c,
                                                         std::span<double> total) {
    const std::size_t n = c.size();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d up = _mm256_mul_pd(
            _mm256_loadu_pd(&c.uplink_power[k]),
            _mm256_div_pd(_mm256_loadu_pd(&c.input_bits[k]), _mm256_loadu_pd(&c.uplink_rate[k])));
        const __m256d down = masked_term(_mm256_loadu_pd(&c.downlink_power[k]),
                                         _mm256_loadu_pd(&c.output_bits[k]),
                                         _mm256_loadu_pd(&c.downlink_rate[k]));
        const __m256d compute = masked_term(_mm256_loadu_pd(&c.exec_compute_power[k]),
                                            _mm256_loadu_pd(&c.cpu_cycles[k]),
                                            _mm256_loadu_pd(&c.exec_capacity[k]));
        const __m256d cellular = masked_term(_mm256_loadu_pd(&c.exec_cellular_power[k]),
                                             _mm256_loadu_pd(&c.cellular_bits[k]),
                                             _mm256_loadu_pd(&c.exec_cellular_rate[k]));
        const __m256d d2d = _mm256_add_pd(up, down);
        _mm256_storeu_pd(&total[k], _mm256_add_pd(_mm256_add_pd(d2d, compute), cellular));
    }
    offload_energy_scalar(c, total, k, n);
}

#else

bool cpu_has_avx2() { return false; }

void offload_energy_avx2(const OffloadColumns&, std::span<double>) {
    throw std::logic_error("avx2 kernel not built for this architecture");
}

#endif

}  // namespace d2dcrowd::kernels::detail
