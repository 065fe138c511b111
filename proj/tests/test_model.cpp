#include "doctest.h"

#include <cmath>

#include "d2dcrowd/model.hpp"
#include "support.hpp"

using namespace d2dcrowd;
using testsupport::device;

namespace {

// Reference evaluation of the offload formula written out term by term.
double reference_offload(const DeviceProfile& i, const DeviceProfile& j, const Task& t, double up,
                         double down) {
    const double transfer_in = (i.d2d_tx_power + j.d2d_rx_power) * t.input_bits / up;
    const double transfer_out = t.output_bits > 0 ? (j.d2d_tx_power + i.d2d_rx_power) * t.output_bits / down : 0.0;
    const double cj = (1.0 - j.load) * j.cpu_capacity;
    const double exec_cpu = j.compute_power * t.cpu_cycles / cj;
    const double exec_cell = j.cellular_tx_power * t.cellular_bits / j.cellular_rate;
    return transfer_in + transfer_out + exec_cpu + exec_cell;
}

}  // namespace

TEST_CASE("local energy of an empty task is zero") {
    Task t;
    t.input_bits = 1;
    auto e = local_energy(device(0), t);
    CHECK(e.total == 0.0);
    CHECK(e.d2d_transfer == 0.0);
}

TEST_CASE("local compute energy at half load") {
    Task t;
    t.input_bits = 8e6;
    t.cpu_cycles = 3000.0 * 8e6;
    auto e = local_energy(device(0, 0.5, 5e6), t);
    CHECK(e.compute == doctest::Approx(0.9 * 2.4e10 / 1e9).epsilon(1e-12));
    CHECK(e.compute == doctest::Approx(21.6).epsilon(1e-12));
    CHECK(e.cellular == 0.0);
}

TEST_CASE("local cellular energy") {
    Task t;
    t.input_bits = 8e6;
    t.cellular_bits = 8e6;
    auto e = local_energy(device(0, 0.5, 5e6), t);
    CHECK(e.cellular == doctest::Approx(0.96).epsilon(1e-12));
    CHECK(e.compute == 0.0);
}

TEST_CASE("local energy errors") {
    Task t;
    t.input_bits = 10;
    t.cpu_cycles = 10;
    auto d = device(0, 1.0);
    CHECK_THROWS_AS(local_energy(d, t), CapacityError);
    t.owner = 3;
    CHECK_THROWS_AS(local_energy(device(0), t), std::invalid_argument);
}

TEST_CASE("offload of a transfer-only task") {
    Task t;
    t.input_bits = 8e6;
    auto e = offload_energy(device(0), device(1), t, 2e7, 2e7);
    CHECK(e.d2d_transfer == doctest::Approx(0.16).epsilon(1e-12));
    CHECK(e.total == doctest::Approx(0.16).epsilon(1e-12));
}

TEST_CASE("offload of a one-bit task is one transfer term") {
    Task t;
    t.input_bits = 1;
    const double rate = 3.7e7;
    auto e = offload_energy(device(0), device(1), t, rate, rate);
    CHECK(e.total == doctest::Approx(0.4 / rate).epsilon(1e-15));
}

TEST_CASE("hybrid offload matches the term-by-term reference") {
    auto i = device(0, 0.2, 3e6);
    auto j = device(1, 0.35, 7.5e6);
    j.compute_power = 0.8;
    j.d2d_tx_power = 0.25;
    i.d2d_rx_power = 0.15;
    Task t;
    t.owner = 0;
    t.kind = TaskKind::Hybrid;
    t.input_bits = 1.2e7;
    t.cpu_cycles = 1000.0 * 1.2e7;
    t.cellular_bits = 1.2e6;
    t.output_bits = 2.4e6;
    const double up = 4.1e7, down = 3.3e7;
    auto e = offload_energy(i, j, t, up, down);
    const double ref = reference_offload(i, j, t, up, down);
    CHECK(std::abs(e.total - ref) <= 1e-12 * ref);
    CHECK(std::abs(e.total - (e.compute + e.cellular + e.d2d_transfer)) <= 1e-9 * e.total);
}

TEST_CASE("offload errors") {
    Task t;
    t.input_bits = 100;
    t.output_bits = 10;
    t.cpu_cycles = 5;
    CHECK_THROWS_AS(offload_energy(device(0), device(1), t, 0.0, 1e6), RateError);
    CHECK_THROWS_AS(offload_energy(device(0), device(1), t, 1e6, 0.0), RateError);
    CHECK_THROWS_AS(offload_energy(device(0), device(1, 1.0), t, 1e6, 1e6), CapacityError);
    CHECK_THROWS_AS(offload_energy(device(0), device(0), t, 1e6, 1e6), std::invalid_argument);
    t.output_bits = 0;
    CHECK_NOTHROW(offload_energy(device(0), device(1), t, 1e6, 0.0));
}

TEST_CASE("energies are linear in each task field") {
    auto i = device(0, 0.1, 2e6);
    auto j = device(1, 0.4, 9e6);
    Task t;
    t.owner = 0;
    t.kind = TaskKind::Hybrid;
    t.input_bits = 5e6;
    t.cpu_cycles = 5e9;
    t.output_bits = 1e6;
    t.cellular_bits = 5e5;
    const double k = 3.0;
    const auto base_l = local_energy(i, t);
    const auto base_o = offload_energy(i, j, t, 4e7, 4e7);

    Task s = t;
    s.cpu_cycles *= k;
    CHECK(local_energy(i, s).compute == doctest::Approx(k * base_l.compute).epsilon(1e-12));
    CHECK(offload_energy(i, j, s, 4e7, 4e7).compute == doctest::Approx(k * base_o.compute).epsilon(1e-12));
    s = t;
    s.cellular_bits *= k;
    CHECK(local_energy(i, s).cellular == doctest::Approx(k * base_l.cellular).epsilon(1e-12));
    CHECK(offload_energy(i, j, s, 4e7, 4e7).cellular == doctest::Approx(k * base_o.cellular).epsilon(1e-12));
    s = t;
    s.input_bits *= k;
    s.output_bits *= k;
    CHECK(offload_energy(i, j, s, 4e7, 4e7).d2d_transfer ==
          doctest::Approx(k * base_o.d2d_transfer).epsilon(1e-12));
}

TEST_CASE("offload energy is monotone in rates, capacity and cellular rate") {
    auto i = device(0);
    Task t;
    t.owner = 0;
    t.kind = TaskKind::Hybrid;
    t.input_bits = 5e6;
    t.cpu_cycles = 5e9;
    t.output_bits = 1e6;
    t.cellular_bits = 5e5;
    auto j = device(1, 0.5, 4e6);
    const double e0 = offload_energy(i, j, t, 3e7, 3e7).total;
    CHECK(offload_energy(i, j, t, 6e7, 3e7).total <= e0);
    CHECK(offload_energy(i, j, t, 3e7, 6e7).total <= e0);
    auto faster = j;
    faster.load = 0.1;
    CHECK(offload_energy(i, faster, t, 3e7, 3e7).total <= e0);
    auto better_cell = j;
    better_cell.cellular_rate = 8e6;
    CHECK(offload_energy(i, better_cell, t, 3e7, 3e7).total <= e0);
}

TEST_CASE("validation rejects malformed devices and tasks") {
    auto d = device(0);
    d.load = 1.5;
    CHECK_THROWS_AS(validate(d), std::invalid_argument);
    d = device(0);
    d.cellular_rate = 0;
    CHECK_THROWS_AS(validate(d), std::invalid_argument);
    Task t;
    t.input_bits = 0;
    CHECK_THROWS_AS(validate(t), std::invalid_argument);
    t = testsupport::cpu_task(0, 100);
    t.cellular_bits = 5;
    CHECK_THROWS_AS(validate(t), std::invalid_argument);
    t = testsupport::cell_task(0, 100);
    t.cpu_cycles = 5;
    CHECK_THROWS_AS(validate(t), std::invalid_argument);
}
