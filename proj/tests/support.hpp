#pragma once

// Hand-built rounds for unit tests.

#include <cmath>
#include <initializer_list>
#include <utility>
#include <vector>

#include "d2dcrowd/model.hpp"
#include "d2dcrowd/scenario.hpp"

namespace testsupport {

using namespace d2dcrowd;

inline DeviceProfile device(DeviceId id, double load = 0.5, double cell_rate = 5e6) {
    DeviceProfile d;
    d.id = id;
    d.cpu_capacity = 2e9;
    d.load = load;
    d.compute_power = 0.9;
    d.cellular_tx_power = 0.6;
    d.cellular_rate = cell_rate;
    d.d2d_tx_power = 0.2;
    d.d2d_rx_power = 0.2;
    return d;
}

inline Task cpu_task(DeviceId owner, double bits, double density = 3000.0, double out_ratio = 0.2) {
    Task t;
    t.owner = owner;
    t.kind = TaskKind::PureCpu;
    t.input_bits = bits;
    t.cpu_cycles = density * bits;
    t.output_bits = out_ratio * bits;
    return t;
}

inline Task cell_task(DeviceId owner, double bits) {
    Task t;
    t.owner = owner;
    t.kind = TaskKind::PureCellular;
    t.input_bits = bits;
    t.cellular_bits = bits;
    return t;
}

struct LinkSpec {
    DeviceId a;
    DeviceId b;
    double rate;
};

inline Round make_round(std::vector<DeviceProfile> devices, std::vector<Task> tasks,
                        std::initializer_list<LinkSpec> links) {
    Round r;
    r.connectivity = ConnectivityGraph(devices.size());
    for (const auto& l : links) r.connectivity.add_link(l.a, l.b, l.rate);
    r.devices = std::move(devices);
    r.tasks = std::move(tasks);
    return r;
}

inline bool rel_close(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max(1.0, std::abs(b));
}

}  // namespace testsupport
