#include "d2dcrowd/model.hpp"

#include <cmath>
#include <sstream>

namespace d2dcrowd {

double distance(Position a, Position b) { return std::hypot(a.x - b.x, a.y - b.y); }

const char* to_string(TaskKind kind) {
    switch (kind) {
        case TaskKind::PureCpu: return "pure-cpu";
        case TaskKind::PureCellular: return "pure-cellular";
        case TaskKind::Hybrid: return "hybrid";
    }
    return "unknown";
}

namespace {

[[noreturn]] void invalid(const std::string& what, DeviceId id) {
    std::ostringstream os;
    os << what << " (device " << id << ")";
    throw std::invalid_argument(os.str());
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

void validate(const DeviceProfile& dev) {
    if (!(dev.load >= 0.0 && dev.load <= 1.0)) invalid("load outside [0, 1]", dev.id);
    if (!(dev.cpu_capacity > 0.0) || !std::isfinite(dev.cpu_capacity))
        invalid("cpu capacity must be positive", dev.id);
    if (!(dev.cellular_rate > 0.0) || !std::isfinite(dev.cellular_rate))
        invalid("cellular rate must be positive", dev.id);
    if (!finite_nonneg(dev.compute_power) || !finite_nonneg(dev.cellular_tx_power) ||
        !finite_nonneg(dev.d2d_tx_power) || !finite_nonneg(dev.d2d_rx_power))
        invalid("powers must be finite and nonnegative", dev.id);
}

void validate(const Task& task) {
    if (!(task.input_bits > 0.0) || !std::isfinite(task.input_bits))
        invalid("task input size must be positive", task.owner);
    if (!finite_nonneg(task.cpu_cycles) || !finite_nonneg(task.output_bits) ||
        !finite_nonneg(task.cellular_bits))
        invalid("task demands must be finite and nonnegative", task.owner);
    if (task.kind == TaskKind::PureCpu && task.cellular_bits != 0.0)
        invalid("pure-cpu task with cellular traffic", task.owner);
    if (task.kind == TaskKind::PureCellular && task.cpu_cycles != 0.0)
        invalid("pure-cellular task with cpu cycles", task.owner);
}

namespace {

double compute_term(const DeviceProfile& exec, const Task& task) {
    if (task.cpu_cycles <= 0.0) return 0.0;
    const double capacity = exec.available_capacity();
    if (!(capacity > 0.0)) {
        std::ostringstream os;
        os << "device " << exec.id << " has no spare cpu capacity for the task of device "
           << task.owner;
        throw CapacityError(os.str());
    }
    return exec.compute_power * (task.cpu_cycles / capacity);
}

double cellular_term(const DeviceProfile& exec, const Task& task) {
    if (task.cellular_bits <= 0.0) return 0.0;
    if (!(exec.cellular_rate > 0.0)) {
        std::ostringstream os;
        os << "device " << exec.id << " has no cellular rate";
        throw RateError(os.str());
    }
    return exec.cellular_tx_power * (task.cellular_bits / exec.cellular_rate);
}

}  // namespace

EnergyBreakdown local_energy(const DeviceProfile& dev, const Task& task) {
    if (task.owner != dev.id) {
        std::ostringstream os;
        os << "task of device " << task.owner << " evaluated locally on device " << dev.id;
        throw std::invalid_argument(os.str());
    }
    return EnergyBreakdown::make(compute_term(dev, task), cellular_term(dev, task), 0.0);
}

EnergyBreakdown offload_energy(const DeviceProfile& owner, const DeviceProfile& executor,
                               const Task& task, double rate_up, double rate_down) {
    if (owner.id == executor.id)
        throw std::invalid_argument("offload_energy: owner and executor are the same device");
    if (task.owner != owner.id)
        throw std::invalid_argument("offload_energy: task does not belong to owner");
    if (!(rate_up > 0.0)) throw RateError("offload_energy: owner-to-executor rate must be positive");
    double d2d = (owner.d2d_tx_power + executor.d2d_rx_power) * (task.input_bits / rate_up);
    if (task.output_bits > 0.0) {
        if (!(rate_down > 0.0))
            throw RateError("offload_energy: executor-to-owner rate must be positive");
        d2d += (executor.d2d_tx_power + owner.d2d_rx_power) * (task.output_bits / rate_down);
    }
    return EnergyBreakdown::make(compute_term(executor, task), cellular_term(executor, task), d2d);
}

}  // namespace d2dcrowd
