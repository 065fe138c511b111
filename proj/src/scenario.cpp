#include "d2dcrowd/scenario.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

namespace d2dcrowd {

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw ConfigError(msg); }

void check_range(const Range& r, const char* name, double lo_bound = -INFINITY) {
    if (!std::isfinite(r.min) || !std::isfinite(r.max) || r.min > r.max)
        config_error(std::string(name) + ": need finite min <= max");
    if (r.min < lo_bound) config_error(std::string(name) + ": minimum out of domain");
}

void check_prob(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) config_error(std::string(name) + " must lie in [0, 1]");
}

void check_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) config_error(std::string(name) + " must be positive");
}

void check_nonneg(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) config_error(std::string(name) + " must be >= 0");
}

}  // namespace

void ScenarioConfig::validate() const {
    check_positive(area.width, "area.width");
    check_positive(area.height, "area.height");
    check_positive(max_d2d_distance, "max_d2d_distance");
    check_positive(d2d_bandwidth, "d2d_bandwidth");
    check_positive(path_loss_exponent, "path_loss_exponent");
    check_positive(noise, "noise");
    check_prob(task_frequency, "task_frequency");
    check_prob(task_type_mix.pure_cpu, "task_type_mix.pure_cpu");
    check_prob(task_type_mix.pure_cellular, "task_type_mix.pure_cellular");
    check_prob(task_type_mix.hybrid, "task_type_mix.hybrid");
    const double mix_sum =
        task_type_mix.pure_cpu + task_type_mix.pure_cellular + task_type_mix.hybrid;
    if (std::abs(mix_sum - 1.0) > 1e-9) config_error("task_type_mix must sum to 1");
    check_range(input_size_range, "input_size_range", 0.0);
    if (!(input_size_range.min > 0.0)) config_error("input_size_range: minimum must be positive");
    check_nonneg(processing_density.pure_cpu, "processing_density.pure_cpu");
    check_nonneg(processing_density.hybrid, "processing_density.hybrid");
    check_nonneg(output_ratio, "output_ratio");
    check_nonneg(hybrid_cellular_ratio, "hybrid_cellular_ratio");
    check_range(cellular_rate_range, "cellular_rate_range", 0.0);
    if (!(cellular_rate_range.min > 0.0)) config_error("cellular_rate_range: minimum must be positive");
    check_range(load_range, "load_range", 0.0);
    if (load_range.max > 1.0) config_error("load_range: maximum must be <= 1");
    check_range(cpu_capacity_range, "cpu_capacity_range", 0.0);
    if (!(cpu_capacity_range.min > 0.0)) config_error("cpu_capacity_range: minimum must be positive");
    check_nonneg(compute_power, "compute_power");
    check_nonneg(cellular_tx_power, "cellular_tx_power");
    check_nonneg(d2d_tx_power, "d2d_tx_power");
    check_nonneg(d2d_rx_power, "d2d_rx_power");
    check_range(mobility_speed_range, "mobility_speed_range", 0.0);
    if (max_d2d_distance < min_link_distance)
        config_error("max_d2d_distance must be at least the 1 m minimum link distance");
}

ConnectivityGraph::ConnectivityGraph(std::size_t device_count) : adjacency_(device_count) {}

void ConnectivityGraph::add_link(DeviceId a, DeviceId b, double rate) {
    if (a == b) throw std::invalid_argument("self-link in connectivity graph");
    if (a >= adjacency_.size() || b >= adjacency_.size())
        throw std::out_of_range("link endpoint outside device range");
    if (!(rate > 0.0) || !std::isfinite(rate))
        throw std::invalid_argument("link rate must be positive and finite");
    if (a > b) std::swap(a, b);
    if (connected(a, b)) throw std::invalid_argument("duplicate link in connectivity graph");
    links_.push_back({a, b, rate});
    auto insert = [](std::vector<Neighbor>& adj, Neighbor n) {
        auto at = std::lower_bound(adj.begin(), adj.end(), n.device,
                                   [](const Neighbor& x, DeviceId d) { return x.device < d; });
        adj.insert(at, n);
    };
    insert(adjacency_[a], {b, rate});
    insert(adjacency_[b], {a, rate});
}

std::optional<double> ConnectivityGraph::rate(DeviceId a, DeviceId b) const {
    if (a >= adjacency_.size() || b >= adjacency_.size()) return std::nullopt;
    const auto& adj = adjacency_[a];
    auto it = std::lower_bound(adj.begin(), adj.end(), b,
                               [](const Neighbor& x, DeviceId d) { return x.device < d; });
    if (it == adj.end() || it->device != b) return std::nullopt;
    return it->rate;
}

std::vector<int> Round::task_index() const {
    std::vector<int> idx(devices.size(), -1);
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        const auto owner = tasks[t].owner;
        if (owner < idx.size()) idx[owner] = static_cast<int>(t);
    }
    return idx;
}

void Round::validate() const {
    for (std::size_t i = 0; i < devices.size(); ++i) {
        if (devices[i].id != i) throw std::invalid_argument("device ids must equal their index");
        d2dcrowd::validate(devices[i]);
    }
    if (connectivity.device_count() != devices.size())
        throw std::invalid_argument("connectivity graph size does not match device list");
    std::vector<char> seen(devices.size(), 0);
    for (const auto& t : tasks) {
        if (t.owner >= devices.size()) {
            std::ostringstream os;
            os << "task references unknown device " << t.owner;
            throw std::invalid_argument(os.str());
        }
        if (seen[t.owner]) {
            std::ostringstream os;
            os << "device " << t.owner << " owns more than one task";
            throw std::invalid_argument(os.str());
        }
        seen[t.owner] = 1;
        d2dcrowd::validate(t);
    }
}

namespace {

struct Fnv {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    void bytes(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    }
    void real(double v) { bytes(std::bit_cast<std::uint64_t>(v)); }
};

}  // namespace

std::uint64_t input_hash(const Round& round) {
    Fnv f;
    f.bytes(round.devices.size());
    for (const auto& d : round.devices) {
        f.bytes(d.id);
        for (double v : {d.cpu_capacity, d.load, d.compute_power, d.cellular_tx_power,
                         d.cellular_rate, d.d2d_tx_power, d.d2d_rx_power, d.position.x,
                         d.position.y})
            f.real(v);
    }
    f.bytes(round.tasks.size());
    for (const auto& t : round.tasks) {
        f.bytes(t.owner);
        f.bytes(static_cast<std::uint64_t>(t.kind) | (t.offload_allowed ? 0x100u : 0u));
        for (double v : {t.input_bits, t.cpu_cycles, t.output_bits, t.cellular_bits}) f.real(v);
    }
    f.bytes(round.connectivity.links().size());
    for (const auto& l : round.connectivity.links()) {
        f.bytes(l.a);
        f.bytes(l.b);
        f.real(l.rate);
    }
    return f.h;
}

std::vector<DeviceProfile> generate_devices(const ScenarioConfig& cfg, Rng& rng) {
    cfg.validate();
    std::vector<DeviceProfile> out;
    out.reserve(cfg.device_count);
    for (std::uint32_t i = 0; i < cfg.device_count; ++i) {
        DeviceProfile d;
        d.id = i;
        d.position.x = uniform(rng, 0.0, cfg.area.width);
        d.position.y = uniform(rng, 0.0, cfg.area.height);
        d.cpu_capacity = uniform(rng, cfg.cpu_capacity_range.min, cfg.cpu_capacity_range.max);
        d.load = uniform(rng, cfg.load_range.min, cfg.load_range.max);
        d.cellular_rate = uniform(rng, cfg.cellular_rate_range.min, cfg.cellular_rate_range.max);
        d.compute_power = cfg.compute_power;
        d.cellular_tx_power = cfg.cellular_tx_power;
        d.d2d_tx_power = cfg.d2d_tx_power;
        d.d2d_rx_power = cfg.d2d_rx_power;
        out.push_back(d);
    }
    return out;
}

double d2d_rate(double dist, const ScenarioConfig& cfg) {
    if (!(dist > 0.0) || dist > cfg.max_d2d_distance) {
        std::ostringstream os;
        os << "d2d_rate: distance " << dist << " m outside (0, " << cfg.max_d2d_distance << "]";
        throw std::out_of_range(os.str());
    }
    const double d = std::max(dist, ScenarioConfig::min_link_distance);
    const double snr = cfg.d2d_tx_power * std::pow(d, -cfg.path_loss_exponent) / cfg.noise;
    return cfg.d2d_bandwidth * std::log2(1.0 + snr);
}

ConnectivityGraph build_connectivity(std::span<const DeviceProfile> devices,
                                     const ScenarioConfig& cfg) {
    ConnectivityGraph g(devices.size());
    for (std::size_t i = 0; i < devices.size(); ++i) {
        for (std::size_t j = i + 1; j < devices.size(); ++j) {
            const double dist = distance(devices[i].position, devices[j].position);
            if (dist > cfg.max_d2d_distance) continue;
            const double rate = d2d_rate(std::max(dist, ScenarioConfig::min_link_distance), cfg);
            g.add_link(static_cast<DeviceId>(i), static_cast<DeviceId>(j), rate);
        }
    }
    return g;
}

std::vector<Task> generate_tasks(std::span<const DeviceProfile> devices, const ScenarioConfig& cfg,
                                 Rng& rng) {
    cfg.validate();
    std::vector<Task> out;
    for (const auto& d : devices) {
        if (!bernoulli(rng, cfg.task_frequency)) continue;
        Task t;
        t.owner = d.id;
        const double u = uniform01(rng);
        if (u < cfg.task_type_mix.pure_cpu)
            t.kind = TaskKind::PureCpu;
        else if (u < cfg.task_type_mix.pure_cpu + cfg.task_type_mix.pure_cellular)
            t.kind = TaskKind::PureCellular;
        else
            t.kind = TaskKind::Hybrid;
        // Bits and cycles are whole counts; this keeps ledger sums exact.
        t.input_bits = std::max(1.0, std::round(uniform(rng, cfg.input_size_range.min,
                                                        cfg.input_size_range.max)));
        const double output = std::round(cfg.output_ratio * t.input_bits);
        switch (t.kind) {
            case TaskKind::PureCpu:
                t.cpu_cycles = std::round(cfg.processing_density.pure_cpu * t.input_bits);
                t.output_bits = output;
                break;
            case TaskKind::PureCellular:
                t.cellular_bits = t.input_bits;
                break;
            case TaskKind::Hybrid:
                t.cpu_cycles = std::round(cfg.processing_density.hybrid * t.input_bits);
                t.cellular_bits = std::round(cfg.hybrid_cellular_ratio * t.input_bits);
                t.output_bits = output;
                break;
        }
        out.push_back(t);
    }
    return out;
}

namespace {

double reflect(double v, double extent) {
    // Fold v into [0, extent] as if bouncing off both walls.
    const double period = 2.0 * extent;
    double m = std::fmod(v, period);
    if (m < 0.0) m += period;
    return m <= extent ? m : period - m;
}

}  // namespace

std::vector<DeviceProfile> step_mobility(std::span<const DeviceProfile> devices,
                                         const ScenarioConfig& cfg, Rng& rng) {
    cfg.validate();
    std::vector<DeviceProfile> out(devices.begin(), devices.end());
    for (auto& d : out) {
        const double step = uniform(rng, cfg.mobility_speed_range.min, cfg.mobility_speed_range.max);
        const double heading = uniform(rng, 0.0, 2.0 * std::numbers::pi);
        if (step > 0.0) {
            d.position.x = reflect(d.position.x + step * std::cos(heading), cfg.area.width);
            d.position.y = reflect(d.position.y + step * std::sin(heading), cfg.area.height);
        }
        d.load = uniform(rng, cfg.load_range.min, cfg.load_range.max);
    }
    return out;
}

}  // namespace d2dcrowd
