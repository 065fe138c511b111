#pragma once

// Randomized round generation: device placement and mobility, D2D link
// rates, connectivity, and task arrivals.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "d2dcrowd/model.hpp"
#include "d2dcrowd/rng.hpp"

namespace d2dcrowd {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Range {
    double min = 0.0;
    double max = 0.0;
};

struct Area {
    double width = 500.0;
    double height = 500.0;
};

struct ProcessingDensity {
    double pure_cpu = 3000.0;  // cycles/bit
    double hybrid = 1000.0;
};

/// Mix of task kinds: pure-cpu, pure-cellular, hybrid.
struct TaskTypeMix {
    double pure_cpu = 1.0 / 3.0;
    double pure_cellular = 1.0 / 3.0;
    double hybrid = 1.0 / 3.0;
};

/// Defaults describe a 50-device crowd in a 500 m square with an even
/// mix of task kinds.
struct ScenarioConfig {
    std::uint32_t device_count = 50;
    Area area;
    double max_d2d_distance = 200.0;      // m
    double d2d_bandwidth = 20e6;          // Hz
    double path_loss_exponent = 3.0;
    double noise = 1e-8;
    double task_frequency = 0.5;
    TaskTypeMix task_type_mix;
    Range input_size_range{500.0 * 8192.0, 2000.0 * 8192.0};  // bits (KB = 1024 B)
    ProcessingDensity processing_density;
    double output_ratio = 0.2;
    double hybrid_cellular_ratio = 0.1;
    Range cellular_rate_range{1e6, 10e6};  // bits/s
    Range load_range{0.0, 0.7};
    Range cpu_capacity_range{2e9, 2e9};    // cycles/s
    double compute_power = 0.9;            // W
    double cellular_tx_power = 0.6;
    double d2d_tx_power = 0.2;
    double d2d_rx_power = 0.2;
    std::uint64_t rng_seed = 1;
    Range mobility_speed_range{0.0, 30.0};  // m/round

    /// Throws ConfigError describing the first violated constraint.
    void validate() const;

    /// Shortest distance used in the path-loss term.
    static constexpr double min_link_distance = 1.0;
};

struct Link {
    DeviceId a = 0;  // a < b
    DeviceId b = 0;
    double rate = 0.0;  // bits/s, same both directions
};

struct Neighbor {
    DeviceId device = 0;
    double rate = 0.0;
};

/// Feasible D2D links for one round. Symmetric, no self-links.
class ConnectivityGraph {
public:
    ConnectivityGraph() = default;
    explicit ConnectivityGraph(std::size_t device_count);

    /// Adds the undirected link (a, b); rejects self-links, duplicates and
    /// nonpositive rates.
    void add_link(DeviceId a, DeviceId b, double rate);

    std::size_t device_count() const { return adjacency_.size(); }
    std::span<const Link> links() const { return links_; }
    /// Neighbors sorted by device id.
    std::span<const Neighbor> neighbors(DeviceId d) const { return adjacency_.at(d); }
    std::optional<double> rate(DeviceId a, DeviceId b) const;
    bool connected(DeviceId a, DeviceId b) const { return rate(a, b).has_value(); }

private:
    std::vector<Link> links_;
    std::vector<std::vector<Neighbor>> adjacency_;
};

/// Everything a scheme sees for one round. Device ids equal their index.
struct Round {
    std::vector<DeviceProfile> devices;
    std::vector<Task> tasks;
    ConnectivityGraph connectivity;

    /// Index into `tasks` per device, or -1 for a task-less device.
    std::vector<int> task_index() const;

    /// Structural checks: dense ids, one task per owner, known owners.
    void validate() const;
};

/// Stable 64-bit digest of every field a scheme can read.
std::uint64_t input_hash(const Round& round);

std::vector<DeviceProfile> generate_devices(const ScenarioConfig& cfg, Rng& rng);

/// Shannon rate W log2(1 + P^d d^-alpha / N0). Distances below 1 m are
/// evaluated at 1 m; distances <= 0 or beyond the D2D range throw.
double d2d_rate(double dist, const ScenarioConfig& cfg);

ConnectivityGraph build_connectivity(std::span<const DeviceProfile> devices,
                                     const ScenarioConfig& cfg);

std::vector<Task> generate_tasks(std::span<const DeviceProfile> devices, const ScenarioConfig& cfg,
                                 Rng& rng);

/// One mobility step: each device moves a uniform distance from the speed
/// range in a uniform direction, reflecting off the area edges. Loads are
/// redrawn from the load range.
std::vector<DeviceProfile> step_mobility(std::span<const DeviceProfile> devices,
                                         const ScenarioConfig& cfg, Rng& rng);

}  // namespace d2dcrowd
