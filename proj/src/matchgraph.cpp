#include "d2dcrowd/matchgraph.hpp"

#include <algorithm>
#include <sstream>

#include "d2dcrowd/energy_kernels.hpp"

namespace d2dcrowd {

const char* to_string(EdgeCase c) {
    switch (c) {
        case EdgeCase::Local: return "local";
        case EdgeCase::Offload: return "offload";
        case EdgeCase::Exchange: return "exchange";
        case EdgeCase::Idle: return "idle";
        case EdgeCase::Mirror: return "mirror";
    }
    return "unknown";
}

matching::WeightedGraph MatchingGraph::to_weighted() const {
    matching::WeightedGraph g(nodes.size());
    for (const auto& e : edges) g.add_edge(e.a, e.b, e.weight);
    return g;
}

void MatchingGraph::perturb_local_weights(double amount) {
    for (auto& e : edges)
        if (e.kind == EdgeCase::Local) e.weight += amount;
}

namespace {

struct OffloadRequest {
    std::size_t edge;   // index into the unsorted edge list
    bool second;        // fills second_energy (exchange reverse direction)
    DeviceId owner;
    DeviceId executor;
    double rate;
};

void push_offload(kernels::OffloadBatch& batch, const DeviceProfile& owner,
                  const DeviceProfile& exec, const Task& task, double rate) {
    if (task.cpu_cycles > 0.0 && !(exec.available_capacity() > 0.0)) {
        std::ostringstream os;
        os << "device " << exec.id << " has no spare cpu capacity for the task of device "
           << task.owner;
        throw CapacityError(os.str());
    }
    batch.input_bits.push_back(task.input_bits);
    batch.cpu_cycles.push_back(task.cpu_cycles);
    batch.output_bits.push_back(task.output_bits);
    batch.cellular_bits.push_back(task.cellular_bits);
    batch.uplink_power.push_back(owner.d2d_tx_power + exec.d2d_rx_power);
    batch.downlink_power.push_back(exec.d2d_tx_power + owner.d2d_rx_power);
    batch.uplink_rate.push_back(rate);
    batch.downlink_rate.push_back(rate);
    batch.exec_compute_power.push_back(exec.compute_power);
    batch.exec_capacity.push_back(exec.available_capacity());
    batch.exec_cellular_power.push_back(exec.cellular_tx_power);
    batch.exec_cellular_rate.push_back(exec.cellular_rate);
}

}  // namespace

MatchingGraph build_matching_graph(const Round& round) {
    round.validate();
    const std::size_t n = round.devices.size();
    const auto task_of = round.task_index();
    auto has_task = [&](DeviceId d) { return task_of[d] >= 0; };
    auto task = [&](DeviceId d) -> const Task& { return round.tasks[task_of[d]]; };

    MatchingGraph g;
    g.real_node_.assign(n, -1);

    // Pruning: keep owners and idle devices next to at least one owner.
    std::vector<DeviceId> kept;
    for (DeviceId d = 0; d < n; ++d) {
        bool keep = has_task(d);
        if (!keep) {
            for (const auto& nb : round.connectivity.neighbors(d))
                if (has_task(nb.device)) {
                    keep = true;
                    break;
                }
        }
        if (keep) {
            g.real_node_[d] = static_cast<long>(g.nodes.size());
            g.nodes.push_back({NodeKind::Real, d});
            kept.push_back(d);
        }
    }
    std::vector<long> mate_node(n, -1);
    for (DeviceId d : kept) {
        mate_node[d] = static_cast<long>(g.nodes.size());
        g.nodes.push_back({has_task(d) ? NodeKind::Replica : NodeKind::IdleDummy, d});
    }

    auto node = [](long idx) { return static_cast<std::uint32_t>(idx); };
    std::vector<MatchEdge> edges;
    std::vector<OffloadRequest> requests;
    kernels::OffloadBatch batch;

    for (DeviceId i : kept) {
        if (has_task(i)) {
            const double el = local_energy(round.devices[i], task(i)).total;
            edges.push_back({node(g.real_node_[i]), node(mate_node[i]), el, EdgeCase::Local, i, i, el, 0.0});
        } else {
            edges.push_back({node(g.real_node_[i]), node(mate_node[i]), 0.0, EdgeCase::Idle, i, i, 0.0, 0.0});
        }
        for (const auto& nb : round.connectivity.neighbors(i)) {
            const DeviceId j = nb.device;
            if (j <= i) continue;
            const bool oi = has_task(i);
            const bool oj = has_task(j);
            if (!oi && !oj) continue;
            const std::uint32_t a = node(g.real_node_[i]);
            const std::uint32_t b = node(g.real_node_[j]);
            if (oi && oj) {
                if (!task(i).offload_allowed || !task(j).offload_allowed) continue;
                edges.push_back({node(mate_node[i]), node(mate_node[j]), 0.0, EdgeCase::Mirror, i, j, 0.0, 0.0});
                const std::size_t slot = edges.size();
                edges.push_back({a, b, 0.0, EdgeCase::Exchange, i, j, 0.0, 0.0});
                requests.push_back({slot, false, i, j, nb.rate});
                push_offload(batch, round.devices[i], round.devices[j], task(i), nb.rate);
                requests.push_back({slot, true, j, i, nb.rate});
                push_offload(batch, round.devices[j], round.devices[i], task(j), nb.rate);
            } else {
                const DeviceId owner = oi ? i : j;
                const DeviceId exec = oi ? j : i;
                if (!task(owner).offload_allowed) continue;
                edges.push_back({node(mate_node[i]), node(mate_node[j]), 0.0, EdgeCase::Mirror, i, j, 0.0, 0.0});
                const std::size_t slot = edges.size();
                edges.push_back({a, b, 0.0, EdgeCase::Offload, owner, exec, 0.0, 0.0});
                requests.push_back({slot, false, owner, exec, nb.rate});
                push_offload(batch, round.devices[owner], round.devices[exec], task(owner), nb.rate);
            }
        }
    }

    std::vector<double> energy(batch.size());
    kernels::offload_energy_batch(batch.columns(), energy);
    for (std::size_t r = 0; r < requests.size(); ++r) {
        auto& e = edges[requests[r].edge];
        if (requests[r].second)
            e.second_energy = energy[r];
        else
            e.first_energy = energy[r];
    }
    for (auto& e : edges) {
        if (e.kind == EdgeCase::Offload) e.weight = e.first_energy;
        if (e.kind == EdgeCase::Exchange) e.weight = e.first_energy + e.second_energy;
    }

    std::sort(edges.begin(), edges.end(), [](const MatchEdge& x, const MatchEdge& y) {
        return x.a != y.a ? x.a < y.a : x.b < y.b;
    });
    g.edges = std::move(edges);
    return g;
}

Assignment decode(const MatchingGraph& g, const matching::Matching& m) {
    std::vector<char> matched(g.nodes.size(), 0);
    Assignment out;
    for (auto k : m.edge_ids) {
        if (k >= g.edges.size()) throw std::invalid_argument("decode: unknown edge in matching");
        const auto& e = g.edges[k];
        if (matched[e.a] || matched[e.b])
            throw std::invalid_argument("decode: edges of the matching share a node");
        matched[e.a] = matched[e.b] = 1;
        switch (e.kind) {
            case EdgeCase::Local:
            case EdgeCase::Offload:
                out.placements.push_back({e.first, e.second, e.first_energy});
                break;
            case EdgeCase::Exchange:
                out.placements.push_back({e.first, e.second, e.first_energy});
                out.placements.push_back({e.second, e.first, e.second_energy});
                break;
            case EdgeCase::Idle:
            case EdgeCase::Mirror:
                continue;
        }
        out.total_energy_j += e.weight;
    }
    for (const auto& node : g.nodes) {
        if (node.kind != NodeKind::Replica) continue;
        const long real = g.real_node(node.device);
        if (!matched[real]) {
            std::ostringstream os;
            os << "decode: task owner " << node.device << " is not covered by the matching";
            throw CoverageError(os.str());
        }
    }
    std::sort(out.placements.begin(), out.placements.end(),
              [](const Placement& x, const Placement& y) { return x.owner < y.owner; });
    return out;
}

}  // namespace d2dcrowd
