#include "d2dcrowd/schemes.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace d2dcrowd {

std::string_view to_string(Scheme s) {
    switch (s) {
        case Scheme::Optimal: return "optimal";
        case Scheme::Greedy: return "greedy";
        case Scheme::Reciprocal: return "reciprocal";
        case Scheme::Random: return "random";
        case Scheme::Local: return "local";
    }
    return "unknown";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
    for (auto s : {Scheme::Optimal, Scheme::Greedy, Scheme::Reciprocal, Scheme::Random, Scheme::Local})
        if (to_string(s) == name) return s;
    return std::nullopt;
}

std::vector<Scheme> default_schemes() {
    return {Scheme::Optimal, Scheme::Greedy, Scheme::Reciprocal, Scheme::Random};
}

OptimalSolution solve_optimal(const Round& round) {
    OptimalSolution s;
    s.graph = build_matching_graph(round);
    s.weighted = s.graph.to_weighted();
    s.solve = matching::solve_min_weight_perfect_matching(s.weighted);
    s.assignment = decode(s.graph, s.solve.matching);
    return s;
}

Assignment assign_optimal(const Round& round) { return solve_optimal(round).assignment; }

namespace {

std::vector<std::size_t> edges_by_weight(const MatchingGraph& g) {
    std::vector<std::size_t> order;
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
        const auto kind = g.edges[k].kind;
        if (kind != EdgeCase::Idle && kind != EdgeCase::Mirror) order.push_back(k);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        const auto& a = g.edges[x];
        const auto& b = g.edges[y];
        if (a.weight != b.weight) return a.weight < b.weight;
        return a.a != b.a ? a.a < b.a : a.b < b.b;
    });
    return order;
}

}  // namespace

Assignment assign_greedy(const Round& round) {
    const MatchingGraph g = build_matching_graph(round);
    std::vector<char> used(g.nodes.size(), 0);
    matching::Matching picked;
    for (auto k : edges_by_weight(g)) {
        const auto& e = g.edges[k];
        if (used[e.a] || used[e.b]) continue;
        used[e.a] = used[e.b] = 1;
        picked.edge_ids.push_back(k);
    }
    std::sort(picked.edge_ids.begin(), picked.edge_ids.end());
    return decode(g, picked);
}

Assignment assign_reciprocal(const Round& round) {
    const MatchingGraph g = build_matching_graph(round);
    std::vector<double> local(round.devices.size(), 0.0);
    std::vector<std::size_t> local_edge(round.devices.size(), 0);
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
        if (g.edges[k].kind == EdgeCase::Local) {
            local[g.edges[k].first] = g.edges[k].weight;
            local_edge[g.edges[k].first] = k;
        }
    }
    std::vector<char> paired(round.devices.size(), 0);
    matching::Matching picked;
    for (auto k : edges_by_weight(g)) {
        const auto& e = g.edges[k];
        if (e.kind != EdgeCase::Exchange) continue;
        if (!(e.first_energy < local[e.first] && e.second_energy < local[e.second])) continue;
        if (paired[e.first] || paired[e.second]) continue;
        paired[e.first] = paired[e.second] = 1;
        picked.edge_ids.push_back(k);
    }
    for (const auto& t : round.tasks)
        if (!paired[t.owner]) picked.edge_ids.push_back(local_edge[t.owner]);
    std::sort(picked.edge_ids.begin(), picked.edge_ids.end());
    return decode(g, picked);
}

Assignment assign_random(const Round& round, Rng& rng) {
    round.validate();
    const auto task_of = round.task_index();
    std::vector<DeviceId> owners;
    for (const auto& t : round.tasks) owners.push_back(t.owner);
    std::sort(owners.begin(), owners.end());
    shuffle(rng, std::span<DeviceId>(owners));

    std::vector<char> used(round.devices.size(), 0);
    Assignment a;
    std::vector<DeviceId> choices;
    for (DeviceId i : owners) {
        const Task& t = round.tasks[task_of[i]];
        choices.assign(1, i);
        if (t.offload_allowed) {
            for (const auto& nb : round.connectivity.neighbors(i))
                if (task_of[nb.device] < 0 && !used[nb.device]) choices.push_back(nb.device);
        }
        const DeviceId pick = choices[uniform_index(rng, choices.size())];
        double e;
        if (pick == i) {
            e = local_energy(round.devices[i], t).total;
        } else {
            used[pick] = 1;
            const double rate = *round.connectivity.rate(i, pick);
            e = offload_energy(round.devices[i], round.devices[pick], t, rate, rate).total;
        }
        a.placements.push_back({i, pick, e});
    }
    std::sort(a.placements.begin(), a.placements.end(),
              [](const Placement& x, const Placement& y) { return x.owner < y.owner; });
    for (const auto& p : a.placements) a.total_energy_j += p.energy_j;
    return a;
}

Assignment brute_force_assignment(const Round& round) {
    round.validate();
    const std::size_t n = round.devices.size();
    if (n > brute_force_device_cap) {
        std::ostringstream os;
        os << "brute force assignment limited to " << brute_force_device_cap << " devices, got " << n;
        throw matching::SizeLimitError(os.str());
    }
    const auto task_of = round.task_index();
    std::vector<DeviceId> owners;
    for (const auto& t : round.tasks) owners.push_back(t.owner);
    std::sort(owners.begin(), owners.end());

    auto task = [&](DeviceId d) -> const Task& { return round.tasks[task_of[d]]; };
    auto offload = [&](DeviceId i, DeviceId j, double rate) {
        return offload_energy(round.devices[i], round.devices[j], task(i), rate, rate).total;
    };

    std::vector<long> exec_of(n, -1);
    std::vector<char> busy(n, 0);
    std::vector<long> best_exec;
    double best = INFINITY;

    auto recurse = [&](auto&& self, std::size_t idx, double energy) -> void {
        if (idx == owners.size()) {
            if (energy < best) {
                best = energy;
                best_exec = exec_of;
            }
            return;
        }
        const DeviceId i = owners[idx];
        if (exec_of[i] != -1) {  // settled earlier as an exchange partner
            self(self, idx + 1, energy);
            return;
        }
        if (!busy[i]) {
            exec_of[i] = i;
            busy[i] = 1;
            self(self, idx + 1, energy + local_energy(round.devices[i], task(i)).total);
            busy[i] = 0;
            exec_of[i] = -1;
        }
        if (!task(i).offload_allowed) return;
        for (const auto& nb : round.connectivity.neighbors(i)) {
            const DeviceId j = nb.device;
            if (busy[j]) continue;
            if (task_of[j] < 0) {
                exec_of[i] = j;
                busy[j] = 1;
                self(self, idx + 1, energy + offload(i, j, nb.rate));
                busy[j] = 0;
                exec_of[i] = -1;
            } else if (exec_of[j] == -1 && task(j).offload_allowed && !busy[i]) {
                exec_of[i] = j;
                exec_of[j] = i;
                busy[i] = busy[j] = 1;
                self(self, idx + 1, energy + offload(i, j, nb.rate) + offload(j, i, nb.rate));
                busy[i] = busy[j] = 0;
                exec_of[i] = exec_of[j] = -1;
            }
        }
    };
    recurse(recurse, 0, 0.0);

    Assignment a;
    if (owners.empty()) return a;
    for (DeviceId i : owners) {
        const auto j = static_cast<DeviceId>(best_exec[i]);
        const double e = i == j ? local_energy(round.devices[i], task(i)).total
                                : offload(i, j, *round.connectivity.rate(i, j));
        a.placements.push_back({i, j, e});
    }
    a.total_energy_j = best;
    return a;
}

Assignment run_scheme(Scheme s, const Round& round, Rng& rng) {
    switch (s) {
        case Scheme::Optimal: return assign_optimal(round);
        case Scheme::Greedy: return assign_greedy(round);
        case Scheme::Reciprocal: return assign_reciprocal(round);
        case Scheme::Random: return assign_random(round, rng);
        case Scheme::Local: return all_local_assignment(round);
    }
    throw std::invalid_argument("unknown scheme");
}

double total_energy(const Assignment& a) { return a.total_energy_j; }

double saving_ratio(double scheme_energy_j, double all_local_energy_j) {
    if (!(all_local_energy_j > 0.0)) return 0.0;
    return 1.0 - scheme_energy_j / all_local_energy_j;
}

}  // namespace d2dcrowd
