#include "d2dcrowd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "d2dcrowd/assignment.hpp"
#include "d2dcrowd/matchgraph.hpp"
#include "d2dcrowd/schemes.hpp"

namespace d2dcrowd::verify {

namespace {

constexpr std::size_t kMaxFailures = 10;

bool close(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max(1.0, std::abs(b));
}

void note(Report& r, const std::string& msg) {
    if (r.failures.size() < kMaxFailures) r.failures.push_back(msg);
}

}  // namespace

Round random_small_round(Rng& rng, std::size_t max_devices) {
    if (max_devices < 1) throw std::invalid_argument("max_devices must be >= 1");
    ScenarioConfig cfg;
    cfg.device_count = static_cast<std::uint32_t>(1 + uniform_index(rng, max_devices));
    const double side = uniform(rng, 50.0, 400.0);
    cfg.area = {side, side};
    cfg.task_frequency = uniform(rng, 0.2, 1.0);
    cfg.rng_seed = rng();

    Rng inner(cfg.rng_seed);
    Round round;
    round.devices = generate_devices(cfg, inner);
    round.tasks = generate_tasks(round.devices, cfg, inner);
    round.connectivity = build_connectivity(round.devices, cfg);
    for (auto& t : round.tasks)
        if (bernoulli(rng, 0.1)) t.offload_allowed = false;
    return round;
}

matching::WeightedGraph random_even_graph(Rng& rng, std::size_t max_vertices) {
    if (max_vertices < 2) throw std::invalid_argument("max_vertices must be >= 2");
    const std::size_t n = 2 * (1 + uniform_index(rng, max_vertices / 2));
    const bool integral = bernoulli(rng, 0.3);
    auto weight = [&] {
        return integral ? static_cast<double>(uniform_index(rng, 6)) : uniform(rng, 0.0, 100.0);
    };
    std::vector<matching::Vertex> perm(n);
    std::iota(perm.begin(), perm.end(), 0u);
    shuffle(rng, std::span<matching::Vertex>(perm));
    std::vector<std::vector<char>> has(n, std::vector<char>(n, 0));
    matching::WeightedGraph g(n);
    for (std::size_t i = 0; i < n; i += 2) {
        g.add_edge(perm[i], perm[i + 1], weight());
        has[perm[i]][perm[i + 1]] = has[perm[i + 1]][perm[i]] = 1;
    }
    const double density = uniform(rng, 0.1, 0.9);
    for (matching::Vertex u = 0; u < n; ++u)
        for (matching::Vertex v = u + 1; v < n; ++v)
            if (!has[u][v] && bernoulli(rng, density)) g.add_edge(u, v, weight());
    return g;
}

Report run(const Options& opt) {
    if (opt.max_devices < 1 || opt.max_devices > brute_force_device_cap)
        throw std::invalid_argument("max_devices must lie in [1, " +
                                    std::to_string(brute_force_device_cap) + "]");
    if (opt.max_graph_vertices < 2 || opt.max_graph_vertices > matching::brute_force_vertex_cap)
        throw std::invalid_argument("max_graph_vertices must lie in [2, " +
                                    std::to_string(matching::brute_force_vertex_cap) + "]");
    Report rep;
    Rng rng(derive_seed(opt.seed, 0x7e, 0));
    for (std::size_t i = 0; i < opt.instances; ++i) {
        const Round round = random_small_round(rng, opt.max_devices);
        ++rep.instances;

        MatchingGraph g = build_matching_graph(round);
        if (opt.inject_fault != 0.0) g.perturb_local_weights(opt.inject_fault);
        const auto w = g.to_weighted();
        const auto sol = matching::solve_min_weight_perfect_matching(w);
        const Assignment got = decode(g, sol.matching);
        const Assignment want = brute_force_assignment(round);

        if (close(got.total_energy_j, want.total_energy_j, opt.rel_tol)) {
            ++rep.oracle_agree;
        } else {
            std::ostringstream os;
            os.precision(17);
            os << "instance " << i << ": optimal " << got.total_energy_j << " J, brute force "
               << want.total_energy_j << " J";
            note(rep, os.str());
        }
        const auto cert = sol.verify(w);
        if (cert.ok) ++rep.certificate_ok;
        else note(rep, "instance " + std::to_string(i) + ": certificate: " + cert.failure);
        const auto viol = feasibility_violations(got, round);
        if (viol.empty()) ++rep.feasible;
        else note(rep, "instance " + std::to_string(i) + ": infeasible: " + viol.front());
    }

    Rng grng(derive_seed(opt.seed, 0x7f, 0));
    for (std::size_t i = 0; i < opt.graphs; ++i) {
        const auto g = random_even_graph(grng, opt.max_graph_vertices);
        ++rep.graphs;
        const auto sol = matching::solve_min_weight_perfect_matching(g);
        const auto want = matching::brute_force_min_matching(g);
        if (close(sol.matching.total_weight, want.total_weight, opt.rel_tol)) {
            ++rep.graph_agree;
        } else {
            std::ostringstream os;
            os.precision(17);
            os << "graph " << i << ": blossom " << sol.matching.total_weight << ", brute force "
               << want.total_weight;
            note(rep, os.str());
        }
        const auto cert = sol.verify(g);
        if (cert.ok) ++rep.graph_certificate_ok;
        else note(rep, "graph " + std::to_string(i) + ": certificate: " + cert.failure);
    }
    return rep;
}

}  // namespace d2dcrowd::verify
