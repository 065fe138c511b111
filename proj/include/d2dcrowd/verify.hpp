#pragma once

// Oracle-equivalence and certificate suites on small random instances.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "d2dcrowd/matching.hpp"
#include "d2dcrowd/rng.hpp"
#include "d2dcrowd/scenario.hpp"

namespace d2dcrowd::verify {

struct Options {
    std::size_t instances = 500;
    std::size_t max_devices = 8;
    std::size_t graphs = 200;
    std::size_t max_graph_vertices = 12;
    std::uint64_t seed = 1;
    double rel_tol = 1e-9;
    // Adds this much to every local edge before solving; 0 disables.
    double inject_fault = 0.0;
};

struct Report {
    std::size_t instances = 0;
    std::size_t oracle_agree = 0;
    std::size_t certificate_ok = 0;
    std::size_t feasible = 0;
    std::size_t graphs = 0;
    std::size_t graph_agree = 0;
    std::size_t graph_certificate_ok = 0;
    std::vector<std::string> failures;  // first few only

    bool passed() const {
        return oracle_agree == instances && certificate_ok == instances && feasible == instances &&
               graph_agree == graphs && graph_certificate_ok == graphs;
    }
};

/// 1..max_devices devices in a random square, random task frequency, the
/// default task mix and about one owner in ten pinned to local execution.
Round random_small_round(Rng& rng, std::size_t max_devices);

/// Even vertex count in [2, max_vertices], a random perfect matching to
/// keep it feasible, plus random extra edges. Some weights are integers
/// so ties occur.
matching::WeightedGraph random_even_graph(Rng& rng, std::size_t max_vertices);

Report run(const Options& opt);

}  // namespace d2dcrowd::verify
