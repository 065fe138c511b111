#pragma once

// Assignment schemes for one round: the matching-based optimum, three
// baselines, and an exhaustive oracle that does not go through the
// matching reduction.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "d2dcrowd/assignment.hpp"
#include "d2dcrowd/matchgraph.hpp"
#include "d2dcrowd/matching.hpp"
#include "d2dcrowd/rng.hpp"
#include "d2dcrowd/scenario.hpp"

namespace d2dcrowd {

enum class Scheme { Optimal, Greedy, Reciprocal, Random, Local };

std::string_view to_string(Scheme s);
/// Accepts the names printed by to_string; nullopt otherwise.
std::optional<Scheme> parse_scheme(std::string_view name);
/// optimal, greedy, reciprocal, random.
std::vector<Scheme> default_schemes();

/// Full optimal pipeline output, kept for certificate checks.
struct OptimalSolution {
    MatchingGraph graph;
    matching::WeightedGraph weighted;
    matching::SolveResult solve;
    Assignment assignment;

    matching::CertificateReport verify() const { return solve.verify(weighted); }
};

OptimalSolution solve_optimal(const Round& round);
Assignment assign_optimal(const Round& round);

/// Single ascending-weight pass over the local, offload and exchange edges
/// of the matching graph, taking every edge whose endpoints are still free.
Assignment assign_greedy(const Round& round);

/// Exchanges only between owner pairs where each side beats its own local
/// energy; pairs taken cheapest-total first, everyone else stays local.
Assignment assign_reciprocal(const Round& round);

/// Owners in shuffled order each pick uniformly among themselves and
/// their still-unused idle neighbours.
Assignment assign_random(const Round& round, Rng& rng);

inline constexpr std::size_t brute_force_device_cap = 8;

/// Exhaustive search over per-owner choices (local, offload to an idle
/// neighbour, swap with an owner neighbour) under the assignment
/// constraints. Throws SizeLimitError above the device cap.
Assignment brute_force_assignment(const Round& round);

Assignment run_scheme(Scheme s, const Round& round, Rng& rng);

double total_energy(const Assignment& a);

/// 1 - scheme / all_local, or 0 when there is no energy to save.
double saving_ratio(double scheme_energy_j, double all_local_energy_j);

}  // namespace d2dcrowd
