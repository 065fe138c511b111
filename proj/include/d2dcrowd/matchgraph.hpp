#pragma once

// Matching graph for one round.
//
// Starting from the D2D connectivity graph:
//   * task-less devices with no task-owning neighbour are pruned;
//   * every task owner i gains a replica i' joined by a "local" edge of
//     weight E_i^l;
//   * every surviving task-less device gains an idle-dummy mate joined by a
//     zero-weight edge, so "cover every task owner" becomes a perfect
//     matching problem;
//   * owner-idle links carry E_ij^o ("offload"), owner-owner links carry
//     E_ij^o + E_ji^o ("exchange"); idle-idle links are dropped;
//   * each offload or exchange edge (i, j) is mirrored by a zero-weight
//     edge between the mates of i and j, so the mates of a matched pair
//     can cover each other.
//
// A minimum-weight perfect matching of this graph decodes to a
// minimum-energy assignment.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "d2dcrowd/assignment.hpp"
#include "d2dcrowd/matching.hpp"
#include "d2dcrowd/scenario.hpp"

namespace d2dcrowd {

enum class NodeKind : std::uint8_t { Real, Replica, IdleDummy };
enum class EdgeCase : std::uint8_t { Local, Offload, Exchange, Idle, Mirror };

const char* to_string(EdgeCase c);

struct MatchNode {
    NodeKind kind = NodeKind::Real;
    DeviceId device = 0;
};

struct MatchEdge {
    std::uint32_t a = 0;  // node indices, a < b
    std::uint32_t b = 0;
    double weight = 0.0;
    EdgeCase kind = EdgeCase::Local;
    // Local/Idle: first == second. Offload: owner, executor.
    // Exchange: the two owners, first < second. Mirror: the two devices
    // whose mates it joins, first < second.
    DeviceId first = 0;
    DeviceId second = 0;
    double first_energy = 0.0;   // energy of first's task on its executor
    double second_energy = 0.0;  // Exchange only: second's task on first
};

class CoverageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MatchingGraph {
public:
    std::vector<MatchNode> nodes;
    std::vector<MatchEdge> edges;  // sorted by (a, b)

    /// Real node of a device, or -1 when pruned.
    long real_node(DeviceId d) const {
        return d < real_node_.size() ? real_node_[d] : -1;
    }

    matching::WeightedGraph to_weighted() const;

    /// Adds `amount` to every local edge weight. Fault injection for
    /// negative-control checks only.
    void perturb_local_weights(double amount);

    friend MatchingGraph build_matching_graph(const Round& round);

private:
    std::vector<long> real_node_;
};

MatchingGraph build_matching_graph(const Round& round);

/// Throws CoverageError when a task owner is left unmatched and
/// std::invalid_argument when `m` is not a matching of `g`.
Assignment decode(const MatchingGraph& g, const matching::Matching& m);

}  // namespace d2dcrowd
