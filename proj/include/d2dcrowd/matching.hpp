#pragma once

// Minimum-weight perfect matching on general graphs.
//
// min_weight_perfect_matching runs Edmonds' primal-dual blossom algorithm
// (O(V^3)) and returns, alongside the matching, the dual solution it ended
// with. verify_certificate checks that dual solution against the matching
// using only the graph, so optimality of large instances can be confirmed
// without trusting the solver's internal state.
//
// brute_force_min_matching enumerates every perfect matching and is meant
// as a test oracle for graphs of up to 16 vertices.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace d2dcrowd::matching {

using Vertex = std::uint32_t;

struct Edge {
    Vertex u = 0;
    Vertex v = 0;
    double weight = 0.0;
};

/// Undirected graph with finite nonnegative weights, no self-loops and no
/// parallel edges.
class WeightedGraph {
public:
    explicit WeightedGraph(std::size_t vertex_count = 0) : vertex_count_(vertex_count) {}

    /// Returns the new edge's index. Throws std::invalid_argument on
    /// self-loops, out-of-range endpoints or bad weights. Duplicate edges
    /// are reported by validate().
    std::size_t add_edge(Vertex u, Vertex v, double weight);

    std::size_t vertex_count() const { return vertex_count_; }
    const std::vector<Edge>& edges() const { return edges_; }
    double max_weight() const;

    /// Full invariant check including duplicate detection.
    void validate() const;

private:
    std::size_t vertex_count_;
    std::vector<Edge> edges_;
};

struct Matching {
    std::vector<std::size_t> edge_ids;  // indices into WeightedGraph::edges(), ascending
    double total_weight = 0.0;

    /// Partner per vertex, or -1 when exposed.
    std::vector<long> mates(const WeightedGraph& g) const;
};

/// Dual solution of the perfect-matching LP
///
///   max  sum_v y_v - sum_B z_B (|B| - 1) / 2
///   s.t. y_u + y_v - sum_{B contains u,v} z_B <= w_uv,   z_B >= 0
///
/// over odd vertex sets B (the blossoms left at termination).
struct DualCertificate {
    struct OddSet {
        std::vector<Vertex> members;  // ascending
        double dual = 0.0;
    };
    std::vector<double> vertex_dual;
    std::vector<OddSet> odd_sets;

    double objective() const;
};

struct CertificateReport {
    bool ok = false;
    double primal = 0.0;
    double dual = 0.0;
    double worst_edge_violation = 0.0;  // max(0, -reduced cost) over all edges
    double worst_matched_slack = 0.0;   // max |reduced cost| over matched edges
    std::string failure;                // first failed check, empty when ok
};

/// Checks primal feasibility (perfect matching), dual feasibility, and
/// complementary slackness, each within `tolerance` (absolute, in weight
/// units). Also requires the two objectives to agree within
/// tolerance * vertex_count.
CertificateReport verify_certificate(const WeightedGraph& g, const Matching& m,
                                     const DualCertificate& cert, double tolerance);

/// Tolerance used by the solver's own verify(): 1e-9 scaled by the largest
/// weight (at least 1).
double default_tolerance(const WeightedGraph& g);

class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SizeLimitError : public std::length_error {
public:
    using std::length_error::length_error;
};

struct SolveResult {
    Matching matching;
    DualCertificate certificate;
    std::size_t augmentations = 0;   // augmenting paths found after warm start
    std::size_t warm_start_pairs = 0;

    CertificateReport verify(const WeightedGraph& g) const {
        return verify_certificate(g, matching, certificate, default_tolerance(g));
    }

    /// Plain-text dump of the final duals and blossom structure.
    void dump(std::ostream& os) const;
};

/// Throws InfeasibleError when the graph has no perfect matching.
/// Deterministic: equal inputs in equal edge order give equal outputs.
SolveResult solve_min_weight_perfect_matching(const WeightedGraph& g);

Matching min_weight_perfect_matching(const WeightedGraph& g);

inline constexpr std::size_t brute_force_vertex_cap = 16;

/// Exhaustive search. Throws SizeLimitError above the vertex cap and
/// InfeasibleError when no perfect matching exists.
Matching brute_force_min_matching(const WeightedGraph& g);

}  // namespace d2dcrowd::matching
