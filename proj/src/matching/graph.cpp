#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "d2dcrowd/matching.hpp"

namespace d2dcrowd::matching {

std::size_t WeightedGraph::add_edge(Vertex u, Vertex v, double weight) {
    if (u == v) throw std::invalid_argument("self-loop in weighted graph");
    if (u >= vertex_count_ || v >= vertex_count_)
        throw std::invalid_argument("edge endpoint outside vertex range");
    if (!std::isfinite(weight) || weight < 0.0)
        throw std::invalid_argument("edge weight must be finite and nonnegative");
    edges_.push_back({u, v, weight});
    return edges_.size() - 1;
}

double WeightedGraph::max_weight() const {
    double w = 0.0;
    for (const auto& e : edges_) w = std::max(w, e.weight);
    return w;
}

void WeightedGraph::validate() const {
    std::vector<std::pair<Vertex, Vertex>> keys;
    keys.reserve(edges_.size());
    for (const auto& e : edges_) {
        if (e.u == e.v) throw std::invalid_argument("self-loop in weighted graph");
        if (e.u >= vertex_count_ || e.v >= vertex_count_)
            throw std::invalid_argument("edge endpoint outside vertex range");
        if (!std::isfinite(e.weight) || e.weight < 0.0)
            throw std::invalid_argument("edge weight must be finite and nonnegative");
        keys.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
    }
    std::sort(keys.begin(), keys.end());
    if (auto it = std::adjacent_find(keys.begin(), keys.end()); it != keys.end()) {
        std::ostringstream os;
        os << "duplicate edge (" << it->first << ", " << it->second << ")";
        throw std::invalid_argument(os.str());
    }
}

std::vector<long> Matching::mates(const WeightedGraph& g) const {
    std::vector<long> mate(g.vertex_count(), -1);
    for (auto k : edge_ids) {
        const auto& e = g.edges().at(k);
        mate[e.u] = e.v;
        mate[e.v] = e.u;
    }
    return mate;
}

Matching brute_force_min_matching(const WeightedGraph& g) {
    g.validate();
    const std::size_t n = g.vertex_count();
    if (n > brute_force_vertex_cap) {
        std::ostringstream os;
        os << "brute force matching limited to " << brute_force_vertex_cap << " vertices, got " << n;
        throw SizeLimitError(os.str());
    }
    if (n % 2 != 0) throw InfeasibleError("odd vertex count admits no perfect matching");

    std::vector<std::vector<long>> edge_at(n, std::vector<long>(n, -1));
    for (std::size_t k = 0; k < g.edges().size(); ++k) {
        const auto& e = g.edges()[k];
        edge_at[e.u][e.v] = edge_at[e.v][e.u] = static_cast<long>(k);
    }

    std::vector<char> used(n, 0);
    std::vector<std::size_t> current, best;
    double best_weight = INFINITY;
    bool found = false;

    // Pair the lowest exposed vertex with every available partner in turn.
    auto recurse = [&](auto&& self, double weight) -> void {
        std::size_t first = 0;
        while (first < n && used[first]) ++first;
        if (first == n) {
            if (!found || weight < best_weight) {
                found = true;
                best_weight = weight;
                best = current;
            }
            return;
        }
        used[first] = 1;
        for (std::size_t other = first + 1; other < n; ++other) {
            const long k = edge_at[first][other];
            if (used[other] || k < 0) continue;
            used[other] = 1;
            current.push_back(static_cast<std::size_t>(k));
            self(self, weight + g.edges()[k].weight);
            current.pop_back();
            used[other] = 0;
        }
        used[first] = 0;
    };
    recurse(recurse, 0.0);

    if (!found) throw InfeasibleError("graph admits no perfect matching");
    Matching m;
    m.edge_ids = best;
    std::sort(m.edge_ids.begin(), m.edge_ids.end());
    for (auto k : m.edge_ids) m.total_weight += g.edges()[k].weight;
    return m;
}

}  // namespace d2dcrowd::matching
