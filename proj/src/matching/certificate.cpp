#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "d2dcrowd/matching.hpp"

namespace d2dcrowd::matching {

double DualCertificate::objective() const {
    double obj = 0.0;
    for (double y : vertex_dual) obj += y;
    for (const auto& s : odd_sets)
        obj -= s.dual * static_cast<double>((s.members.size() - 1) / 2);
    return obj;
}

double default_tolerance(const WeightedGraph& g) { return 1e-9 * std::max(1.0, g.max_weight()); }

namespace {

CertificateReport fail(CertificateReport r, const std::string& why) {
    r.ok = false;
    r.failure = why;
    return r;
}

}  // namespace

CertificateReport verify_certificate(const WeightedGraph& g, const Matching& m,
                                     const DualCertificate& cert, double tolerance) {
    CertificateReport r;
    const std::size_t n = g.vertex_count();
    const auto& edges = g.edges();

    // Primal: a perfect matching over existing edges.
    std::vector<char> covered(n, 0);
    std::vector<char> in_matching(edges.size(), 0);
    for (auto k : m.edge_ids) {
        if (k >= edges.size()) return fail(r, "matching references unknown edge");
        if (in_matching[k]) return fail(r, "matching lists an edge twice");
        in_matching[k] = 1;
        const auto& e = edges[k];
        if (covered[e.u] || covered[e.v]) return fail(r, "matching is not vertex-disjoint");
        covered[e.u] = covered[e.v] = 1;
        r.primal += e.weight;
    }
    if (std::find(covered.begin(), covered.end(), 0) != covered.end())
        return fail(r, "matching is not perfect");

    if (cert.vertex_dual.size() != n) return fail(r, "vertex dual count does not match graph");

    // Odd sets: well-formed and nonnegative; remember which sets hold each vertex.
    std::vector<std::vector<std::size_t>> sets_of(n);
    for (std::size_t s = 0; s < cert.odd_sets.size(); ++s) {
        const auto& set = cert.odd_sets[s];
        if (set.members.size() % 2 == 0 || set.members.size() < 3)
            return fail(r, "odd set with even or trivial size");
        if (!std::is_sorted(set.members.begin(), set.members.end()) ||
            std::adjacent_find(set.members.begin(), set.members.end()) != set.members.end())
            return fail(r, "odd set members not strictly ascending");
        if (set.members.back() >= n) return fail(r, "odd set member outside vertex range");
        if (!(set.dual >= -tolerance)) return fail(r, "negative odd-set dual");
        for (auto v : set.members) sets_of[v].push_back(s);
    }

    // Dual feasibility and tightness of matched edges.
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const auto& e = edges[k];
        double shared = 0.0;
        const auto& a = sets_of[e.u];
        const auto& b = sets_of[e.v];
        for (std::size_t i = 0, j = 0; i < a.size() && j < b.size();) {
            if (a[i] < b[j]) {
                ++i;
            } else if (b[j] < a[i]) {
                ++j;
            } else {
                shared += cert.odd_sets[a[i]].dual;
                ++i;
                ++j;
            }
        }
        const double reduced = e.weight - cert.vertex_dual[e.u] - cert.vertex_dual[e.v] + shared;
        if (!std::isfinite(reduced)) return fail(r, "non-finite reduced cost");
        r.worst_edge_violation = std::max(r.worst_edge_violation, -reduced);
        if (in_matching[k]) r.worst_matched_slack = std::max(r.worst_matched_slack, std::abs(reduced));
    }
    if (r.worst_edge_violation > tolerance) {
        std::ostringstream os;
        os << "dual constraint violated by " << r.worst_edge_violation;
        return fail(r, os.str());
    }
    if (r.worst_matched_slack > tolerance) {
        std::ostringstream os;
        os << "matched edge not tight, slack " << r.worst_matched_slack;
        return fail(r, os.str());
    }

    // Sets with positive dual must be full: (|B| - 1) / 2 matched edges inside.
    std::vector<char> member(n, 0);
    for (const auto& set : cert.odd_sets) {
        if (set.dual <= tolerance) continue;
        for (auto v : set.members) member[v] = 1;
        std::size_t inside = 0;
        for (auto k : m.edge_ids)
            if (member[edges[k].u] && member[edges[k].v]) ++inside;
        for (auto v : set.members) member[v] = 0;
        if (inside != (set.members.size() - 1) / 2)
            return fail(r, "odd set with positive dual is not full");
    }

    r.dual = cert.objective();
    if (std::abs(r.primal - r.dual) > tolerance * std::max<double>(1.0, static_cast<double>(n))) {
        std::ostringstream os;
        os << "duality gap " << (r.primal - r.dual);
        return fail(r, os.str());
    }
    r.ok = true;
    return r;
}

void SolveResult::dump(std::ostream& os) const {
    os << "# blossom solver state\n";
    os << "vertices " << certificate.vertex_dual.size() << "\n";
    os << "matching_edges " << matching.edge_ids.size() << " weight " << matching.total_weight
       << "\n";
    os << "warm_start_pairs " << warm_start_pairs << " augmentations " << augmentations << "\n";
    for (std::size_t v = 0; v < certificate.vertex_dual.size(); ++v)
        os << "y " << v << " " << certificate.vertex_dual[v] << "\n";
    for (const auto& s : certificate.odd_sets) {
        os << "blossom dual " << s.dual << " members";
        for (auto v : s.members) os << " " << v;
        os << "\n";
    }
}

}  // namespace d2dcrowd::matching
