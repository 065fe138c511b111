// Edmonds' weighted blossom algorithm, O(V^3).
//
// The search runs in maximum-weight form on w' = C - w with C the largest
// input weight, asking for maximum cardinality first; on a graph with a
// perfect matching that is exactly a minimum-weight perfect matching.
// The bookkeeping (endpoint numbering, labels, best-edge lists, blossom
// expansion) follows the classic Galil formulation.
//
// Vertex duals are kept doubled (dual2_[v] = 2 u_v) so an edge's slack is
// dual2_[i] + dual2_[j] - 2 w'. Blossom duals are kept unscaled.

#include <algorithm>
#include <cmath>
#include <sstream>

#include "d2dcrowd/matching.hpp"

namespace d2dcrowd::matching {

namespace {

enum Label : int { kFree = 0, kS = 1, kT = 2, kBreadcrumb = 4 };

class BlossomSolver {
public:
    explicit BlossomSolver(const WeightedGraph& g)
        : n_(static_cast<int>(g.vertex_count())),
          m_(static_cast<int>(g.edges().size())),
          offset_(g.max_weight()),
          endpoint_(2 * m_),
          weight_(m_),
          neighbend_(n_),
          mate_(n_, -1),
          label_(2 * n_, kFree),
          labelend_(2 * n_, -1),
          inblossom_(n_),
          parent_(2 * n_, -1),
          childs_(2 * n_),
          base_(2 * n_, -1),
          endps_(2 * n_),
          bestedge_(2 * n_, -1),
          best_list_(2 * n_),
          has_best_list_(2 * n_, 0),
          dual2_(2 * n_, 0.0),
          allowedge_(m_, 0) {
        for (int k = 0; k < m_; ++k) {
            const auto& e = g.edges()[k];
            endpoint_[2 * k] = static_cast<int>(e.u);
            endpoint_[2 * k + 1] = static_cast<int>(e.v);
            weight_[k] = offset_ - e.weight;
            neighbend_[e.u].push_back(2 * k + 1);
            neighbend_[e.v].push_back(2 * k);
        }
        for (int v = 0; v < n_; ++v) {
            inblossom_[v] = v;
            base_[v] = v;
        }
        for (int b = 2 * n_ - 1; b >= n_; --b) unused_.push_back(b);
    }

    void warm_start();
    void run();
    SolveResult result(const WeightedGraph& g) const;

private:
    double slack(int k) const {
        return dual2_[endpoint_[2 * k]] + dual2_[endpoint_[2 * k + 1]] - 2.0 * weight_[k];
    }

    template <class Vec>
    static auto& at(Vec& v, int j) {
        const int s = static_cast<int>(v.size());
        return v[((j % s) + s) % s];
    }

    void leaves(int b, std::vector<int>& out) const {
        if (b < n_) {
            out.push_back(b);
            return;
        }
        for (int t : childs_[b]) leaves(t, out);
    }
    std::vector<int> leaves(int b) const {
        std::vector<int> out;
        leaves(b, out);
        return out;
    }

    void assign_label(int w, int t, int p);
    int scan_blossom(int v, int w);
    void add_blossom(int base, int k);
    void expand_blossom(int b, bool endstage);
    void augment_blossom(int b, int v);
    void augment_matching(int k);

    int n_, m_;
    double offset_;
    std::vector<int> endpoint_;
    std::vector<double> weight_;
    std::vector<std::vector<int>> neighbend_;
    std::vector<int> mate_;
    std::vector<int> label_, labelend_, inblossom_, parent_;
    std::vector<std::vector<int>> childs_;
    std::vector<int> base_;
    std::vector<std::vector<int>> endps_;
    std::vector<int> bestedge_;
    std::vector<std::vector<int>> best_list_;
    std::vector<char> has_best_list_;
    std::vector<int> unused_;
    std::vector<double> dual2_;
    std::vector<char> allowedge_;
    std::vector<int> queue_;
    std::size_t augmentations_ = 0;
    std::size_t warm_pairs_ = 0;
};

// Feasible starting duals plus a greedy matching on tight edges. Each
// vertex starts at its heaviest incident w', then every still-exposed
// vertex lowers its dual until an incident edge is tight and grabs that
// edge if the other end is exposed too.
void BlossomSolver::warm_start() {
    for (int v = 0; v < n_; ++v) {
        double best = 0.0;
        for (int p : neighbend_[v]) best = std::max(best, weight_[p / 2]);
        dual2_[v] = best;
    }
    for (int v = 0; v < n_; ++v) {
        if (mate_[v] != -1 || neighbend_[v].empty()) continue;
        double least = INFINITY;
        for (int p : neighbend_[v]) least = std::min(least, slack(p / 2));
        const std::vector<double> before = [&] {
            std::vector<double> s;
            s.reserve(neighbend_[v].size());
            for (int p : neighbend_[v]) s.push_back(slack(p / 2));
            return s;
        }();
        dual2_[v] -= least;
        for (std::size_t i = 0; i < neighbend_[v].size(); ++i) {
            const int p = neighbend_[v][i];
            const int w = endpoint_[p];
            if (before[i] == least && mate_[w] == -1) {
                mate_[v] = p;
                mate_[w] = p ^ 1;
                ++warm_pairs_;
                break;
            }
        }
    }
}

void BlossomSolver::assign_label(int w, int t, int p) {
    const int b = inblossom_[w];
    label_[w] = label_[b] = t;
    labelend_[w] = labelend_[b] = p;
    bestedge_[w] = bestedge_[b] = -1;
    if (t == kS) {
        leaves(b, queue_);
    } else if (t == kT) {
        const int base = base_[b];
        assign_label(endpoint_[mate_[base]], kS, mate_[base] ^ 1);
    }
}

// Walks up the alternating trees from v and w. Returns the base of the
// new blossom if the paths meet, or -1 if they reach two different roots
// (an augmenting path).
int BlossomSolver::scan_blossom(int v, int w) {
    std::vector<int> path;
    int base = -1;
    while (v != -1 || w != -1) {
        int b = inblossom_[v];
        if (label_[b] & kBreadcrumb) {
            base = base_[b];
            break;
        }
        path.push_back(b);
        label_[b] = kS | kBreadcrumb;
        if (labelend_[b] == -1) {
            v = -1;
        } else {
            v = endpoint_[labelend_[b]];
            b = inblossom_[v];
            v = endpoint_[labelend_[b]];
        }
        if (w != -1) std::swap(v, w);
    }
    for (int b : path) label_[b] = kS;
    return base;
}

void BlossomSolver::add_blossom(int base, int k) {
    int v = endpoint_[2 * k];
    int w = endpoint_[2 * k + 1];
    const int bb = inblossom_[base];
    int bv = inblossom_[v];
    int bw = inblossom_[w];
    const int b = unused_.back();
    unused_.pop_back();
    base_[b] = base;
    parent_[b] = -1;
    parent_[bb] = b;
    auto& path = childs_[b];
    auto& endps = endps_[b];
    path.clear();
    endps.clear();
    while (bv != bb) {
        parent_[bv] = b;
        path.push_back(bv);
        endps.push_back(labelend_[bv]);
        v = endpoint_[labelend_[bv]];
        bv = inblossom_[v];
    }
    path.push_back(bb);
    std::reverse(path.begin(), path.end());
    std::reverse(endps.begin(), endps.end());
    endps.push_back(2 * k);
    while (bw != bb) {
        parent_[bw] = b;
        path.push_back(bw);
        endps.push_back(labelend_[bw] ^ 1);
        w = endpoint_[labelend_[bw]];
        bw = inblossom_[w];
    }
    label_[b] = kS;
    labelend_[b] = labelend_[bb];
    dual2_[b] = 0.0;
    for (int leaf : leaves(b)) {
        if (label_[inblossom_[leaf]] == kT) queue_.push_back(leaf);
        inblossom_[leaf] = b;
    }

    // Least-slack edge from the new blossom to every neighbouring S-blossom.
    std::vector<int> bestedgeto(2 * n_, -1);
    for (int sub : path) {
        std::vector<std::vector<int>> lists;
        if (!has_best_list_[sub]) {
            for (int leaf : leaves(sub)) {
                std::vector<int> ks;
                ks.reserve(neighbend_[leaf].size());
                for (int p : neighbend_[leaf]) ks.push_back(p / 2);
                lists.push_back(std::move(ks));
            }
        } else {
            lists.push_back(best_list_[sub]);
        }
        for (const auto& list : lists) {
            for (int kk : list) {
                int i = endpoint_[2 * kk];
                int j = endpoint_[2 * kk + 1];
                if (inblossom_[j] == b) std::swap(i, j);
                const int bj = inblossom_[j];
                if (bj != b && label_[bj] == kS &&
                    (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj])))
                    bestedgeto[bj] = kk;
            }
        }
        best_list_[sub].clear();
        has_best_list_[sub] = 0;
        bestedge_[sub] = -1;
    }
    auto& mine = best_list_[b];
    mine.clear();
    for (int kk : bestedgeto)
        if (kk != -1) mine.push_back(kk);
    has_best_list_[b] = 1;
    bestedge_[b] = -1;
    for (int kk : mine)
        if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) bestedge_[b] = kk;
}

void BlossomSolver::expand_blossom(int b, bool endstage) {
    // Copy: recursive expansion recycles nested blossoms.
    const std::vector<int> children = childs_[b];
    for (int s : children) {
        parent_[s] = -1;
        if (s < n_) {
            inblossom_[s] = s;
        } else if (endstage && dual2_[s] == 0.0) {
            expand_blossom(s, endstage);
        } else {
            for (int leaf : leaves(s)) inblossom_[leaf] = s;
        }
    }

    // A T-blossom expanded mid-stage: relabel the sub-blossoms on the
    // even-length path from the entry child to the base.
    if (!endstage && label_[b] == kT) {
        auto& ch = childs_[b];
        auto& ep = endps_[b];
        const int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
        int j = static_cast<int>(std::find(ch.begin(), ch.end(), entrychild) - ch.begin());
        int jstep, endptrick;
        if (j & 1) {
            j -= static_cast<int>(ch.size());
            jstep = 1;
            endptrick = 0;
        } else {
            jstep = -1;
            endptrick = 1;
        }
        int p = labelend_[b];
        while (j != 0) {
            label_[endpoint_[p ^ 1]] = kFree;
            label_[endpoint_[at(ep, j - endptrick) ^ endptrick ^ 1]] = kFree;
            assign_label(endpoint_[p ^ 1], kT, p);
            allowedge_[at(ep, j - endptrick) / 2] = 1;
            j += jstep;
            p = at(ep, j - endptrick) ^ endptrick;
            allowedge_[p / 2] = 1;
            j += jstep;
        }
        int bv = at(ch, j);
        label_[endpoint_[p ^ 1]] = label_[bv] = kT;
        labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
        bestedge_[bv] = -1;
        j += jstep;
        while (at(ch, j) != entrychild) {
            bv = at(ch, j);
            if (label_[bv] == kS) {
                j += jstep;
                continue;
            }
            int reached = -1;
            for (int leaf : leaves(bv)) {
                if (label_[leaf] != kFree) {
                    reached = leaf;
                    break;
                }
            }
            if (reached != -1) {
                label_[reached] = kFree;
                label_[endpoint_[mate_[base_[bv]]]] = kFree;
                assign_label(reached, kT, labelend_[reached]);
            }
            j += jstep;
        }
    }

    label_[b] = labelend_[b] = -1;
    childs_[b].clear();
    endps_[b].clear();
    base_[b] = -1;
    best_list_[b].clear();
    has_best_list_[b] = 0;
    bestedge_[b] = -1;
    unused_.push_back(b);
}

// Swaps matched and unmatched edges on the even path from v to the base
// of blossom b, then rotates b so v becomes its base.
void BlossomSolver::augment_blossom(int b, int v) {
    int t = v;
    while (parent_[t] != b) t = parent_[t];
    if (t >= n_) augment_blossom(t, v);
    auto& ch = childs_[b];
    auto& ep = endps_[b];
    const int i = static_cast<int>(std::find(ch.begin(), ch.end(), t) - ch.begin());
    int j = i;
    int jstep, endptrick;
    if (i & 1) {
        j -= static_cast<int>(ch.size());
        jstep = 1;
        endptrick = 0;
    } else {
        jstep = -1;
        endptrick = 1;
    }
    while (j != 0) {
        j += jstep;
        t = at(ch, j);
        const int p = at(ep, j - endptrick) ^ endptrick;
        if (t >= n_) augment_blossom(t, endpoint_[p]);
        j += jstep;
        t = at(ch, j);
        if (t >= n_) augment_blossom(t, endpoint_[p ^ 1]);
        mate_[endpoint_[p]] = p ^ 1;
        mate_[endpoint_[p ^ 1]] = p;
    }
    std::rotate(ch.begin(), ch.begin() + i, ch.end());
    std::rotate(ep.begin(), ep.begin() + i, ep.end());
    base_[b] = base_[ch[0]];
}

void BlossomSolver::augment_matching(int k) {
    const int v = endpoint_[2 * k];
    const int w = endpoint_[2 * k + 1];
    for (auto [s, p] : {std::pair{v, 2 * k + 1}, std::pair{w, 2 * k}}) {
        while (true) {
            const int bs = inblossom_[s];
            if (bs >= n_) augment_blossom(bs, s);
            mate_[s] = p;
            if (labelend_[bs] == -1) break;
            const int t = endpoint_[labelend_[bs]];
            const int bt = inblossom_[t];
            s = endpoint_[labelend_[bt]];
            const int jv = endpoint_[labelend_[bt] ^ 1];
            if (bt >= n_) augment_blossom(bt, jv);
            mate_[jv] = labelend_[bt];
            p = labelend_[bt] ^ 1;
        }
    }
    ++augmentations_;
}

void BlossomSolver::run() {
    for (int stage = 0; stage < n_; ++stage) {
        std::fill(label_.begin(), label_.end(), kFree);
        std::fill(bestedge_.begin(), bestedge_.end(), -1);
        for (int b = n_; b < 2 * n_; ++b) {
            best_list_[b].clear();
            has_best_list_[b] = 0;
        }
        std::fill(allowedge_.begin(), allowedge_.end(), 0);
        queue_.clear();

        for (int v = 0; v < n_; ++v)
            if (mate_[v] == -1 && label_[inblossom_[v]] == kFree) assign_label(v, kS, -1);

        bool augmented = false;
        while (true) {
            while (!queue_.empty() && !augmented) {
                const int v = queue_.back();
                queue_.pop_back();
                for (int p : neighbend_[v]) {
                    const int k = p / 2;
                    const int w = endpoint_[p];
                    if (inblossom_[v] == inblossom_[w]) continue;
                    double kslack = 0.0;
                    if (!allowedge_[k]) {
                        kslack = slack(k);
                        if (kslack <= 0.0) allowedge_[k] = 1;
                    }
                    if (allowedge_[k]) {
                        if (label_[inblossom_[w]] == kFree) {
                            assign_label(w, kT, p ^ 1);
                        } else if (label_[inblossom_[w]] == kS) {
                            const int base = scan_blossom(v, w);
                            if (base >= 0) {
                                add_blossom(base, k);
                            } else {
                                augment_matching(k);
                                augmented = true;
                                break;
                            }
                        } else if (label_[w] == kFree) {
                            // w sits inside a T-blossom; remember how it was reached.
                            label_[w] = kT;
                            labelend_[w] = p ^ 1;
                        }
                    } else if (label_[inblossom_[w]] == kS) {
                        const int b = inblossom_[v];
                        if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) bestedge_[b] = k;
                    } else if (label_[w] == kFree) {
                        if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) bestedge_[w] = k;
                    }
                }
            }
            if (augmented) break;

            // No tight edge left to grow along: pick the largest dual step
            // that keeps every constraint feasible.
            int deltatype = -1;
            double delta = 0.0;
            int deltaedge = -1;
            int deltablossom = -1;
            for (int v = 0; v < n_; ++v) {
                if (label_[inblossom_[v]] == kFree && bestedge_[v] != -1) {
                    const double d = slack(bestedge_[v]);
                    if (deltatype == -1 || d < delta) {
                        delta = d;
                        deltatype = 2;
                        deltaedge = bestedge_[v];
                    }
                }
            }
            for (int b = 0; b < 2 * n_; ++b) {
                if (parent_[b] == -1 && label_[b] == kS && bestedge_[b] != -1) {
                    const double d = slack(bestedge_[b]) / 2.0;
                    if (deltatype == -1 || d < delta) {
                        delta = d;
                        deltatype = 3;
                        deltaedge = bestedge_[b];
                    }
                }
            }
            for (int b = n_; b < 2 * n_; ++b) {
                if (base_[b] >= 0 && parent_[b] == -1 && label_[b] == kT &&
                    (deltatype == -1 || dual2_[b] < delta)) {
                    delta = dual2_[b];
                    deltatype = 4;
                    deltablossom = b;
                }
            }
            if (deltatype == -1) break;  // no augmenting path can exist

            for (int v = 0; v < n_; ++v) {
                const int l = label_[inblossom_[v]];
                if (l == kS)
                    dual2_[v] -= delta;
                else if (l == kT)
                    dual2_[v] += delta;
            }
            for (int b = n_; b < 2 * n_; ++b) {
                if (base_[b] >= 0 && parent_[b] == -1) {
                    if (label_[b] == kS)
                        dual2_[b] += delta;
                    else if (label_[b] == kT)
                        dual2_[b] -= delta;
                }
            }

            if (deltatype == 2) {
                allowedge_[deltaedge] = 1;
                int i = endpoint_[2 * deltaedge];
                int j = endpoint_[2 * deltaedge + 1];
                if (label_[inblossom_[i]] == kFree) std::swap(i, j);
                queue_.push_back(i);
            } else if (deltatype == 3) {
                allowedge_[deltaedge] = 1;
                queue_.push_back(endpoint_[2 * deltaedge]);
            } else {
                expand_blossom(deltablossom, false);
            }
        }
        if (!augmented) break;

        for (int b = n_; b < 2 * n_; ++b)
            if (parent_[b] == -1 && base_[b] >= 0 && label_[b] == kS && dual2_[b] == 0.0)
                expand_blossom(b, true);
    }
}

SolveResult BlossomSolver::result(const WeightedGraph& g) const {
    SolveResult r;
    for (int v = 0; v < n_; ++v) {
        if (mate_[v] < 0) {
            std::ostringstream os;
            os << "graph admits no perfect matching (vertex " << v << " left exposed)";
            throw InfeasibleError(os.str());
        }
        const int k = mate_[v] / 2;
        if (v < endpoint_[mate_[v]]) r.matching.edge_ids.push_back(static_cast<std::size_t>(k));
    }
    std::sort(r.matching.edge_ids.begin(), r.matching.edge_ids.end());
    for (auto k : r.matching.edge_ids) r.matching.total_weight += g.edges()[k].weight;

    // Back to the minimisation form: y_v = C/2 - u_v, z_B unchanged.
    r.certificate.vertex_dual.resize(n_);
    for (int v = 0; v < n_; ++v) r.certificate.vertex_dual[v] = 0.5 * offset_ - 0.5 * dual2_[v];
    for (int b = n_; b < 2 * n_; ++b) {
        if (base_[b] < 0) continue;
        DualCertificate::OddSet set;
        for (int leaf : leaves(b)) set.members.push_back(static_cast<Vertex>(leaf));
        std::sort(set.members.begin(), set.members.end());
        set.dual = dual2_[b];
        r.certificate.odd_sets.push_back(std::move(set));
    }
    r.augmentations = augmentations_;
    r.warm_start_pairs = warm_pairs_;
    return r;
}

}  // namespace

SolveResult solve_min_weight_perfect_matching(const WeightedGraph& g) {
    g.validate();
    const std::size_t n = g.vertex_count();
    if (n == 0) return {};
    if (n % 2 != 0) throw InfeasibleError("odd vertex count admits no perfect matching");
    if (n > static_cast<std::size_t>(INT32_MAX / 4) || g.edges().size() > INT32_MAX / 4)
        throw SizeLimitError("graph too large for the blossom solver");
    BlossomSolver solver(g);
    solver.warm_start();
    solver.run();
    return solver.result(g);
}

Matching min_weight_perfect_matching(const WeightedGraph& g) {
    return solve_min_weight_perfect_matching(g).matching;
}

}  // namespace d2dcrowd::matching
