#pragma once

#include <bit>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "gridcon/contraction.hpp"
#include "gridcon/multigraph.hpp"
#include "gridcon/treewidth.hpp"

namespace gridcon {

// ---------------------------------------------------------------------------
// Intersection graphs of connected vertex sets
// ---------------------------------------------------------------------------

// The intersection graph of a family of connected sets: one vertex per family
// position, an edge wherever two members overlap, with the overlap size as
// the edge multiplicity.
struct IntersectionInstance {
    Multigraph host;
    std::vector<VertexSet> family;
    Multigraph result;  // vertex ids are family positions
};

inline IntersectionInstance build_intersection(const Multigraph& host,
                                               const std::vector<VertexSet>& family) {
    for (size_t i = 0; i < family.size(); ++i) {
        if (family[i].empty())
            throw input_error("empty-member", "family set " + std::to_string(i) + " is empty");
        for (Vertex v : family[i])
            if (!host.has_vertex(v))
                throw input_error("unknown-vertex", "family set " + std::to_string(i) +
                                                        " mentions a vertex outside the host");
        if (!is_connected_set(host, family[i]))
            throw input_error("disconnected-member",
                              "family set " + std::to_string(i) + " is not connected in the host");
    }
    IntersectionInstance inst;
    inst.host = host;
    inst.family = family;
    for (size_t i = 0; i < family.size(); ++i) inst.result.add_vertex(static_cast<Vertex>(i));
    for (size_t i = 0; i < family.size(); ++i)
        for (size_t j = i + 1; j < family.size(); ++j) {
            VertexSet common;
            std::set_intersection(family[i].begin(), family[i].end(), family[j].begin(),
                                  family[j].end(), std::back_inserter(common));
            if (!common.empty())
                inst.result.add_edge(static_cast<Vertex>(i), static_cast<Vertex>(j),
                                     static_cast<int>(common.size()));
        }
    return inst;
}

// Largest multiplicity-weighted degree; 0 for an empty graph.
inline int edge_degree_bound(const Multigraph& g) {
    int best = 0;
    for (Vertex v : g.vertices()) best = std::max(best, g.edge_degree(v));
    return best;
}

// ---------------------------------------------------------------------------
// Extension witnesses
// ---------------------------------------------------------------------------

// Certifies that `result` lies in the (c1,c2)-extension of the class holding
// `base`: a middle graph that contracts onto the base in blocks of at most c1
// vertices and onto the result in blocks of diameter at most c2.
struct ExtensionWitness {
    Multigraph base;    // a graph of the original class
    Multigraph middle;  // the de-contracted graph between the two
    Multigraph result;
    ContractionWitness sigma1;  // middle -> base, size-bounded
    ContractionWitness sigma2;  // middle -> result, diameter-bounded
    int c1 = 0, c2 = 0;
};

inline Verdict verify_extension(const ExtensionWitness& w) {
    if (w.sigma1.kind != WitnessKind::Size || w.sigma1.bound != w.c1)
        return Verdict::fail("sigma1 must be a size-" + std::to_string(w.c1) + " witness");
    if (w.sigma2.kind != WitnessKind::Diameter || w.sigma2.bound != w.c2)
        return Verdict::fail("sigma2 must be a diameter-" + std::to_string(w.c2) + " witness");
    if (!w.sigma1.source.identical_to(w.middle) || !w.sigma2.source.identical_to(w.middle))
        return Verdict::fail("both witnesses must contract the middle graph");
    if (!w.sigma1.target.identical_to(w.base)) return Verdict::fail("sigma1 must target the base");
    if (!w.sigma2.target.identical_to(w.result))
        return Verdict::fail("sigma2 must target the result");
    auto v1 = verify_contraction(w.sigma1);
    if (!v1) return Verdict::fail("sigma1: " + v1.violation);
    auto v2 = verify_contraction(w.sigma2);
    if (!v2) return Verdict::fail("sigma2: " + v2.violation);
    return Verdict::pass();
}

// ---------------------------------------------------------------------------
// Exact Steiner trees (Dreyfus-Wagner over terminal subsets)
// ---------------------------------------------------------------------------

namespace detail {

struct SteinerSolver {
    const Multigraph& g;
    std::vector<Vertex> terminals;
    int n, t;
    std::vector<std::vector<int>> dist;      // metric closure
    std::vector<std::vector<int>> bfs_from;  // parent index per source, for paths
    std::vector<std::vector<int>> dpm, dpf;  // [mask][vertex]
    std::vector<std::vector<int>> cm, cf;    // merge subset / funnel vertex

    explicit SteinerSolver(const Multigraph& graph, VertexSet terms)
        : g(graph), terminals(std::move(terms)), n(graph.vertex_count()),
          t(static_cast<int>(terminals.size())) {}

    void shortest_paths() {
        dist.assign(static_cast<size_t>(n), {});
        bfs_from.assign(static_cast<size_t>(n), {});
        for (int s = 0; s < n; ++s) {
            std::vector<int> d(static_cast<size_t>(n), -1), par(static_cast<size_t>(n), -1);
            std::vector<int> order{s};
            d[static_cast<size_t>(s)] = 0;
            for (size_t head = 0; head < order.size(); ++head) {
                int x = order[head];
                std::vector<int> nbs;
                for (const auto& [y, m] : g.neighbors(g.vertex_at(x))) nbs.push_back(g.index_of(y));
                std::sort(nbs.begin(), nbs.end());
                for (int y : nbs)
                    if (d[static_cast<size_t>(y)] < 0) {
                        d[static_cast<size_t>(y)] = d[static_cast<size_t>(x)] + 1;
                        par[static_cast<size_t>(y)] = x;
                        order.push_back(y);
                    }
            }
            dist[static_cast<size_t>(s)] = std::move(d);
            bfs_from[static_cast<size_t>(s)] = std::move(par);
        }
    }

    // Minimum edge count of a tree containing terminal mask S and vertex v.
    void run() {
        shortest_paths();
        int full = (1 << t) - 1;
        const int inf = 1 << 20;
        dpm.assign(static_cast<size_t>(full) + 1, std::vector<int>(static_cast<size_t>(n), inf));
        dpf = dpm;
        cm.assign(static_cast<size_t>(full) + 1, std::vector<int>(static_cast<size_t>(n), -1));
        cf = cm;
        for (int mask = 1; mask <= full; ++mask) {
            for (int v = 0; v < n; ++v) {
                if ((mask & (mask - 1)) == 0) {
                    int ti = std::countr_zero(static_cast<unsigned>(mask));
                    int term = g.index_of(terminals[static_cast<size_t>(ti)]);
                    dpm[static_cast<size_t>(mask)][static_cast<size_t>(v)] =
                        dist[static_cast<size_t>(term)][static_cast<size_t>(v)];
                } else {
                    int low = mask & -mask;
                    for (int sub = (mask - 1) & mask; sub; sub = (sub - 1) & mask) {
                        if (!(sub & low)) continue;  // keep the lowest terminal on one side
                        int cand = dpf[static_cast<size_t>(sub)][static_cast<size_t>(v)] +
                                   dpf[static_cast<size_t>(mask ^ sub)][static_cast<size_t>(v)];
                        if (cand < dpm[static_cast<size_t>(mask)][static_cast<size_t>(v)]) {
                            dpm[static_cast<size_t>(mask)][static_cast<size_t>(v)] = cand;
                            cm[static_cast<size_t>(mask)][static_cast<size_t>(v)] = sub;
                        }
                    }
                }
            }
            // Funnel through the metric closure once.
            for (int v = 0; v < n; ++v)
                for (int u = 0; u < n; ++u) {
                    int cand = dpm[static_cast<size_t>(mask)][static_cast<size_t>(u)] +
                               dist[static_cast<size_t>(u)][static_cast<size_t>(v)];
                    if (cand < dpf[static_cast<size_t>(mask)][static_cast<size_t>(v)]) {
                        dpf[static_cast<size_t>(mask)][static_cast<size_t>(v)] = cand;
                        cf[static_cast<size_t>(mask)][static_cast<size_t>(v)] = u;
                    }
                }
        }
    }

    void emit_path(int from, int to, std::set<std::pair<Vertex, Vertex>>& edges) const {
        // Walk the BFS parents of `from` starting at `to`.
        int cur = to;
        while (cur != from) {
            int par = bfs_from[static_cast<size_t>(from)][static_cast<size_t>(cur)];
            Vertex a = g.vertex_at(cur), b = g.vertex_at(par);
            edges.insert(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
            cur = par;
        }
    }

    void expand_f(int mask, int v, std::set<std::pair<Vertex, Vertex>>& edges) const {
        int u = cf[static_cast<size_t>(mask)][static_cast<size_t>(v)];
        emit_path(u, v, edges);
        expand_m(mask, u, edges);
    }

    void expand_m(int mask, int v, std::set<std::pair<Vertex, Vertex>>& edges) const {
        if ((mask & (mask - 1)) == 0) {
            int ti = std::countr_zero(static_cast<unsigned>(mask));
            emit_path(g.index_of(terminals[static_cast<size_t>(ti)]), v, edges);
            return;
        }
        int sub = cm[static_cast<size_t>(mask)][static_cast<size_t>(v)];
        expand_f(sub, v, edges);
        expand_f(mask ^ sub, v, edges);
    }

    Multigraph tree() {
        run();
        int full = (1 << t) - 1;
        // Root the optimum at the first terminal.
        int root = g.index_of(terminals[0]);
        std::set<std::pair<Vertex, Vertex>> edges;
        expand_f(full, root, edges);
        Multigraph out;
        std::set<Vertex> verts;
        for (Vertex v : terminals) verts.insert(v);
        for (const auto& [a, b] : edges) {
            verts.insert(a);
            verts.insert(b);
        }
        for (Vertex v : verts) out.add_vertex(v);
        for (const auto& [a, b] : edges) out.add_edge(a, b);
        return out;
    }
};

// Minimum-size tree inside host[component] containing all of `terminals`.
inline Multigraph steiner_tree(const Multigraph& sub, const VertexSet& terminals) {
    SteinerSolver solver(sub, terminals);
    return solver.tree();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// The intersection-to-extension construction
// ---------------------------------------------------------------------------

namespace detail {

// Vertex ids of the middle graph: copy of host vertex x living in tree i.
inline Vertex copy_id(int tree, Vertex x, Vertex stride) { return tree * stride + x; }

}  // namespace detail

// From an intersection instance whose graph has edge-degree at most d, builds
// an extension witness with bounds (d+1, d-1): minimum Steiner trees over the
// pairwise overlaps, degree-2 connectors dissolved, the middle graph being
// the disjoint trees glued by one clique per shared host vertex.
inline ExtensionWitness build_kil45io_witness(const IntersectionInstance& inst, int d) {
    if (d < 1) throw input_error("degree-bound", "the construction needs d >= 1");
    size_t h = inst.family.size();
    if (h == 0) throw input_error("empty-family", "no sets to build from");

    // A host vertex in more than d+1 members would put a clique on d+2
    // vertices into the intersection graph, against the degree bound.
    std::map<Vertex, std::vector<int>> member_of;
    for (size_t i = 0; i < h; ++i)
        for (Vertex v : inst.family[i]) member_of[v].push_back(static_cast<int>(i));
    for (const auto& [v, occ] : member_of)
        if (static_cast<int>(occ.size()) > d + 1)
            throw input_error("vertex-multiplicity",
                              "host vertex " + std::to_string(v) + " lies in " +
                                  std::to_string(occ.size()) + " > d+1 family members");
    if (edge_degree_bound(inst.result) > d)
        throw input_error("degree-bound", "intersection graph has edge-degree " +
                                              std::to_string(edge_degree_bound(inst.result)) +
                                              " > " + std::to_string(d));

    // Overlap terminals per member.
    std::vector<VertexSet> overlap(h);
    for (size_t i = 0; i < h; ++i) {
        VertexSet vi;
        for (size_t j = 0; j < h; ++j) {
            if (j == i) continue;
            std::set_intersection(inst.family[i].begin(), inst.family[i].end(),
                                  inst.family[j].begin(), inst.family[j].end(),
                                  std::back_inserter(vi));
        }
        overlap[i] = make_set(std::move(vi));
        if (static_cast<int>(overlap[i].size()) > d)
            throw internal_error("terminals", "overlap set exceeds the degree bound");
    }

    // Minimum Steiner trees, then dissolve the degree-2 connectors.
    std::vector<Multigraph> trees(h);
    for (size_t i = 0; i < h; ++i) {
        const VertexSet& vi = overlap[i];
        Multigraph tree;
        if (vi.size() <= 1) {
            Vertex only = vi.empty() ? inst.family[i].front() : vi.front();
            tree.add_vertex(only);
        } else {
            tree = detail::steiner_tree(induced_subgraph(inst.host, inst.family[i]), vi);
        }
        if (!is_tree(tree)) throw internal_error("steiner", "solver returned a non-tree");
        for (Vertex v : tree.vertices())
            if (tree.edge_degree(v) == 1 && !set_contains(vi, v))
                throw internal_error("steiner", "minimum tree has a non-terminal leaf");
        // Dissolve non-terminal degree-2 vertices.
        for (bool again = true; again;) {
            again = false;
            for (Vertex v : tree.vertices())
                if (!set_contains(vi, v) && tree.edge_degree(v) == 2 && tree.degree(v) == 2) {
                    tree = dissolve(tree, v);
                    again = true;
                    break;
                }
        }
        auto dia = tree.vertex_count() == 1 ? std::optional<int>(0) : diameter(tree, tree.vertices());
        if (!dia || *dia > d - 1)
            throw internal_error("tree-diameter", "reduced tree has diameter above d-1");
        trees[i] = std::move(tree);
    }

    // Trees may only meet in overlap vertices.
    std::map<Vertex, std::vector<int>> tree_of;
    for (size_t i = 0; i < h; ++i)
        for (Vertex v : trees[i].vertices()) tree_of[v].push_back(static_cast<int>(i));
    for (const auto& [v, occ] : tree_of)
        if (occ.size() > 1)
            for (int i : occ)
                if (!set_contains(overlap[static_cast<size_t>(i)], v))
                    throw internal_error("tree-overlap",
                                         "a connector vertex appears in two trees");

    ExtensionWitness w;
    w.c1 = d + 1;
    w.c2 = d - 1;
    w.result = inst.result;

    // Base: the union of the reduced trees inside the host.
    for (const auto& [v, occ] : tree_of) w.base.add_vertex(v);
    for (size_t i = 0; i < h; ++i)
        for (const auto& [e, m] : trees[i].edges())
            if (!w.base.has_edge(e.first, e.second)) w.base.add_edge(e.first, e.second);

    // Middle: disjoint copies of the trees plus one clique per shared vertex.
    Vertex stride = 0;
    for (Vertex v : inst.host.vertices()) stride = std::max(stride, v);
    stride += 1;
    std::map<Vertex, Vertex> sigma1, sigma2;
    for (size_t i = 0; i < h; ++i) {
        for (Vertex v : trees[i].vertices()) {
            Vertex cid = detail::copy_id(static_cast<int>(i), v, stride);
            w.middle.add_vertex(cid);
            sigma1[cid] = v;
            sigma2[cid] = static_cast<Vertex>(i);
        }
        for (const auto& [e, m] : trees[i].edges())
            w.middle.add_edge(detail::copy_id(static_cast<int>(i), e.first, stride),
                              detail::copy_id(static_cast<int>(i), e.second, stride));
    }
    for (const auto& [v, occ] : tree_of) {
        if (occ.size() < 2) continue;
        if (occ.size() > static_cast<size_t>(d) + 1)
            throw internal_error("clique", "shared vertex has too many copies");
        for (size_t a = 0; a < occ.size(); ++a)
            for (size_t b = a + 1; b < occ.size(); ++b)
                w.middle.add_edge(detail::copy_id(occ[a], v, stride),
                                  detail::copy_id(occ[b], v, stride));
    }

    w.sigma1 = ContractionWitness{w.middle, w.base, sigma1, WitnessKind::Size, w.c1};
    w.sigma2 = ContractionWitness{w.middle, w.result, sigma2, WitnessKind::Diameter, w.c2};

    auto check = verify_extension(w);
    if (!check)
        throw internal_error("extension", "constructed witness fails: " + check.violation);
    return w;
}

// ---------------------------------------------------------------------------
// Chained treewidth bounds of the main theorem
// ---------------------------------------------------------------------------

struct TheoremBudget {
    TreewidthBudget tw;
    SearchBudget bcg;
    bool strict = true;  // throw on budget instead of reporting a gap
};

struct TheoremReport {
    std::optional<int> tw_result, tw_middle, tw_base;
    std::optional<int> bcg_result, bcg_base;
    // tw(H) <= tw(J); tw(J) <= (c1+1)(tw(G')+1)-1; tw(G') <= lambda*bcg(G')^c;
    // bcg(G') <= (2*c2+1)(bcg(H)+2)+1; and the combined inequality.
    std::optional<bool> tw_chain, lift_bound, class_bound, grid_bound, combined;

    bool all_checked_hold() const {
        for (auto b : {tw_chain, lift_bound, class_bound, grid_bound, combined})
            if (b.has_value() && !*b) return false;
        return true;
    }
};

inline TheoremReport theorem_bound_check(const ExtensionWitness& w, double lambda, double c,
                                         const TheoremBudget& budget = {}) {
    if (lambda <= 0) throw input_error("lambda", "lambda must be positive");
    if (c < 1.0 || c >= 2.0) throw input_error("exponent", "the exponent must lie in [1,2)");
    auto check = verify_extension(w);
    if (!check) throw input_error("witness", "extension witness fails: " + check.violation);

    TheoremReport r;
    auto tw_of = [&](const Multigraph& g) -> std::optional<int> {
        try {
            return exact_treewidth(g, budget.tw).first;
        } catch (const resource_error&) {
            if (budget.strict) throw;
            return std::nullopt;
        }
    };
    auto bcg_of = [&](const Multigraph& g) -> std::optional<int> {
        try {
            if (g.vertex_count() > budget.bcg.max_vertices) {
                if (budget.strict)
                    throw resource_error("graph too large for the contraction search");
                return std::nullopt;
            }
            return bcg(g, budget.bcg);
        } catch (const resource_error&) {
            if (budget.strict) throw;
            return std::nullopt;
        }
    };

    r.tw_result = tw_of(w.result);
    r.tw_middle = tw_of(w.middle);
    r.tw_base = tw_of(w.base);
    r.bcg_result = bcg_of(w.result);
    r.bcg_base = bcg_of(w.base);

    if (r.tw_result && r.tw_middle) r.tw_chain = *r.tw_result <= *r.tw_middle;
    if (r.tw_middle && r.tw_base)
        r.lift_bound = *r.tw_middle <= (w.c1 + 1) * (*r.tw_base + 1) - 1;
    if (r.tw_base && r.bcg_base)
        r.class_bound = *r.tw_base <= lambda * std::pow(static_cast<double>(*r.bcg_base), c);
    if (r.bcg_base && r.bcg_result)
        r.grid_bound = *r.bcg_base <= (2 * w.c2 + 1) * (*r.bcg_result + 2) + 1;
    if (r.tw_result && r.bcg_result) {
        double inner = (2.0 * w.c2 + 1) * (*r.bcg_result + 2) + 1;
        r.combined = *r.tw_result <= (w.c1 + 1) * (lambda * std::pow(inner, c) + 1) - 1;
    }
    return r;
}

}  // namespace gridcon
