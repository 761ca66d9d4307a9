#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <vector>

#include "gridcon/contraction.hpp"
#include "gridcon/multigraph.hpp"

namespace gridcon {

// A tree of bags over the vertices of some graph. Tree node ids are opaque;
// exact_treewidth reuses the decomposed graph's vertex ids as node ids.
struct TreeDecomposition {
    Multigraph tree;
    std::map<Vertex, VertexSet> bags;  // tree node -> bag

    int width() const {
        int w = -1;
        for (const auto& [t, b] : bags) w = std::max(w, static_cast<int>(b.size()) - 1);
        return w;
    }
};

inline bool is_tree(const Multigraph& g) {
    if (g.vertex_count() == 0) return false;
    return g.total_multiplicity() == g.vertex_count() - 1 && is_connected(g);
}

// Checks coverage, the edge property, and per-vertex subtree connectivity,
// in that order; reports the first violation. A non-tree carrier or a bag
// referencing unknown vertices is an input error rather than a verdict.
inline Verdict validate_decomposition(const Multigraph& g, const TreeDecomposition& d) {
    if (!is_tree(d.tree)) throw input_error("not-a-tree", "decomposition carrier is not a tree");
    for (Vertex t : d.tree.vertices())
        if (!d.bags.count(t))
            throw input_error("bag-missing", "tree node " + std::to_string(t) + " has no bag");
    for (const auto& [t, b] : d.bags) {
        if (!d.tree.has_vertex(t))
            throw input_error("stray-bag", "bag for unknown tree node " + std::to_string(t));
        for (Vertex v : b)
            if (!g.has_vertex(v))
                throw input_error("unknown-vertex",
                                  "bag of node " + std::to_string(t) + " mentions vertex " +
                                      std::to_string(v) + " outside the graph");
    }

    for (Vertex v : g.vertices()) {
        bool covered = false;
        for (const auto& [t, b] : d.bags)
            if (set_contains(b, v)) {
                covered = true;
                break;
            }
        if (!covered)
            return Verdict::fail("coverage: vertex " + std::to_string(v) + " is in no bag");
    }
    for (const auto& [e, m] : g.edges()) {
        bool inside = false;
        for (const auto& [t, b] : d.bags)
            if (set_contains(b, e.first) && set_contains(b, e.second)) {
                inside = true;
                break;
            }
        if (!inside)
            return Verdict::fail("edge: {" + std::to_string(e.first) + "," +
                                 std::to_string(e.second) + "} is inside no bag");
    }
    for (Vertex v : g.vertices()) {
        VertexSet nodes;
        for (const auto& [t, b] : d.bags)
            if (set_contains(b, v)) nodes.push_back(t);
        std::sort(nodes.begin(), nodes.end());
        if (!is_connected_set(d.tree, nodes))
            return Verdict::fail("connectivity: nodes holding vertex " + std::to_string(v) +
                                 " do not induce a subtree");
    }
    return Verdict::pass();
}

struct TreewidthBudget {
    int max_vertices = 20;
};

// Exact treewidth by dynamic programming over vertex subsets: dp[S] is the
// best width of an elimination prefix S, where eliminating v after S costs
// the number of vertices outside S u {v} reachable from v through S. Ties
// among optimal orderings are broken toward the smallest vertex index, so
// the certifying decomposition is reproducible.
inline std::pair<int, TreeDecomposition> exact_treewidth(const Multigraph& g,
                                                         const TreewidthBudget& budget = {}) {
    int n = g.vertex_count();
    if (n > budget.max_vertices || n > 25)
        throw resource_error("graph has " + std::to_string(n) +
                             " vertices, over the treewidth budget of " +
                             std::to_string(std::min(budget.max_vertices, 25)));
    if (n == 0) throw input_error("empty-graph", "treewidth of the empty graph");

    std::vector<uint32_t> adj(static_cast<size_t>(n), 0);
    for (const auto& [e, m] : g.edges()) {
        int a = g.index_of(e.first), b = g.index_of(e.second);
        adj[static_cast<size_t>(a)] |= 1u << b;
        adj[static_cast<size_t>(b)] |= 1u << a;
    }

    const uint32_t full = n == 32 ? ~0u : (1u << n) - 1;
    std::vector<int8_t> dp(static_cast<size_t>(full) + 1, 0);
    std::vector<int8_t> pred(static_cast<size_t>(full) + 1, -1);
    dp[0] = -1;

    auto elim_cost = [&](uint32_t s, int v) -> int {
        // Component of v in G[s u {v}], then its outside neighborhood.
        uint32_t reach = 1u << v;
        uint32_t seen_nb = adj[static_cast<size_t>(v)];
        uint32_t frontier = seen_nb & s;
        while (frontier) {
            reach |= frontier;
            uint32_t nxt = 0;
            uint32_t f = frontier;
            while (f) {
                int u = std::countr_zero(f);
                f &= f - 1;
                nxt |= adj[static_cast<size_t>(u)];
            }
            seen_nb |= nxt;
            frontier = nxt & s & ~reach;
        }
        return std::popcount(seen_nb & ~(s | (1u << v)));
    };

    for (uint32_t s = 1; s <= full; ++s) {
        int best = 127, chosen = -1;
        uint32_t it = s;
        while (it) {
            int v = std::countr_zero(it);
            it &= it - 1;
            uint32_t rest = s & ~(1u << v);
            int w = std::max<int>(dp[rest], elim_cost(rest, v));
            if (w < best) {
                best = w;
                chosen = v;
            }
        }
        dp[s] = static_cast<int8_t>(best);
        pred[s] = static_cast<int8_t>(chosen);
    }

    // Elimination order, first eliminated at position 0.
    std::vector<int> order(static_cast<size_t>(n));
    uint32_t s = full;
    for (int pos = n - 1; pos >= 0; --pos) {
        int v = pred[s];
        order[static_cast<size_t>(pos)] = v;
        s &= ~(1u << v);
    }

    // Decomposition from the order: bag of v is v plus its not-yet-eliminated
    // fill neighbors; each bag hangs off the bag of its first-eliminated
    // higher neighbor.
    std::vector<uint32_t> fill = adj;
    std::vector<int> pos_of(static_cast<size_t>(n));
    for (int p = 0; p < n; ++p) pos_of[static_cast<size_t>(order[static_cast<size_t>(p)])] = p;

    TreeDecomposition d;
    for (Vertex v : g.vertices()) d.tree.add_vertex(v);
    uint32_t eliminated = 0;
    for (int p = 0; p < n; ++p) {
        int v = order[static_cast<size_t>(p)];
        uint32_t higher = fill[static_cast<size_t>(v)] & ~eliminated;
        VertexSet bag{g.vertex_at(v)};
        int attach = -1, attach_pos = n;
        uint32_t it = higher;
        while (it) {
            int u = std::countr_zero(it);
            it &= it - 1;
            bag.push_back(g.vertex_at(u));
            if (pos_of[static_cast<size_t>(u)] < attach_pos) {
                attach_pos = pos_of[static_cast<size_t>(u)];
                attach = u;
            }
        }
        std::sort(bag.begin(), bag.end());
        d.bags[g.vertex_at(v)] = std::move(bag);
        if (attach < 0 && p + 1 < n) attach = order[static_cast<size_t>(p + 1)];
        if (attach >= 0) d.tree.add_edge(g.vertex_at(v), g.vertex_at(attach));
        // Make the higher neighborhood a clique.
        uint32_t a = higher;
        while (a) {
            int x = std::countr_zero(a);
            a &= a - 1;
            fill[static_cast<size_t>(x)] |= higher & ~(1u << x);
        }
        eliminated |= 1u << v;
    }

    int width = dp[full];
    if (d.width() != width)
        throw internal_error("treewidth-reconstruction",
                             "decomposition width " + std::to_string(d.width()) +
                                 " disagrees with DP value " + std::to_string(width));
    auto check = validate_decomposition(g, d);
    if (!check)
        throw internal_error("treewidth-reconstruction", "certificate invalid: " + check.violation);
    return {width, d};
}

// Tree-decomposition lifting along a size-bounded contraction: keep the tree,
// inflate every bag by the preimages of its members. The result has width at
// most (c'+1)*(width+1)-1 for block size c'.
inline TreeDecomposition lift_decomposition(const ContractionWitness& w,
                                            const TreeDecomposition& d) {
    if (w.kind != WitnessKind::Size)
        throw input_error("kind", "lifting needs a size-bounded contraction witness");
    auto wv = verify_contraction(w);
    if (!wv) throw input_error("witness", "witness does not verify: " + wv.violation);
    auto dv = validate_decomposition(w.target, d);
    if (!dv) throw input_error("decomposition", "decomposition invalid: " + dv.violation);

    std::map<Vertex, VertexSet> pre;
    for (const auto& [v, x] : w.sigma) pre[x].push_back(v);

    TreeDecomposition out;
    out.tree = d.tree;
    for (const auto& [t, bag] : d.bags) {
        VertexSet big;
        for (Vertex x : bag)
            for (Vertex v : pre[x]) big.push_back(v);
        out.bags[t] = make_set(std::move(big));
    }
    return out;
}

}  // namespace gridcon
