#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gridcon/grids.hpp"
#include "gridcon/isomorphism.hpp"
#include "gridcon/multigraph.hpp"

namespace gridcon {

// How the blocks of a contraction are bounded.
enum class WitnessKind { Diameter, Size, Unbounded };

inline std::string kind_name(WitnessKind k) {
    switch (k) {
        case WitnessKind::Diameter: return "diameter";
        case WitnessKind::Size: return "size";
        default: return "unbounded";
    }
}

// Checkable evidence that `target` is a contraction of `source`: a total map
// sigma from source vertices onto target vertices whose preimages are the
// contracted blocks. `bound` is the diameter or block-size cap; ignored for
// Unbounded.
struct ContractionWitness {
    Multigraph source;
    Multigraph target;
    std::map<Vertex, Vertex> sigma;
    WitnessKind kind = WitnessKind::Unbounded;
    int bound = 0;

    static ContractionWitness identity(const Multigraph& g, WitnessKind kind, int bound) {
        ContractionWitness w{g, g, {}, kind, bound};
        for (Vertex v : g.vertices()) w.sigma[v] = v;
        return w;
    }
};

// Quotient of g under a block map: one vertex per block id, an edge between
// two blocks whenever some g-edge crosses them. Quotients are simple.
inline Multigraph quotient(const Multigraph& g, const std::map<Vertex, Vertex>& blocks) {
    Multigraph q;
    for (const auto& [v, b] : blocks)
        if (!q.has_vertex(b)) q.add_vertex(b);
    for (const auto& [e, m] : g.edges()) {
        Vertex a = blocks.at(e.first), b = blocks.at(e.second);
        if (a != b && !q.has_edge(a, b)) q.add_edge(a, b);
    }
    return q;
}

// Preimages of the witness map, ordered by target vertex id.
inline std::vector<VertexSet> witness_blocks(const ContractionWitness& w) {
    std::map<Vertex, VertexSet> pre;
    for (Vertex x : w.target.vertices()) pre[x];
    for (const auto& [v, x] : w.sigma) pre[x].push_back(v);
    std::vector<VertexSet> out;
    for (auto& [x, s] : pre) {
        std::sort(s.begin(), s.end());
        out.push_back(std::move(s));
    }
    return out;
}

// Checks the four contraction conditions: surjectivity, connected nonempty
// preimages, the adjacency law, and the declared block bound. Multigraph
// targets are compared on underlying simple adjacency. Malformed sigma
// (not total, or mapping outside the target) is an input error, not a verdict.
inline Verdict verify_contraction(const ContractionWitness& w) {
    for (Vertex v : w.source.vertices()) {
        auto it = w.sigma.find(v);
        if (it == w.sigma.end())
            throw input_error("sigma-not-total", "no image for vertex " + std::to_string(v));
        if (!w.target.has_vertex(it->second))
            throw input_error("sigma-range",
                              "image " + std::to_string(it->second) + " not a target vertex");
    }
    for (const auto& [v, x] : w.sigma)
        if (!w.source.has_vertex(v))
            throw input_error("sigma-domain", "mapped vertex " + std::to_string(v) + " not in source");

    std::map<Vertex, VertexSet> pre;
    for (Vertex x : w.target.vertices()) pre[x];
    for (const auto& [v, x] : w.sigma) pre[x].push_back(v);

    for (auto& [x, s] : pre) {
        if (s.empty())
            return Verdict::fail("surjectivity: target vertex " + std::to_string(x) +
                                 " has empty preimage");
        std::sort(s.begin(), s.end());
    }
    for (const auto& [x, s] : pre)
        if (!is_connected_set(w.source, s))
            return Verdict::fail("connectivity: preimage of " + std::to_string(x) +
                                 " induces a disconnected subgraph");

    // Blocks are connected, so the union over a pair is connected iff some
    // edge crosses between them; the adjacency law reduces to quotient-edge
    // equality against the target's simple adjacency.
    std::map<std::pair<Vertex, Vertex>, bool> crossing;
    for (const auto& [e, m] : w.source.edges()) {
        Vertex a = w.sigma.at(e.first), b = w.sigma.at(e.second);
        if (a != b) crossing[a < b ? std::make_pair(a, b) : std::make_pair(b, a)] = true;
    }
    for (const auto& [e, c] : crossing)
        if (!w.target.has_edge(e.first, e.second))
            return Verdict::fail("adjacency-law: blocks of {" + std::to_string(e.first) + "," +
                                 std::to_string(e.second) +
                                 "} connect in the source but the target edge is absent");
    for (const auto& [e, m] : w.target.edges())
        if (!crossing.count(e))
            return Verdict::fail("adjacency-law: target edge {" + std::to_string(e.first) + "," +
                                 std::to_string(e.second) + "} has no crossing source edge");

    if (w.kind == WitnessKind::Size) {
        for (const auto& [x, s] : pre)
            if (static_cast<int>(s.size()) > w.bound)
                return Verdict::fail("size-bound: preimage of " + std::to_string(x) + " has " +
                                     std::to_string(s.size()) + " > " + std::to_string(w.bound) +
                                     " vertices");
    } else if (w.kind == WitnessKind::Diameter) {
        for (const auto& [x, s] : pre) {
            auto d = diameter(w.source, s);
            if (!d || *d > w.bound)
                return Verdict::fail("diameter-bound: preimage of " + std::to_string(x) +
                                     " has diameter " + (d ? std::to_string(*d) : "inf") + " > " +
                                     std::to_string(w.bound));
        }
    }
    return Verdict::pass();
}

// Enumeration limits for the exhaustive searches. Exceeding them raises
// resource_error, so a plain "not found" is always a proof of absence.
struct SearchBudget {
    int max_vertices = 12;
    long long max_states = 10'000'000;
};

namespace detail {

struct PartitionSearch {
    const Multigraph& g;
    const Multigraph& h;
    WitnessKind kind;
    int bound;
    long long states = 0;
    long long max_states;
    int n, target_blocks;
    std::vector<int> assign;                 // vertex index -> block id (-1 unassigned)
    std::vector<std::vector<int>> blocks;    // block id -> vertex indices
    std::vector<std::vector<int>> adj;       // index adjacency
    std::optional<ContractionWitness> found;

    // A partial block is viable while each component of its induced subgraph
    // can still reach an unassigned vertex.
    bool block_viable(const std::vector<int>& block) const {
        if (block.size() <= 1) return true;
        std::vector<int> comp(block.size(), -1);
        int ncomp = 0;
        for (size_t s = 0; s < block.size(); ++s) {
            if (comp[s] >= 0) continue;
            int id = ncomp++;
            std::vector<int> stack{block[s]};
            comp[s] = id;
            while (!stack.empty()) {
                int x = stack.back();
                stack.pop_back();
                for (int y : adj[x])
                    for (size_t t = 0; t < block.size(); ++t)
                        if (block[t] == y && comp[t] < 0) {
                            comp[t] = id;
                            stack.push_back(y);
                        }
            }
        }
        if (ncomp == 1) return true;
        std::vector<bool> open(static_cast<size_t>(ncomp), false);
        for (size_t s = 0; s < block.size(); ++s)
            for (int y : adj[block[s]])
                if (assign[y] < 0) open[static_cast<size_t>(comp[s])] = true;
        for (bool o : open)
            if (!o) return false;
        return true;
    }

    bool leaf_check() {
        for (const auto& b : blocks)
            if (!connected_block(b)) return false;
        if (kind == WitnessKind::Diameter) {
            for (const auto& b : blocks) {
                VertexSet s;
                for (int i : b) s.push_back(g.vertex_at(i));
                std::sort(s.begin(), s.end());
                auto d = diameter(g, s);
                if (!d || *d > bound) return false;
            }
        }
        Multigraph q;
        for (int b = 0; b < target_blocks; ++b) q.add_vertex(b);
        for (const auto& [e, m] : g.edges()) {
            int a = assign[g.index_of(e.first)], b = assign[g.index_of(e.second)];
            if (a != b && !q.has_edge(a, b)) q.add_edge(a, b);
        }
        auto iso = find_isomorphism(q, h);
        if (!iso) return false;
        ContractionWitness w{g, h, {}, kind, bound};
        for (int i = 0; i < n; ++i)
            w.sigma[g.vertex_at(i)] = h.vertex_at((*iso)[static_cast<size_t>(assign[i])]);
        found = std::move(w);
        return true;
    }

    bool connected_block(const std::vector<int>& block) const {
        if (block.empty()) return false;
        std::vector<int> seen{block[0]};
        std::vector<int> stack{block[0]};
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (int y : adj[x]) {
                if (std::find(block.begin(), block.end(), y) == block.end()) continue;
                if (std::find(seen.begin(), seen.end(), y) != seen.end()) continue;
                seen.push_back(y);
                stack.push_back(y);
            }
        }
        return seen.size() == block.size();
    }

    bool recurse(int i) {
        if (++states > max_states)
            throw resource_error("partition search exceeded " + std::to_string(max_states) +
                                 " partial states");
        if (i == n) {
            if (static_cast<int>(blocks.size()) != target_blocks) return false;
            return leaf_check();
        }
        int used = static_cast<int>(blocks.size());
        // Every block still to be opened needs a fresh vertex.
        if (used + (n - i) < target_blocks) return false;
        int cap = std::min(used, target_blocks - 1);  // restricted growth: at most one new block
        for (int b = 0; b <= cap; ++b) {
            bool fresh = b == used;
            if (fresh) blocks.emplace_back();
            if (kind == WitnessKind::Size && static_cast<int>(blocks[b].size()) + 1 > bound) {
                if (fresh) blocks.pop_back();
                continue;
            }
            assign[i] = b;
            blocks[b].push_back(i);
            if (block_viable(blocks[b]) && recurse(i + 1)) return true;
            blocks[b].pop_back();
            assign[i] = -1;
            if (fresh) blocks.pop_back();
        }
        return false;
    }
};

}  // namespace detail

// Exhaustive search for a contraction witness g -> h of the given kind, by
// enumerating partitions of V(g) into |V(h)| connected blocks as restricted
// growth strings, abandoning blocks that can no longer be reconnected.
// Returns nullopt only when the full enumeration found nothing.
inline std::optional<ContractionWitness> find_contraction(const Multigraph& g, const Multigraph& h,
                                                          WitnessKind kind, int bound = 0,
                                                          const SearchBudget& budget = {}) {
    if (g.vertex_count() > budget.max_vertices)
        throw resource_error("graph has " + std::to_string(g.vertex_count()) +
                             " vertices, over the search budget of " +
                             std::to_string(budget.max_vertices));
    if (h.vertex_count() > g.vertex_count()) return std::nullopt;
    if (h.vertex_count() == 0 || g.vertex_count() == 0) return std::nullopt;

    detail::PartitionSearch s{g,  h,  kind, bound, 0, budget.max_states,
                              g.vertex_count(), h.vertex_count(), {}, {}, {}, {}};
    s.assign.assign(static_cast<size_t>(s.n), -1);
    s.adj.resize(static_cast<size_t>(s.n));
    for (const auto& [e, m] : g.edges()) {
        int a = g.index_of(e.first), b = g.index_of(e.second);
        s.adj[static_cast<size_t>(a)].push_back(b);
        s.adj[static_cast<size_t>(b)].push_back(a);
    }
    s.recurse(0);
    return s.found;
}

// Largest k >= 3 such that the uniformly triangulated grid of side k is a
// contraction of g; 0 when no such k exists. Searches k downward from the
// vertex-count ceiling.
inline int bcg(const Multigraph& g, const SearchBudget& budget = {}) {
    int n = g.vertex_count();
    for (int k = static_cast<int>(std::sqrt(static_cast<double>(n))); k >= 3; --k) {
        if (k * k > n) continue;
        if (find_contraction(g, gen_gamma(k), WitnessKind::Unbounded, 0, budget)) return k;
    }
    return 0;
}

// Composition of two witnesses G -> H and H -> F into a witness G -> F.
// The intermediate graphs must agree vertex-for-vertex.
inline ContractionWitness contraction_compose(const ContractionWitness& w1,
                                              const ContractionWitness& w2) {
    if (!w1.target.same_simple_adjacency(w2.source))
        throw input_error("compose-mismatch",
                          "intermediate graphs of the two witnesses differ");
    ContractionWitness w{w1.source, w2.target, {}, WitnessKind::Unbounded, 0};
    for (const auto& [v, x] : w1.sigma) w.sigma[v] = w2.sigma.at(x);
    return w;
}

}  // namespace gridcon
