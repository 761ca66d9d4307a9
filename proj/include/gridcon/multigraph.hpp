#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gridcon/errors.hpp"

namespace gridcon {

using Vertex = int;

// A set of vertex ids, kept sorted and duplicate-free.
using VertexSet = std::vector<Vertex>;

inline VertexSet make_set(std::vector<Vertex> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

inline bool set_contains(const VertexSet& s, Vertex v) {
    return std::binary_search(s.begin(), s.end(), v);
}

// Undirected loop-less multigraph. Vertices are opaque integer ids with an
// optional text label; parallel edges are stored as a multiplicity on the
// normalized pair (u < v).
class Multigraph {
public:
    Multigraph() = default;

    void add_vertex(Vertex v, std::string label = "") {
        auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
        if (it != vertices_.end() && *it == v)
            throw input_error("duplicate-vertex", "vertex " + std::to_string(v) + " added twice");
        vertices_.insert(it, v);
        adj_[v];
        if (!label.empty()) labels_[v] = std::move(label);
    }

    // Adds `mult` parallel edges between u and v (creating the pair if absent).
    void add_edge(Vertex u, Vertex v, int mult = 1) {
        if (u == v) throw input_error("loop", "loop at vertex " + std::to_string(u));
        if (!has_vertex(u) || !has_vertex(v))
            throw input_error("unknown-vertex", "edge endpoint not in graph");
        if (mult < 1) throw input_error("bad-multiplicity", "multiplicity must be >= 1");
        auto key = norm(u, v);
        int& m = edges_[key];
        if (m == 0) {
            adj_[u].push_back({v, 0});
            adj_[v].push_back({u, 0});
        }
        m += mult;
        for (auto& [w, wm] : adj_[u])
            if (w == v) wm = m;
        for (auto& [w, wm] : adj_[v])
            if (w == u) wm = m;
    }

    bool has_vertex(Vertex v) const {
        return std::binary_search(vertices_.begin(), vertices_.end(), v);
    }

    int multiplicity(Vertex u, Vertex v) const {
        if (u == v) return 0;
        auto it = edges_.find(norm(u, v));
        return it == edges_.end() ? 0 : it->second;
    }

    bool has_edge(Vertex u, Vertex v) const { return multiplicity(u, v) > 0; }

    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int distinct_edge_count() const { return static_cast<int>(edges_.size()); }

    int total_multiplicity() const {
        int t = 0;
        for (const auto& [e, m] : edges_) t += m;
        return t;
    }

    // Number of edges incident to v, parallel edges counted with multiplicity.
    int edge_degree(Vertex v) const {
        int d = 0;
        for (const auto& [w, m] : neighbors(v)) d += m;
        return d;
    }

    // Number of distinct neighbors.
    int degree(Vertex v) const { return static_cast<int>(neighbors(v).size()); }

    const std::vector<Vertex>& vertices() const { return vertices_; }

    // Normalized (u < v) -> multiplicity, in deterministic order.
    const std::map<std::pair<Vertex, Vertex>, int>& edges() const { return edges_; }

    const std::vector<std::pair<Vertex, int>>& neighbors(Vertex v) const {
        auto it = adj_.find(v);
        if (it == adj_.end())
            throw input_error("unknown-vertex", "vertex " + std::to_string(v) + " not in graph");
        return it->second;
    }

    std::string label(Vertex v) const {
        auto it = labels_.find(v);
        return it == labels_.end() ? std::string() : it->second;
    }

    void set_label(Vertex v, std::string label) {
        if (!has_vertex(v)) throw input_error("unknown-vertex", "labeling unknown vertex");
        labels_[v] = std::move(label);
    }

    // Position of v in the sorted vertex list.
    int index_of(Vertex v) const {
        auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
        if (it == vertices_.end() || *it != v)
            throw input_error("unknown-vertex", "vertex " + std::to_string(v) + " not in graph");
        return static_cast<int>(it - vertices_.begin());
    }

    Vertex vertex_at(int idx) const { return vertices_.at(static_cast<size_t>(idx)); }

    // Two graphs are identical when vertex ids, edge pairs, and multiplicities
    // all coincide. Labels are presentation only.
    bool identical_to(const Multigraph& o) const {
        return vertices_ == o.vertices_ && edges_ == o.edges_;
    }

    // Identical as simple graphs: same ids and same adjacency, multiplicities ignored.
    bool same_simple_adjacency(const Multigraph& o) const {
        if (vertices_ != o.vertices_) return false;
        if (edges_.size() != o.edges_.size()) return false;
        auto a = edges_.begin();
        auto b = o.edges_.begin();
        for (; a != edges_.end(); ++a, ++b)
            if (a->first != b->first) return false;
        return true;
    }

private:
    static std::pair<Vertex, Vertex> norm(Vertex u, Vertex v) {
        return u < v ? std::make_pair(u, v) : std::make_pair(v, u);
    }

    std::vector<Vertex> vertices_;  // sorted
    std::map<std::pair<Vertex, Vertex>, int> edges_;
    std::unordered_map<Vertex, std::vector<std::pair<Vertex, int>>> adj_;
    std::unordered_map<Vertex, std::string> labels_;
};

// ---------------------------------------------------------------------------
// Distances and connectivity
// ---------------------------------------------------------------------------

// Shortest-path length in edges; nullopt when u and v are disconnected.
// Adjacent vertices have distance 1 and distance(v, v) = 0.
inline std::optional<int> distance(const Multigraph& g, Vertex u, Vertex v) {
    if (!g.has_vertex(u) || !g.has_vertex(v))
        throw input_error("unknown-vertex", "distance endpoint not in graph");
    if (u == v) return 0;
    std::unordered_map<Vertex, int> dist;
    dist[u] = 0;
    std::queue<Vertex> q;
    q.push(u);
    while (!q.empty()) {
        Vertex x = q.front();
        q.pop();
        for (const auto& [y, m] : g.neighbors(x)) {
            if (dist.count(y)) continue;
            dist[y] = dist[x] + 1;
            if (y == v) return dist[y];
            q.push(y);
        }
    }
    return std::nullopt;
}

namespace detail {

// BFS inside g[s] from src; returns distances keyed by vertex (only vertices of s).
inline std::unordered_map<Vertex, int> bfs_within(const Multigraph& g, const VertexSet& s,
                                                  Vertex src) {
    std::unordered_map<Vertex, int> dist;
    dist[src] = 0;
    std::queue<Vertex> q;
    q.push(src);
    while (!q.empty()) {
        Vertex x = q.front();
        q.pop();
        for (const auto& [y, m] : g.neighbors(x)) {
            if (!set_contains(s, y) || dist.count(y)) continue;
            dist[y] = dist[x] + 1;
            q.push(y);
        }
    }
    return dist;
}

}  // namespace detail

// Maximum pairwise distance inside the induced subgraph g[s];
// nullopt when g[s] is disconnected.
inline std::optional<int> diameter(const Multigraph& g, const VertexSet& s) {
    if (s.empty()) throw input_error("empty-set", "diameter of an empty set");
    for (Vertex v : s)
        if (!g.has_vertex(v)) throw input_error("unknown-vertex", "set member not in graph");
    int best = 0;
    for (Vertex v : s) {
        auto dist = detail::bfs_within(g, s, v);
        if (dist.size() != s.size()) return std::nullopt;
        for (const auto& [w, d] : dist) best = std::max(best, d);
    }
    return best;
}

// Partition of s into maximal connected pieces of g[s], ordered by minimum vertex id.
inline std::vector<VertexSet> connected_components(const Multigraph& g, const VertexSet& s) {
    for (Vertex v : s)
        if (!g.has_vertex(v)) throw input_error("unknown-vertex", "set member not in graph");
    std::vector<VertexSet> out;
    std::unordered_map<Vertex, bool> seen;
    for (Vertex v : s) {  // s sorted -> components come out ordered by min id
        if (seen[v]) continue;
        VertexSet comp;
        std::queue<Vertex> q;
        q.push(v);
        seen[v] = true;
        while (!q.empty()) {
            Vertex x = q.front();
            q.pop();
            comp.push_back(x);
            for (const auto& [y, m] : g.neighbors(x)) {
                if (!set_contains(s, y) || seen[y]) continue;
                seen[y] = true;
                q.push(y);
            }
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;
}

inline bool is_connected_set(const Multigraph& g, const VertexSet& s) {
    if (s.empty()) return false;
    return detail::bfs_within(g, s, s.front()).size() == s.size();
}

inline bool is_connected(const Multigraph& g) {
    if (g.vertex_count() == 0) return true;
    return is_connected_set(g, g.vertices());
}

inline Multigraph induced_subgraph(const Multigraph& g, const VertexSet& s) {
    Multigraph h;
    for (Vertex v : s) h.add_vertex(v, g.label(v));
    for (const auto& [e, m] : g.edges())
        if (set_contains(s, e.first) && set_contains(s, e.second))
            h.add_edge(e.first, e.second, m);
    return h;
}

// ---------------------------------------------------------------------------
// Dissolution
// ---------------------------------------------------------------------------

// Suppress a vertex of edge-degree exactly 2 whose two edges lead to distinct
// neighbors x, y: remove v with both edges and raise the multiplicity of {x,y}.
inline Multigraph dissolve(const Multigraph& g, Vertex v) {
    if (!g.has_vertex(v)) throw input_error("unknown-vertex", "dissolving unknown vertex");
    if (g.edge_degree(v) != 2)
        throw input_error("degree", "vertex " + std::to_string(v) + " has edge-degree " +
                                        std::to_string(g.edge_degree(v)) + ", need exactly 2");
    const auto& nb = g.neighbors(v);
    if (nb.size() != 2)
        throw input_error("loop", "both edges at " + std::to_string(v) +
                                      " lead to the same neighbor; dissolving would create a loop");
    Vertex x = nb[0].first, y = nb[1].first;
    Multigraph h;
    for (Vertex w : g.vertices())
        if (w != v) h.add_vertex(w, g.label(w));
    for (const auto& [e, m] : g.edges())
        if (e.first != v && e.second != v) h.add_edge(e.first, e.second, m);
    h.add_edge(x, y, 1);
    return h;
}

inline std::vector<Vertex> dissolvable_vertices(const Multigraph& g) {
    std::vector<Vertex> out;
    for (Vertex v : g.vertices())
        if (g.edge_degree(v) == 2 && g.neighbors(v).size() == 2) out.push_back(v);
    return out;
}

}  // namespace gridcon
