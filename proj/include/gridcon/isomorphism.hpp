#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

#include "gridcon/multigraph.hpp"

namespace gridcon {

namespace detail {

// Per-vertex invariant key: (edge-degree, sorted incident multiplicities),
// refined once by the sorted multiset of neighbor keys. Keys are comparable
// across graphs, so they double as a cheap non-isomorphism filter.
using IsoKey = std::pair<std::pair<int, std::vector<int>>, std::vector<std::pair<int, std::vector<int>>>>;

inline std::vector<IsoKey> iso_keys(const Multigraph& g) {
    int n = g.vertex_count();
    std::vector<std::pair<int, std::vector<int>>> base(n);
    for (int i = 0; i < n; ++i) {
        Vertex v = g.vertex_at(i);
        std::vector<int> mults;
        for (const auto& [w, m] : g.neighbors(v)) mults.push_back(m);
        std::sort(mults.begin(), mults.end());
        base[i] = {g.edge_degree(v), std::move(mults)};
    }
    std::vector<IsoKey> keys(n);
    for (int i = 0; i < n; ++i) {
        std::vector<std::pair<int, std::vector<int>>> nb;
        for (const auto& [w, m] : g.neighbors(g.vertex_at(i))) nb.push_back(base[g.index_of(w)]);
        std::sort(nb.begin(), nb.end());
        keys[i] = {base[i], std::move(nb)};
    }
    return keys;
}

struct IsoSearch {
    const Multigraph& g;
    const Multigraph& h;
    std::vector<int> g_cls, h_cls;
    std::vector<int> order;       // g-indices, rarest class first
    std::vector<int> mapping;     // g-index -> h-index or -1
    std::vector<int> inverse;     // h-index -> g-index or -1

    bool compatible(int gi, int hi) const {
        if (g_cls[gi] != h_cls[hi]) return false;
        // Multiplicities toward already-mapped vertices must match exactly.
        Vertex gv = g.vertex_at(gi);
        for (const auto& [w, m] : g.neighbors(gv)) {
            int wj = g.index_of(w);
            if (mapping[wj] >= 0 &&
                h.multiplicity(h.vertex_at(hi), h.vertex_at(mapping[wj])) != m)
                return false;
        }
        // And mapped vertices adjacent to hi must be preimages of gv-neighbors.
        Vertex hv = h.vertex_at(hi);
        for (const auto& [w, m] : h.neighbors(hv)) {
            int wj = h.index_of(w);
            if (inverse[wj] >= 0 && g.multiplicity(gv, g.vertex_at(inverse[wj])) != m)
                return false;
        }
        return true;
    }

    bool extend(size_t pos) {
        if (pos == order.size()) return true;
        int gi = order[pos];
        for (int hi = 0; hi < h.vertex_count(); ++hi) {
            if (inverse[hi] >= 0 || !compatible(gi, hi)) continue;
            mapping[gi] = hi;
            inverse[hi] = gi;
            if (extend(pos + 1)) return true;
            mapping[gi] = -1;
            inverse[hi] = -1;
        }
        return false;
    }
};

}  // namespace detail

// Exact isomorphism respecting edge multiplicities, as a vertex-index mapping
// g-index -> h-index. Backtracking with invariant-class pruning; intended for
// small graphs only.
inline std::optional<std::vector<int>> find_isomorphism(const Multigraph& g, const Multigraph& h) {
    if (g.vertex_count() != h.vertex_count()) return std::nullopt;
    if (g.distinct_edge_count() != h.distinct_edge_count()) return std::nullopt;
    if (g.total_multiplicity() != h.total_multiplicity()) return std::nullopt;
    int n = g.vertex_count();
    auto gk = detail::iso_keys(g);
    auto hk = detail::iso_keys(h);
    // Rank keys against the shared sorted key list so class ids agree across
    // the two graphs; mismatched key multisets end the search immediately.
    std::vector<detail::IsoKey> all = gk;
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    auto rank = [&](const detail::IsoKey& k) -> int {
        auto it = std::lower_bound(all.begin(), all.end(), k);
        if (it == all.end() || *it != k) return -1;
        return static_cast<int>(it - all.begin());
    };
    std::vector<int> g_cls(n), h_cls(n);
    std::vector<size_t> g_sizes(all.size(), 0), h_sizes(all.size(), 0);
    for (int i = 0; i < n; ++i) {
        g_cls[i] = rank(gk[i]);
        ++g_sizes[static_cast<size_t>(g_cls[i])];
        h_cls[i] = rank(hk[i]);
        if (h_cls[i] < 0) return std::nullopt;
        ++h_sizes[static_cast<size_t>(h_cls[i])];
    }
    if (g_sizes != h_sizes) return std::nullopt;

    detail::IsoSearch s{g, h, std::move(g_cls), std::move(h_cls), {}, {}, {}};
    s.order.resize(n);
    std::iota(s.order.begin(), s.order.end(), 0);
    std::sort(s.order.begin(), s.order.end(), [&](int a, int b) {
        auto ka = std::make_pair(g_sizes[static_cast<size_t>(s.g_cls[a])], a);
        auto kb = std::make_pair(g_sizes[static_cast<size_t>(s.g_cls[b])], b);
        return ka < kb;
    });
    s.mapping.assign(n, -1);
    s.inverse.assign(n, -1);
    if (!s.extend(0)) return std::nullopt;
    return s.mapping;
}

inline bool isomorphic(const Multigraph& g, const Multigraph& h) {
    return find_isomorphism(g, h).has_value();
}

// All graphs one legal dissolution away from g, deduplicated up to isomorphism.
inline std::vector<Multigraph> dissolution_closure_step(const Multigraph& g) {
    std::vector<Multigraph> out;
    for (Vertex v : dissolvable_vertices(g)) {
        Multigraph h = dissolve(g, v);
        bool fresh = true;
        for (const auto& prev : out)
            if (isomorphic(prev, h)) {
                fresh = false;
                break;
            }
        if (fresh) out.push_back(std::move(h));
    }
    return out;
}

}  // namespace gridcon
