#pragma once

#include <array>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <vector>

#include "gridcon/conquest.hpp"
#include "gridcon/contraction.hpp"
#include "gridcon/grids.hpp"

namespace gridcon {

// ---------------------------------------------------------------------------
// Building the initial configuration from two witnesses
//
// sigma contracts the host G onto the uniformly triangulated grid of side
// k* = 1 + (2c+1)(k'+1); phi contracts G onto H with blocks of diameter <= c.
// Anchors sit on the (2c+1)-spaced sublattice of the grid; interior anchors
// become capitals, the outer ring collapses into one border capital, and the
// link graph over anchors is exactly the extended triangulated grid of side
// k'. Interior anchors are numbered so that anchor (i,j) of the lattice gets
// index (i-1)*k' + (j-1), matching the vertex ids of gen_gamma_hat(k');
// the border capital takes the apex index k'*k'.
// ---------------------------------------------------------------------------

namespace detail {

struct AnchorLattice {
    int k_prime = 0, c = 0, k_star = 0;
    std::vector<Vertex> interior;       // anchor index -> grid vertex id
    std::vector<Vertex> outer;          // ring anchors, row-major
    int spacing() const { return 2 * c + 1; }

    static AnchorLattice build(int k_prime, int c) {
        AnchorLattice L;
        L.k_prime = k_prime;
        L.c = c;
        L.k_star = 1 + (2 * c + 1) * (k_prime + 1);
        for (int i = 1; i <= k_prime; ++i)
            for (int j = 1; j <= k_prime; ++j)
                L.interior.push_back(GridCoord{i * L.spacing(), j * L.spacing()}.id(L.k_star));
        for (int i = 0; i <= k_prime + 1; ++i)
            for (int j = 0; j <= k_prime + 1; ++j)
                if (i == 0 || j == 0 || i == k_prime + 1 || j == k_prime + 1)
                    L.outer.push_back(GridCoord{i * L.spacing(), j * L.spacing()}.id(L.k_star));
        return L;
    }
};

inline std::vector<int> bfs_from_set(const Multigraph& g, const std::vector<Vertex>& sources) {
    std::vector<int> dist(static_cast<size_t>(g.vertex_count()), std::numeric_limits<int>::max());
    std::queue<int> q;
    for (Vertex s : sources) {
        dist[static_cast<size_t>(g.index_of(s))] = 0;
        q.push(g.index_of(s));
    }
    while (!q.empty()) {
        int x = q.front();
        q.pop();
        for (const auto& [y, m] : g.neighbors(g.vertex_at(x))) {
            int yi = g.index_of(y);
            if (dist[static_cast<size_t>(yi)] != std::numeric_limits<int>::max()) continue;
            dist[static_cast<size_t>(yi)] = dist[static_cast<size_t>(x)] + 1;
            q.push(yi);
        }
    }
    return dist;
}

// Lexicographically least among the shortest paths from `from` to the vertex
// set at distance 0 of `dist_to_set`: descend greedily through the smallest-id
// neighbor that still loses one unit of distance.
inline std::vector<Vertex> lex_least_descent(const Multigraph& g, Vertex from,
                                             const std::vector<int>& dist_to_set) {
    std::vector<Vertex> path{from};
    int cur = dist_to_set[static_cast<size_t>(g.index_of(from))];
    while (cur > 0) {
        Vertex best = -1;
        for (const auto& [y, m] : g.neighbors(path.back())) {
            if (dist_to_set[static_cast<size_t>(g.index_of(y))] != cur - 1) continue;
            if (best < 0 || y < best) best = y;
        }
        if (best < 0) throw internal_error("descent", "no distance-decreasing neighbor");
        path.push_back(best);
        --cur;
    }
    return path;
}

// A freeway between the capitals of anchors a (grid path start) and b: walks
// the sigma-preimages of the grid path's vertices block by block, entering
// each block once and leaving through the smallest-id doorway. The result
// meets each capital in exactly one vertex and crosses between the two state
// sides exactly once.
inline std::vector<Vertex> monotone_block_path(const Multigraph& g,
                                               const std::vector<VertexSet>& blocks) {
    std::vector<Vertex> path;
    // Entry: smallest vertex of block 0 adjacent to block 1.
    for (Vertex v : blocks[0]) {
        bool door = false;
        for (const auto& [w, m] : g.neighbors(v))
            if (set_contains(blocks[1], w)) {
                door = true;
                break;
            }
        if (door) {
            path.push_back(v);
            break;
        }
    }
    if (path.empty()) throw internal_error("freeway", "no edge between consecutive blocks");

    for (size_t t = 1; t < blocks.size(); ++t) {
        // Step through the doorway into block t: smallest-id neighbor.
        Vertex entry = -1;
        for (const auto& [w, m] : g.neighbors(path.back()))
            if (set_contains(blocks[t], w) && (entry < 0 || w < entry)) entry = w;
        if (entry < 0) throw internal_error("freeway", "blocks not adjacent along the grid path");
        path.push_back(entry);
        if (t + 1 == blocks.size()) break;

        // Walk inside block t to its nearest doorway toward block t+1.
        const VertexSet& blk = blocks[t];
        std::map<Vertex, Vertex> parent;
        parent[entry] = entry;
        std::queue<Vertex> q;
        q.push(entry);
        Vertex exit = -1;
        auto is_door = [&](Vertex v) {
            for (const auto& [w, m] : g.neighbors(v))
                if (set_contains(blocks[t + 1], w)) return true;
            return false;
        };
        if (is_door(entry)) continue;  // already at a doorway
        while (!q.empty() && exit < 0) {
            Vertex x = q.front();
            q.pop();
            std::vector<Vertex> nbs;
            for (const auto& [y, m] : g.neighbors(x))
                if (set_contains(blk, y) && !parent.count(y)) nbs.push_back(y);
            std::sort(nbs.begin(), nbs.end());
            for (Vertex y : nbs) {
                parent[y] = x;
                if (is_door(y)) {
                    exit = y;
                    break;
                }
                q.push(y);
            }
        }
        if (exit < 0) throw internal_error("freeway", "block has no doorway to the next block");
        std::vector<Vertex> inside{exit};
        while (inside.back() != entry) inside.push_back(parent[inside.back()]);
        path.insert(path.end(), inside.rbegin() + 1, inside.rend() - 0);
    }
    return path;
}

}  // namespace detail

// Builds the initial A-normal configuration from the two witnesses. sigma
// must target exactly the triangulated grid of side 1 + (2c+1)(k'+1) with
// row-major ids; phi provides the clouds. Fails closed: the produced
// configuration is verified before being returned.
inline StateConfiguration init_configuration(const Multigraph& g, const ContractionWitness& sigma,
                                             const ContractionWitness& phi, int k_prime) {
    if (k_prime < 3) throw input_error("k-prime", "the target grid side must be at least 3");
    if (phi.kind != WitnessKind::Diameter)
        throw input_error("phi-kind", "phi must be a diameter-bounded contraction witness");
    int c = phi.bound;
    if (c < 0) throw input_error("phi-bound", "negative diameter bound");
    if (!is_connected(g)) throw input_error("disconnected", "the host graph must be connected");

    int k_star = 1 + (2 * c + 1) * (k_prime + 1);
    int have = sigma.target.vertex_count();
    if (have != k_star * k_star)
        throw input_error("k-star", "sigma targets a grid on " + std::to_string(have) +
                                        " vertices; the construction needs side " +
                                        std::to_string(k_star) + " (" +
                                        std::to_string(k_star * k_star) + " vertices)");
    if (!sigma.target.identical_to(gen_gamma(k_star)))
        throw input_error("sigma-target", "sigma's target is not the row-major triangulated grid");
    if (!sigma.source.identical_to(g) || !phi.source.identical_to(g))
        throw input_error("witness-source", "both witnesses must contract the given host");
    auto vs = verify_contraction(sigma);
    if (!vs) throw input_error("sigma-invalid", vs.violation);
    auto vp = verify_contraction(phi);
    if (!vp) throw input_error("phi-invalid", vp.violation);

    const Multigraph gamma = sigma.target;
    auto lattice = detail::AnchorLattice::build(k_prime, c);
    int spacing = lattice.spacing();
    int anchors = k_prime * k_prime + 1;
    int border = anchors - 1;  // apex index

    // sigma preimages per grid vertex.
    std::map<Vertex, VertexSet> pre;
    for (const auto& [v, x] : sigma.sigma) pre[x].push_back(v);
    for (auto& [x, s] : pre) std::sort(s.begin(), s.end());

    // Grid distances from every anchor (border = the whole outer ring).
    std::vector<std::vector<int>> gamma_dist;
    for (Vertex a : lattice.interior) gamma_dist.push_back(detail::bfs_from_set(gamma, {a}));
    gamma_dist.push_back(detail::bfs_from_set(gamma, lattice.outer));

    // Capitals and states.
    std::vector<VertexSet> capitals(static_cast<size_t>(anchors));
    std::vector<VertexSet> states(static_cast<size_t>(anchors));
    for (int a = 0; a < anchors; ++a) {
        VertexSet cap, state;
        for (Vertex gv : gamma.vertices()) {
            int d = gamma_dist[static_cast<size_t>(a)][static_cast<size_t>(gamma.index_of(gv))];
            if (d == 0)
                for (Vertex v : pre[gv]) cap.push_back(v);
            if (d <= c)
                for (Vertex v : pre[gv]) state.push_back(v);
        }
        capitals[static_cast<size_t>(a)] = make_set(std::move(cap));
        states[static_cast<size_t>(a)] = make_set(std::move(state));
    }

    // Links: interior pairs at grid distance exactly 2c+1, and the border
    // anchor with interior anchors on the lattice frame. The link graph must
    // come out as the extended triangulated grid, vertex for vertex.
    Multigraph lambda;
    for (int a = 0; a < anchors; ++a) lambda.add_vertex(a);
    for (int a = 0; a < static_cast<int>(lattice.interior.size()); ++a)
        for (int b = a + 1; b < static_cast<int>(lattice.interior.size()); ++b) {
            int d = gamma_dist[static_cast<size_t>(a)]
                              [static_cast<size_t>(gamma.index_of(lattice.interior[static_cast<size_t>(b)]))];
            if (d == spacing) lambda.add_edge(a, b);
        }
    for (int a = 0; a < static_cast<int>(lattice.interior.size()); ++a) {
        int i = a / k_prime + 1, j = a % k_prime + 1;
        if (i == 1 || j == 1 || i == k_prime || j == k_prime) lambda.add_edge(a, border);
    }
    if (!lambda.identical_to(gen_gamma_hat(k_prime)))
        throw internal_error("lambda", "the link graph is not the extended triangulated grid");

    // Grid paths Z and freeway paths P, one per link.
    std::vector<Freeway> freeways;
    for (const auto& [e, m] : lambda.edges()) {
        int a = e.first, b = e.second;
        std::vector<Vertex> z;
        if (b != border) {
            // Straight or antidiagonal segment between the two lattice points.
            GridCoord ca = GridCoord::of(lattice.interior[static_cast<size_t>(a)], k_star);
            GridCoord cb = GridCoord::of(lattice.interior[static_cast<size_t>(b)], k_star);
            int di = (cb.i > ca.i) - (cb.i < ca.i), dj = (cb.j > ca.j) - (cb.j < ca.j);
            for (int t = 0; t <= spacing; ++t)
                z.push_back(GridCoord{ca.i + t * di, ca.j + t * dj}.id(k_star));
        } else {
            z = detail::lex_least_descent(gamma, lattice.interior[static_cast<size_t>(a)],
                                          gamma_dist[static_cast<size_t>(border)]);
        }
        if (static_cast<int>(z.size()) != spacing + 1)
            throw internal_error("z-path", "anchor path has the wrong length");
        std::vector<VertexSet> blocks;
        for (Vertex gz : z) blocks.push_back(pre[gz]);
        Freeway f;
        f.a = a;
        f.b = b;
        f.path = detail::monotone_block_path(g, blocks);
        freeways.push_back(std::move(f));
    }

    // Clouds: phi preimages, ordered by target vertex id.
    std::vector<VertexSet> clouds;
    {
        std::map<Vertex, VertexSet> cpre;
        for (const auto& [v, x] : phi.sigma) cpre[x].push_back(v);
        for (auto& [x, s] : cpre) clouds.push_back(make_set(std::move(s)));
    }

    // Host-vertex distances to each anchor, through sigma.
    auto host_dist = std::make_shared<std::vector<std::vector<int>>>(
        static_cast<size_t>(anchors),
        std::vector<int>(static_cast<size_t>(g.vertex_count()), 0));
    for (int a = 0; a < anchors; ++a)
        for (int i = 0; i < g.vertex_count(); ++i) {
            Vertex image = sigma.sigma.at(g.vertex_at(i));
            (*host_dist)[static_cast<size_t>(a)][static_cast<size_t>(i)] =
                gamma_dist[static_cast<size_t>(a)][static_cast<size_t>(gamma.index_of(image))];
        }

    auto s = assemble_configuration(std::make_shared<Multigraph>(g), std::move(lambda),
                                    std::move(capitals), std::move(states), std::move(freeways),
                                    std::move(clouds), c);
    s.k_prime = k_prime;
    s.anchor_dist = host_dist;

    auto v = verify_state_configuration(s);
    if (!v)
        throw internal_error("initial-configuration",
                             "the constructed configuration fails verification: " + v.violation);
    return s;
}

// ---------------------------------------------------------------------------
// Finalization: from a complete configuration to a grid witness over H
// ---------------------------------------------------------------------------

// Contracts every state of a complete grid-backed configuration. Since every
// cloud lies inside one state, the states project to a partition of V(H);
// the quotient must equal the extended grid exactly, and merging the border
// block into the grid corner yields the triangulated-grid witness over H.
inline ContractionWitness finalize(const StateConfiguration& s, const ContractionWitness& phi) {
    if (s.k_prime < 3)
        throw input_error("not-grid-backed", "finalize needs a configuration from init_configuration");
    if (s.indep_size() != 0)
        throw input_error("incomplete", "configuration still has independent vertices");
    const Multigraph& h = phi.target;
    int k_prime = s.k_prime;
    int border = k_prime * k_prime;

    // Each H vertex's cloud lies inside exactly one state.
    std::map<Vertex, Vertex> to_state;
    for (const auto& [v, x] : phi.sigma) {
        int o = s.owner_of(v);
        if (o < 0) throw internal_error("finalize", "uncovered vertex after completion");
        auto it = to_state.find(x);
        if (it == to_state.end())
            to_state[x] = o;
        else if (it->second != o)
            throw internal_error("finalize", "cloud of H vertex " + std::to_string(x) +
                                                 " spans two states; front is not empty");
    }

    // The quotient of H by states must be the link graph: an edge outside it
    // would join two unlinked states, which the construction rules out.
    Multigraph q = quotient(h, to_state);
    if (!q.same_simple_adjacency(s.lambda)) {
        for (const auto& [e, m] : q.edges())
            if (!s.lambda.has_edge(e.first, e.second))
                throw internal_error("finalize-extra-edge",
                                     "states " + std::to_string(e.first) + " and " +
                                         std::to_string(e.second) +
                                         " touch without being linked");
        throw internal_error("finalize-missing-edge", "a link produced no quotient edge");
    }

    // Merge the border block into the corner block; interior anchor indices
    // already equal the grid's row-major ids.
    Vertex corner = GridCoord{k_prime - 1, k_prime - 1}.id(k_prime);
    ContractionWitness w;
    w.source = h;
    w.target = gen_gamma(k_prime);
    w.kind = WitnessKind::Unbounded;
    for (const auto& [x, a] : to_state) w.sigma[x] = a == border ? corner : a;
    auto v = verify_contraction(w);
    if (!v) throw internal_error("finalize-witness", "the grid witness fails: " + v.violation);
    return w;
}

// ---------------------------------------------------------------------------
// Transfer: the full pipeline
// ---------------------------------------------------------------------------

struct TransferResult {
    bool degenerate = false;  // the computed grid side fell below 3
    int k = 0, c = 0, k_prime = 0, k_star = 0;
    std::optional<ContractionWitness> witness;  // grid side k_prime over H
    ConquestStats stats;
};

// Witness that the triangulated grid of side k contracts onto the one of
// side k_star <= k: rows and columns from k_star-1 on collapse into the last
// row and column band.
inline ContractionWitness grid_restriction_witness(int k, int k_star) {
    if (k_star > k || k_star < 3) throw input_error("restriction", "need 3 <= k_star <= k");
    ContractionWitness w;
    w.source = gen_gamma(k);
    w.target = gen_gamma(k_star);
    w.kind = WitnessKind::Unbounded;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            w.sigma[GridCoord{i, j}.id(k)] =
                GridCoord{std::min(i, k_star - 1), std::min(j, k_star - 1)}.id(k_star);
    auto v = verify_contraction(w);
    if (!v) throw internal_error("restriction", "grid restriction fails: " + v.violation);
    return w;
}

// Given witnesses for grid side k over G and for H as a c-diameter
// contraction of G, produces a verified witness for grid side
// (k-1)/(2c+1) - 1 over H, or reports the degenerate case.
inline TransferResult transfer(const Multigraph& g, const ContractionWitness& sigma,
                               const ContractionWitness& phi, ConquestStats* stats = nullptr,
                               const TraceFn& trace = nullptr) {
    TransferResult r;
    if (!is_connected(g)) throw input_error("disconnected", "transfer needs a connected host");
    if (phi.kind != WitnessKind::Diameter)
        throw input_error("phi-kind", "phi must be a diameter-bounded witness");
    auto vs = verify_contraction(sigma);
    if (!vs) throw input_error("sigma-invalid", vs.violation);
    auto vp = verify_contraction(phi);
    if (!vp) throw input_error("phi-invalid", vp.violation);

    int n = sigma.target.vertex_count();
    int k = 0;
    while (k * k < n) ++k;
    if (k * k != n || !sigma.target.identical_to(gen_gamma(k)))
        throw input_error("sigma-target", "sigma must target a row-major triangulated grid");

    r.k = k;
    r.c = phi.bound;
    r.k_prime = (k - 1) / (2 * r.c + 1) - 1;
    r.k_star = 1 + (2 * r.c + 1) * (r.k_prime + 1);
    if (r.k_prime < 3) {
        r.degenerate = true;
        return r;
    }

    ContractionWitness sigma_star =
        r.k_star == k ? sigma : contraction_compose(sigma, grid_restriction_witness(k, r.k_star));
    auto s = init_configuration(g, sigma_star, phi, r.k_prime);
    s = run_conquest(std::move(s), stats ? stats : &r.stats, trace);
    if (stats) r.stats = *stats;
    r.witness = finalize(s, phi);
    return r;
}

}  // namespace gridcon
