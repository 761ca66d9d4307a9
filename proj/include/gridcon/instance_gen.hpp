#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "gridcon/contraction.hpp"
#include "gridcon/grids.hpp"
#include "gridcon/multigraph.hpp"

namespace gridcon {

// splitmix64. The output sequence is pinned by the constants, so generated
// instances are byte-identical across platforms and toolchains.
struct SplitMix64 {
    uint64_t state;
    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    int uniform(int n) { return static_cast<int>(next() % static_cast<uint64_t>(n)); }
    bool chance(int pct) { return uniform(100) < pct; }
};

// A host graph with both hypothesis witnesses built into it: sigma contracts
// g onto the side-k triangulated grid (each grid vertex blown up into a small
// connected gadget), phi contracts g onto h with blocks of diameter <= c
// (randomized balls of radius c/2).
struct GeneratedInstance {
    Multigraph g;
    ContractionWitness sigma;  // grid side k over g
    Multigraph h;
    ContractionWitness phi;    // h as a c-diameter contraction of g
    uint64_t seed = 0;
    int k = 0, c = 0, inflate = 1;
};

inline GeneratedInstance gen_instance(int k, int c, int inflate, uint64_t seed) {
    if (k < 3 || k > 30) throw input_error("budget", "instance grid side must be in [3,30]");
    if (inflate < 1 || inflate > 4) throw input_error("budget", "inflation must be in [1,4]");
    if (c < 0) throw input_error("budget", "negative diameter bound");

    SplitMix64 rng(seed);
    Multigraph gamma = gen_gamma(k);

    GeneratedInstance inst;
    inst.seed = seed;
    inst.k = k;
    inst.c = c;
    inst.inflate = inflate;

    // Gadgets: a random tree on up to `inflate` vertices per grid vertex,
    // with a few extra chords.
    std::map<Vertex, std::vector<Vertex>> gadget;
    std::map<Vertex, Vertex> sigma_map;
    for (Vertex z : gamma.vertices()) {
        int size = 1 + rng.uniform(inflate);
        auto& verts = gadget[z];
        for (int t = 0; t < size; ++t) {
            Vertex v = z * inflate + t;
            inst.g.add_vertex(v);
            verts.push_back(v);
            sigma_map[v] = z;
            if (t > 0) inst.g.add_edge(v, verts[static_cast<size_t>(rng.uniform(t))]);
        }
        for (int t = 0; t < size; ++t)
            for (int u = t + 1; u < size; ++u)
                if (!inst.g.has_edge(verts[static_cast<size_t>(t)], verts[static_cast<size_t>(u)]) &&
                    rng.chance(25))
                    inst.g.add_edge(verts[static_cast<size_t>(t)], verts[static_cast<size_t>(u)]);
    }
    // One crossing edge per grid edge, between random gadget vertices.
    for (const auto& [e, m] : gamma.edges()) {
        const auto& a = gadget[e.first];
        const auto& b = gadget[e.second];
        inst.g.add_edge(a[static_cast<size_t>(rng.uniform(static_cast<int>(a.size())))],
                        b[static_cast<size_t>(rng.uniform(static_cast<int>(b.size())))]);
    }
    inst.sigma = ContractionWitness{inst.g, gamma, sigma_map, WitnessKind::Unbounded, 0};

    // Clouds: grow a randomized ball of radius c/2 around the smallest
    // unassigned vertex until everything is assigned. Skipped neighbors can
    // only rejoin through assigned ones, so blocks stay connected and their
    // induced diameter stays at most 2*(c/2) <= c.
    int radius = c / 2;
    std::map<Vertex, Vertex> phi_map;
    int block = 0;
    for (Vertex v : inst.g.vertices()) {
        if (phi_map.count(v)) continue;
        std::vector<std::pair<Vertex, int>> queue{{v, 0}};
        phi_map[v] = block;
        size_t head = 0;
        while (head < queue.size()) {
            auto [x, d] = queue[head++];
            if (d == radius) continue;
            for (const auto& [y, mult] : inst.g.neighbors(x)) {
                if (phi_map.count(y)) continue;
                if (!rng.chance(70)) continue;
                phi_map[y] = block;
                queue.push_back({y, d + 1});
            }
        }
        ++block;
    }
    inst.h = quotient(inst.g, phi_map);
    inst.phi = ContractionWitness{inst.g, inst.h, phi_map, WitnessKind::Diameter, c};

    auto vs = verify_contraction(inst.sigma);
    if (!vs) throw internal_error("instance-sigma", vs.violation);
    auto vp = verify_contraction(inst.phi);
    if (!vp) throw internal_error("instance-phi", vp.violation);
    return inst;
}

}  // namespace gridcon
