#include "doctest.h"
#include "gridcon/contraction.hpp"
#include "gridcon/grids.hpp"
#include <numeric>

#include "test_support.hpp"

using namespace gridcon;
using testsup::Rng;

namespace {

ContractionWitness c4_to_k2() {
    auto c4 = testsup::cycle_graph(4);
    Multigraph k2;
    k2.add_vertex(0);
    k2.add_vertex(1);
    k2.add_edge(0, 1);
    ContractionWitness w{c4, k2, {{0, 0}, {1, 0}, {2, 1}, {3, 1}}, WitnessKind::Size, 2};
    return w;
}

}  // namespace

TEST_CASE("verify_contraction accepts the definition cases") {
    Rng rng(3);
    auto g = testsup::random_connected_graph(rng, 6);
    auto idw = ContractionWitness::identity(g, WitnessKind::Diameter, 0);
    CHECK(verify_contraction(idw).ok);

    auto w = c4_to_k2();
    CHECK(verify_contraction(w).ok);
    w.kind = WitnessKind::Diameter;
    w.bound = 1;
    CHECK(verify_contraction(w).ok);
}

TEST_CASE("verify_contraction rejects a missing quotient edge") {
    auto w = c4_to_k2();
    Multigraph twodots;
    twodots.add_vertex(0);
    twodots.add_vertex(1);
    w.target = twodots;
    w.kind = WitnessKind::Unbounded;
    auto v = verify_contraction(w);
    CHECK_FALSE(v.ok);
    CHECK(v.violation.find("adjacency-law") == 0);
}

TEST_CASE("verify_contraction verdicts vs input errors") {
    auto w = c4_to_k2();
    w.sigma.erase(3);
    CHECK_THROWS_AS(verify_contraction(w), input_error);  // not total

    w = c4_to_k2();
    w.sigma[3] = 9;  // outside target
    CHECK_THROWS_AS(verify_contraction(w), input_error);

    w = c4_to_k2();
    w.sigma[2] = 0;
    w.sigma[3] = 0;  // target vertex 1 uncovered
    auto v = verify_contraction(w);
    CHECK_FALSE(v.ok);
    CHECK(v.violation.find("surjectivity") == 0);

    // Disconnected preimage: opposite corners of the cycle.
    auto c4 = testsup::cycle_graph(4);
    Multigraph k2;
    k2.add_vertex(0);
    k2.add_vertex(1);
    k2.add_edge(0, 1);
    ContractionWitness bad{c4, k2, {{0, 0}, {2, 0}, {1, 1}, {3, 1}}, WitnessKind::Unbounded, 0};
    auto bv = verify_contraction(bad);
    CHECK_FALSE(bv.ok);
    CHECK(bv.violation.find("connectivity") == 0);

    // Size and diameter bounds.
    auto ws = c4_to_k2();
    ws.bound = 1;
    CHECK(verify_contraction(ws).violation.find("size-bound") == 0);
    ws.kind = WitnessKind::Diameter;
    ws.bound = 0;
    CHECK(verify_contraction(ws).violation.find("diameter-bound") == 0);
}

TEST_CASE("find_contraction on the spec instances") {
    auto c4 = testsup::cycle_graph(4);
    Multigraph k2;
    k2.add_vertex(0);
    k2.add_vertex(1);
    k2.add_edge(0, 1);
    auto w = find_contraction(c4, k2, WitnessKind::Size, 2);
    REQUIRE(w.has_value());
    CHECK(verify_contraction(*w).ok);

    // The square grid cannot reach the triangulated grid: same vertex count
    // forces singleton blocks, and the edge sets differ.
    CHECK_FALSE(find_contraction(gen_square_grid(3), gen_gamma(3), WitnessKind::Unbounded));

    Rng rng(7);
    auto g = testsup::random_connected_graph(rng, 7);
    auto idw = find_contraction(g, g, WitnessKind::Diameter, 0);
    REQUIRE(idw.has_value());
    CHECK(verify_contraction(*idw).ok);
}

TEST_CASE("find_contraction budget is a distinct outcome") {
    auto big = gen_square_grid(4);  // 16 > 12 vertices
    CHECK_THROWS_AS(find_contraction(big, testsup::complete_graph(2), WitnessKind::Unbounded),
                    resource_error);
    SearchBudget tiny;
    tiny.max_states = 10;
    CHECK_THROWS_AS(
        find_contraction(testsup::cycle_graph(8), testsup::cycle_graph(3), WitnessKind::Unbounded, 0, tiny),
        resource_error);
}

TEST_CASE("found witnesses always verify (round-trip property)") {
    Rng rng(41);
    for (int round = 0; round < 15; ++round) {
        auto g = testsup::random_connected_graph(rng, 5 + rng.uniform(3));
        // Random connected partition: contract a few random edges.
        auto closure = testsup::contraction_closure_oracle(g);
        // Pick a random member as target by index.
        auto it = closure.begin();
        std::advance(it, rng.uniform(static_cast<int>(closure.size())));
        auto h = testsup::from_small({it->first, it->second});
        auto w = find_contraction(g, h, WitnessKind::Unbounded);
        REQUIRE(w.has_value());
        CHECK(verify_contraction(*w).ok);
    }
}

TEST_CASE("find_contraction agrees with the edge-contraction oracle (spot checks)") {
    Rng rng(43);
    for (int round = 0; round < 8; ++round) {
        int n = 5 + rng.uniform(2);
        auto g = testsup::random_connected_graph(rng, n);
        auto closure = testsup::contraction_closure_oracle(g);
        // Positive and negative candidates: all cycles and cliques up to n.
        for (int m = 3; m <= n; ++m) {
            for (auto cand : {testsup::cycle_graph(m), testsup::complete_graph(m)}) {
                bool oracle = closure.count(testsup::canon(testsup::to_small(cand))) > 0;
                bool found = find_contraction(g, cand, WitnessKind::Unbounded).has_value();
                CHECK(oracle == found);
            }
        }
    }
}

TEST_CASE("bcg on the spec instances") {
    CHECK(bcg(gen_gamma(3)) == 3);

    Multigraph tree;
    for (int i = 0; i < 10; ++i) tree.add_vertex(i);
    for (int i = 1; i < 10; ++i) tree.add_edge(i, (i - 1) / 2);
    CHECK(bcg(tree) == 0);

    CHECK(bcg(testsup::complete_graph(9)) == 0);
    CHECK_FALSE(gen_gamma(3).has_edge(GridCoord{0, 0}.id(3), GridCoord{2, 0}.id(3)));
}

TEST_CASE("bcg is monotone under contraction") {
    Rng rng(47);
    std::vector<Multigraph> hosts;
    // A graph that certainly reaches bcg 3: the triangulated grid with a
    // pendant vertex, plus random 9-vertex graphs.
    auto g3plus = gen_gamma(3);
    g3plus.add_vertex(100);
    g3plus.add_edge(100, 0);
    hosts.push_back(g3plus);
    for (int round = 0; round < 5; ++round)
        hosts.push_back(testsup::random_connected_graph(rng, 9, 40));

    for (const auto& g : hosts) {
        int bg = bcg(g);
        for (int round = 0; round < 6; ++round) {
            auto blocks = testsup::random_connected_partition(rng, g, 1 + rng.uniform(3));
            auto h = quotient(g, blocks);
            ContractionWitness w{g, h, blocks, WitnessKind::Unbounded, 0};
            REQUIRE(verify_contraction(w).ok);
            CHECK(bcg(h) <= bg);
        }
    }
    CHECK(bcg(g3plus) == 3);
}

TEST_CASE("dissolution invariance for min-degree-3 targets") {
    // If Q <= G and delta(Q) >= 3, dissolving any degree-2 vertex of G keeps Q <= G.
    Rng rng(53);
    auto k4 = testsup::complete_graph(4);
    int tested = 0;
    while (tested < 10) {
        auto g = testsup::random_connected_graph(rng, 6 + rng.uniform(3), 25);
        auto cands = dissolvable_vertices(g);
        if (cands.empty()) continue;
        if (!find_contraction(g, k4, WitnessKind::Unbounded)) continue;
        ++tested;
        for (Vertex v : cands) {
            auto h = dissolve(g, v);
            CHECK(find_contraction(h, k4, WitnessKind::Unbounded).has_value());
        }
    }
}

TEST_CASE("compose witnesses") {
    auto g = testsup::cycle_graph(6);
    auto id1 = ContractionWitness::identity(g, WitnessKind::Unbounded, 0);
    auto composed = contraction_compose(id1, id1);
    CHECK(verify_contraction(composed).ok);

    // C6 -> C3 by pairing adjacent vertices, then C3 -> K1.
    Multigraph c3 = testsup::cycle_graph(3);
    ContractionWitness w1{g, c3, {{0, 0}, {1, 0}, {2, 1}, {3, 1}, {4, 2}, {5, 2}}, WitnessKind::Size, 2};
    REQUIRE(verify_contraction(w1).ok);
    Multigraph k1;
    k1.add_vertex(0);
    ContractionWitness w2{c3, k1, {{0, 0}, {1, 0}, {2, 0}}, WitnessKind::Unbounded, 0};
    REQUIRE(verify_contraction(w2).ok);
    auto w = contraction_compose(w1, w2);
    CHECK(verify_contraction(w).ok);
    CHECK(w.target.vertex_count() == 1);

    ContractionWitness mismatched{c3, k1, {{0, 0}, {1, 0}, {2, 0}}, WitnessKind::Unbounded, 0};
    mismatched.source = testsup::cycle_graph(4);
    mismatched.sigma[3] = 0;
    CHECK_THROWS_AS(contraction_compose(w1, mismatched), input_error);
}

TEST_CASE("bcg respects the search budget") {
    CHECK_THROWS_AS(bcg(gen_square_grid(4)), resource_error);  // 16 > 12 vertices
    SearchBudget wide;
    wide.max_vertices = 13;
    std::vector<Vertex> ids(13);
    std::iota(ids.begin(), ids.end(), 0);
    CHECK(bcg(testsup::path_graph(ids), wide) == 0);  // 13-vertex path, search completes
}
