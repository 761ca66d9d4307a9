#include "doctest.h"
#include "gridcon/extension.hpp"
#include "gridcon/grids.hpp"
#include "test_support.hpp"

using namespace gridcon;
using testsup::Rng;

namespace {

Multigraph star4() {  // center 1, leaves 0, 2, 3
    Multigraph g;
    for (int v : {0, 1, 2, 3}) g.add_vertex(v);
    g.add_edge(1, 0);
    g.add_edge(1, 2);
    g.add_edge(1, 3);
    return g;
}

// Random family of connected subsets over a random connected host, redrawn
// until the intersection graph's edge-degree lands in [1, 3].
IntersectionInstance random_intersection(Rng& rng, int host_n, int& d_out) {
    while (true) {
        auto host = testsup::random_connected_graph(rng, host_n, 25);
        std::vector<VertexSet> family;
        int sets = 2 + rng.uniform(4);
        for (int s = 0; s < sets; ++s) {
            Vertex seed = host.vertex_at(rng.uniform(host.vertex_count()));
            VertexSet members{seed};
            int want = 1 + rng.uniform(3);
            while (static_cast<int>(members.size()) < want) {
                std::vector<Vertex> frontier;
                for (Vertex v : members)
                    for (const auto& [w, m] : host.neighbors(v))
                        if (!set_contains(members, w)) frontier.push_back(w);
                if (frontier.empty()) break;
                Vertex pick = frontier[static_cast<size_t>(rng.uniform(static_cast<int>(frontier.size())))];
                members.insert(std::lower_bound(members.begin(), members.end(), pick), pick);
            }
            family.push_back(members);
        }
        auto inst = build_intersection(host, family);
        int d = edge_degree_bound(inst.result);
        if (d >= 1 && d <= 3) {
            d_out = d;
            return inst;
        }
    }
}

}  // namespace

TEST_CASE("build_intersection on the small worked examples") {
    auto path = testsup::path_graph({0, 1, 2});
    auto two = build_intersection(path, {{0, 1}, {1, 2}});
    CHECK(two.result.vertex_count() == 2);
    CHECK(two.result.multiplicity(0, 1) == 1);

    auto star = star4();
    auto tri = build_intersection(star, {{0, 1}, {1, 2}, {1, 3}});
    CHECK(tri.result.distinct_edge_count() == 3);
    for (const auto& [e, m] : tri.result.edges()) CHECK(m == 1);
    CHECK(edge_degree_bound(tri.result) == 2);

    auto dup = build_intersection(path, {{0, 1, 2}, {0, 1, 2}});
    CHECK(dup.result.multiplicity(0, 1) == 3);

    CHECK_THROWS_AS(build_intersection(path, {{0, 2}}), input_error);  // disconnected member
    CHECK_THROWS_AS(build_intersection(path, {{}}), input_error);
}

TEST_CASE("edge_degree_bound counts multiplicity") {
    CHECK(edge_degree_bound(testsup::complete_graph(3)) == 2);
    Multigraph k2;
    k2.add_vertex(0);
    k2.add_vertex(1);
    k2.add_edge(0, 1, 5);
    CHECK(edge_degree_bound(k2) == 5);
    Multigraph empty;
    CHECK(edge_degree_bound(empty) == 0);
}

TEST_CASE("path overlap, d = 1: both trees are the shared vertex") {
    auto path = testsup::path_graph({0, 1, 2});
    auto inst = build_intersection(path, {{0, 1}, {1, 2}});
    auto w = build_kil45io_witness(inst, 1);
    CHECK(w.c1 == 2);
    CHECK(w.c2 == 0);
    CHECK(w.base.vertex_count() == 1);   // both reduced trees are vertex 1
    CHECK(w.middle.vertex_count() == 2); // two copies of it
    CHECK(w.middle.distinct_edge_count() == 1);
    CHECK(verify_extension(w).ok);
}

TEST_CASE("star overlap, d = 2: the middle graph is a triangle") {
    auto inst = build_intersection(star4(), {{0, 1}, {1, 2}, {1, 3}});
    auto w = build_kil45io_witness(inst, 2);
    CHECK(w.c1 == 3);
    CHECK(w.c2 == 1);
    CHECK(w.base.vertex_count() == 1);
    CHECK(w.middle.vertex_count() == 3);
    CHECK(w.middle.distinct_edge_count() == 3);
    CHECK(isomorphic(w.middle, testsup::complete_graph(3)));
    CHECK(verify_extension(w).ok);
}

TEST_CASE("pairwise-disjoint family yields edgeless witnesses") {
    auto path = testsup::path_graph({0, 1, 2, 3});
    auto inst = build_intersection(path, {{0}, {2}});
    CHECK(inst.result.distinct_edge_count() == 0);
    auto w = build_kil45io_witness(inst, 1);
    CHECK(w.middle.distinct_edge_count() == 0);
    CHECK(verify_extension(w).ok);
}

TEST_CASE("a vertex in too many members is rejected by name") {
    auto star = star4();
    // Vertex 1 lies in four members; with d = 2 that breaches d+1 = 3.
    auto inst = build_intersection(star, {{0, 1}, {1, 2}, {1, 3}, {1}});
    try {
        build_kil45io_witness(inst, 2);
        FAIL("expected rejection");
    } catch (const input_error& e) {
        CHECK(e.code() == "vertex-multiplicity");
    }

    // Degree violation alone: two duplicate members overlap in three
    // vertices, so each membership count stays at d+1 = 2 but the single
    // intersection edge has multiplicity 3.
    auto path = testsup::path_graph({0, 1, 2});
    auto dup = build_intersection(path, {{0, 1, 2}, {0, 1, 2}});
    try {
        build_kil45io_witness(dup, 1);
        FAIL("expected rejection");
    } catch (const input_error& e) {
        CHECK(e.code() == "degree-bound");
    }
}

TEST_CASE("verify_extension rejects a breached size bound") {
    auto inst = build_intersection(star4(), {{0, 1}, {1, 2}, {1, 3}});
    auto w = build_kil45io_witness(inst, 2);
    CHECK(verify_extension(w).ok);
    w.c1 = 2;  // the clique block has 3 copies
    w.sigma1.bound = 2;
    auto v = verify_extension(w);
    CHECK_FALSE(v.ok);

    // Identity everything, bounds (1,0).
    auto g = testsup::cycle_graph(5);
    ExtensionWitness idw;
    idw.base = idw.middle = idw.result = g;
    idw.c1 = 1;
    idw.c2 = 0;
    idw.sigma1 = ContractionWitness::identity(g, WitnessKind::Size, 1);
    idw.sigma2 = ContractionWitness::identity(g, WitnessKind::Diameter, 0);
    CHECK(verify_extension(idw).ok);
}

TEST_CASE("random instances: bounds, tree diameters, clique sizes") {
    Rng rng(113);
    for (int round = 0; round < 30; ++round) {
        int d = 0;
        auto inst = random_intersection(rng, 6 + rng.uniform(7), d);
        auto w = build_kil45io_witness(inst, d);
        CHECK(verify_extension(w).ok);
        CHECK(w.c1 == d + 1);
        CHECK(w.c2 == d - 1);
        // Blocks of sigma2 are the trees: check their diameters directly.
        for (const auto& b : witness_blocks(w.sigma2)) {
            auto dia = b.size() == 1 ? std::optional<int>(0) : diameter(w.middle, b);
            REQUIRE(dia.has_value());
            CHECK(*dia <= d - 1);
        }
        // Blocks of sigma1 larger than one are the glue cliques.
        for (const auto& b : witness_blocks(w.sigma1)) {
            CHECK(static_cast<int>(b.size()) <= d + 1);
            if (b.size() >= 2)
                for (size_t x = 0; x < b.size(); ++x)
                    for (size_t y = x + 1; y < b.size(); ++y) CHECK(w.middle.has_edge(b[x], b[y]));
        }
    }
}

TEST_CASE("treewidth chain holds on small middles") {
    Rng rng(127);
    int done = 0;
    while (done < 10) {
        int d = 0;
        auto inst = random_intersection(rng, 6 + rng.uniform(4), d);
        auto w = build_kil45io_witness(inst, d);
        if (w.middle.vertex_count() > 16) continue;
        ++done;
        auto r = theorem_bound_check(w, 50.0, 1.0);
        CHECK(r.tw_chain.value());
        CHECK(r.lift_bound.value());
        // tw(J) <= (d+2)(tw(G')+1)-1 with blocks of size d+1.
        CHECK(*r.tw_middle <= (d + 2) * (*r.tw_base + 1) - 1);
    }
}

TEST_CASE("theorem_bound_check reports and validates") {
    auto g = testsup::cycle_graph(5);
    ExtensionWitness idw;
    idw.base = idw.middle = idw.result = g;
    idw.c1 = 1;
    idw.c2 = 0;
    idw.sigma1 = ContractionWitness::identity(g, WitnessKind::Size, 1);
    idw.sigma2 = ContractionWitness::identity(g, WitnessKind::Diameter, 0);
    auto r = theorem_bound_check(idw, 100.0, 1.0);
    CHECK(r.tw_result == 2);
    CHECK(r.tw_chain.value());
    CHECK(r.lift_bound.value());
    CHECK(r.grid_bound.value());
    CHECK(r.combined.value());

    auto star_inst = build_intersection(star4(), {{0, 1}, {1, 2}, {1, 3}});
    auto w = build_kil45io_witness(star_inst, 2);
    auto sr = theorem_bound_check(w, 1.0, 1.0);
    CHECK(sr.tw_result == 2);   // triangle
    CHECK(sr.tw_middle == 2);   // triangle
    CHECK(sr.tw_base == 0);     // single vertex
    CHECK(sr.bcg_base == 0);
    CHECK(sr.tw_chain.value());

    CHECK_THROWS_AS(theorem_bound_check(idw, 0.0, 1.0), input_error);
    CHECK_THROWS_AS(theorem_bound_check(idw, 1.0, 2.0), input_error);

    // Budget handling: strict raises, lenient reports gaps.
    auto big = gen_square_grid(5);
    ExtensionWitness bw;
    bw.base = bw.middle = bw.result = big;
    bw.c1 = 1;
    bw.c2 = 0;
    bw.sigma1 = ContractionWitness::identity(big, WitnessKind::Size, 1);
    bw.sigma2 = ContractionWitness::identity(big, WitnessKind::Diameter, 0);
    CHECK_THROWS_AS(theorem_bound_check(bw, 1.0, 1.0), resource_error);
    TheoremBudget lenient;
    lenient.strict = false;
    auto lr = theorem_bound_check(bw, 1.0, 1.0, lenient);
    CHECK_FALSE(lr.tw_result.has_value());
    CHECK(lr.all_checked_hold());
}
