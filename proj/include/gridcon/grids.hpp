#pragma once

#include <string>

#include "gridcon/multigraph.hpp"

namespace gridcon {

// Coordinate helpers for the square-grid vertex numbering: the vertex at row i,
// column j of a k x k grid has id i*k + j and label "(i,j)".
struct GridCoord {
    int i = 0;
    int j = 0;

    static GridCoord of(Vertex v, int k) { return {v / k, v % k}; }
    Vertex id(int k) const { return i * k + j; }
    std::string text() const { return "(" + std::to_string(i) + "," + std::to_string(j) + ")"; }
    bool on_boundary(int k) const { return i == 0 || j == 0 || i == k - 1 || j == k - 1; }
};

// The k x k grid: vertices [0,k-1]^2, edges between coordinate pairs at
// Manhattan distance 1.
inline Multigraph gen_square_grid(int k) {
    if (k < 1) throw input_error("bad-k", "square grid needs k >= 1");
    Multigraph g;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) g.add_vertex(GridCoord{i, j}.id(k), GridCoord{i, j}.text());
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            if (i + 1 < k) g.add_edge(GridCoord{i, j}.id(k), GridCoord{i + 1, j}.id(k));
            if (j + 1 < k) g.add_edge(GridCoord{i, j}.id(k), GridCoord{i, j + 1}.id(k));
        }
    return g;
}

namespace detail {

// Square grid plus the diagonals {(i+1,j),(i,j+1)}, then edges from `hub`
// to every boundary vertex that is not already a neighbor. Insertion is
// row-major, skipping pairs already present.
inline Multigraph triangulated(int k, Vertex hub) {
    Multigraph g = gen_square_grid(k);
    if (!g.has_vertex(hub)) g.add_vertex(hub, "a");
    for (int i = 0; i + 1 < k; ++i)
        for (int j = 0; j + 1 < k; ++j)
            g.add_edge(GridCoord{i + 1, j}.id(k), GridCoord{i, j + 1}.id(k));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            GridCoord c{i, j};
            if (!c.on_boundary(k)) continue;
            Vertex v = c.id(k);
            if (v != hub && !g.has_edge(hub, v)) g.add_edge(hub, v);
        }
    return g;
}

}  // namespace detail

constexpr Vertex gamma_hat_apex(int k) { return k * k; }

// The uniformly triangulated grid: the corner (k-1,k-1) doubles as the hub
// joined to the whole boundary. Defined for k >= 3.
inline Multigraph gen_gamma(int k) {
    if (k < 3) throw input_error("bad-k", "gamma grid needs k >= 3");
    return detail::triangulated(k, GridCoord{k - 1, k - 1}.id(k));
}

// The extended uniformly triangulated grid: a fresh apex vertex (id k*k) is
// joined to the whole boundary instead of the corner.
inline Multigraph gen_gamma_hat(int k) {
    if (k < 3) throw input_error("bad-k", "extended gamma grid needs k >= 3");
    return detail::triangulated(k, gamma_hat_apex(k));
}

}  // namespace gridcon
