#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gridcon/contraction.hpp"
#include "gridcon/multigraph.hpp"
#include "gridcon/treewidth.hpp"

namespace gridcon {

// Line-oriented text formats. Blank lines and lines starting with '#' are
// ignored everywhere.

namespace detail {

inline std::vector<std::string> format_lines(std::istream& in) {
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        out.push_back(line);
    }
    return out;
}

inline std::vector<std::string> tokens(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    std::string t;
    while (ss >> t) out.push_back(t);
    return out;
}

inline int to_int(const std::string& s, const char* what) {
    try {
        size_t used = 0;
        int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw input_error("parse", std::string("expected an integer ") + what + ", got '" + s + "'");
    }
}

}  // namespace detail

// graph <n> <m>; one `v <id> [label]` line per vertex; one `e <u> <v> <mult>`
// line per distinct edge pair. Duplicate pairs are rejected.
inline void write_graph(std::ostream& os, const Multigraph& g) {
    os << "graph " << g.vertex_count() << " " << g.distinct_edge_count() << "\n";
    for (Vertex v : g.vertices()) {
        os << "v " << v;
        if (!g.label(v).empty()) os << " " << g.label(v);
        os << "\n";
    }
    for (const auto& [e, m] : g.edges()) os << "e " << e.first << " " << e.second << " " << m << "\n";
}

inline Multigraph read_graph(std::istream& in) {
    auto lines = detail::format_lines(in);
    if (lines.empty()) throw input_error("parse", "empty graph file");
    auto head = detail::tokens(lines[0]);
    if (head.size() != 3 || head[0] != "graph")
        throw input_error("parse", "expected header 'graph <n> <m>'");
    int n = detail::to_int(head[1], "vertex count");
    int m = detail::to_int(head[2], "edge count");
    Multigraph g;
    int seen_v = 0, seen_e = 0;
    for (size_t i = 1; i < lines.size(); ++i) {
        auto t = detail::tokens(lines[i]);
        if (t[0] == "v") {
            if (t.size() != 2 && t.size() != 3)
                throw input_error("parse", "vertex line needs 'v <id> [label]'");
            g.add_vertex(detail::to_int(t[1], "vertex id"), t.size() == 3 ? t[2] : "");
            ++seen_v;
        } else if (t[0] == "e") {
            if (t.size() != 4) throw input_error("parse", "edge line needs 'e <u> <v> <mult>'");
            Vertex u = detail::to_int(t[1], "endpoint");
            Vertex v = detail::to_int(t[2], "endpoint");
            int mult = detail::to_int(t[3], "multiplicity");
            if (g.has_edge(u, v))
                throw input_error("duplicate-edge", "pair {" + t[1] + "," + t[2] + "} listed twice");
            g.add_edge(u, v, mult);
            ++seen_e;
        } else {
            throw input_error("parse", "unknown line '" + lines[i] + "'");
        }
    }
    if (seen_v != n || seen_e != m)
        throw input_error("parse", "header promises " + std::to_string(n) + " vertices / " +
                                       std::to_string(m) + " edges, file has " +
                                       std::to_string(seen_v) + " / " + std::to_string(seen_e));
    return g;
}

// witness <kind> <param>; one `m <g_vertex> <h_vertex>` line per source vertex.
// The file carries the mapping only; source and target graphs travel separately.
struct WitnessFile {
    WitnessKind kind = WitnessKind::Unbounded;
    int bound = 0;
    std::map<Vertex, Vertex> sigma;
};

inline void write_witness(std::ostream& os, const ContractionWitness& w) {
    os << "witness " << kind_name(w.kind) << " " << w.bound << "\n";
    for (const auto& [v, x] : w.sigma) os << "m " << v << " " << x << "\n";
}

inline WitnessFile read_witness(std::istream& in) {
    auto lines = detail::format_lines(in);
    if (lines.empty()) throw input_error("parse", "empty witness file");
    auto head = detail::tokens(lines[0]);
    if (head.size() != 3 || head[0] != "witness")
        throw input_error("parse", "expected header 'witness <kind> <param>'");
    WitnessFile f;
    if (head[1] == "diameter")
        f.kind = WitnessKind::Diameter;
    else if (head[1] == "size")
        f.kind = WitnessKind::Size;
    else if (head[1] == "unbounded")
        f.kind = WitnessKind::Unbounded;
    else
        throw input_error("parse", "unknown witness kind '" + head[1] + "'");
    f.bound = detail::to_int(head[2], "bound");
    for (size_t i = 1; i < lines.size(); ++i) {
        auto t = detail::tokens(lines[i]);
        if (t.size() != 3 || t[0] != "m")
            throw input_error("parse", "mapping line needs 'm <g_vertex> <h_vertex>'");
        Vertex v = detail::to_int(t[1], "source vertex");
        if (f.sigma.count(v)) throw input_error("parse", "vertex " + t[1] + " mapped twice");
        f.sigma[v] = detail::to_int(t[2], "target vertex");
    }
    return f;
}

// Reconstructs the target graph a witness file implies: the quotient of
// `source` under the mapping. Valid because the adjacency law makes the
// target's simple adjacency a function of source and sigma.
inline Multigraph derive_target(const Multigraph& source, const std::map<Vertex, Vertex>& sigma) {
    for (Vertex v : source.vertices())
        if (!sigma.count(v))
            throw input_error("sigma-not-total", "no image for vertex " + std::to_string(v));
    return quotient(source, sigma);
}

inline ContractionWitness attach_witness(const Multigraph& source, const Multigraph& target,
                                         const WitnessFile& f) {
    return ContractionWitness{source, target, f.sigma, f.kind, f.bound};
}

// td <nodes> <width>; `b <node> <v1> ...` bag lines; `t <n1> <n2>` tree edges.
inline void write_decomposition(std::ostream& os, const TreeDecomposition& d) {
    os << "td " << d.tree.vertex_count() << " " << d.width() << "\n";
    for (const auto& [t, bag] : d.bags) {
        os << "b " << t;
        for (Vertex v : bag) os << " " << v;
        os << "\n";
    }
    for (const auto& [e, m] : d.tree.edges()) os << "t " << e.first << " " << e.second << "\n";
}

inline TreeDecomposition read_decomposition(std::istream& in) {
    auto lines = detail::format_lines(in);
    if (lines.empty()) throw input_error("parse", "empty decomposition file");
    auto head = detail::tokens(lines[0]);
    if (head.size() != 3 || head[0] != "td")
        throw input_error("parse", "expected header 'td <nodes> <width>'");
    int nodes = detail::to_int(head[1], "node count");
    TreeDecomposition d;
    for (size_t i = 1; i < lines.size(); ++i) {
        auto t = detail::tokens(lines[i]);
        if (t[0] == "b") {
            if (t.size() < 2) throw input_error("parse", "bag line needs 'b <node> [vertices]'");
            Vertex node = detail::to_int(t[1], "tree node");
            if (d.bags.count(node))
                throw input_error("parse", "two bags for tree node " + t[1]);
            d.tree.add_vertex(node);
            VertexSet bag;
            for (size_t j = 2; j < t.size(); ++j) bag.push_back(detail::to_int(t[j], "bag member"));
            d.bags[node] = make_set(std::move(bag));
        } else if (t[0] == "t") {
            if (t.size() != 3) throw input_error("parse", "tree edge line needs 't <n1> <n2>'");
            d.tree.add_edge(detail::to_int(t[1], "tree node"), detail::to_int(t[2], "tree node"));
        } else {
            throw input_error("parse", "unknown line '" + lines[i] + "'");
        }
    }
    if (d.tree.vertex_count() != nodes)
        throw input_error("parse", "header promises " + std::to_string(nodes) + " nodes, file has " +
                                       std::to_string(d.tree.vertex_count()));
    return d;
}

// family <n>; one `s <idx> <v1> <v2> ...` line per member, idx 0-based.
inline void write_family(std::ostream& os, const std::vector<VertexSet>& family) {
    os << "family " << family.size() << "\n";
    for (size_t i = 0; i < family.size(); ++i) {
        os << "s " << i;
        for (Vertex v : family[i]) os << " " << v;
        os << "\n";
    }
}

inline std::vector<VertexSet> read_family(std::istream& in) {
    auto lines = detail::format_lines(in);
    if (lines.empty()) throw input_error("parse", "empty family file");
    auto head = detail::tokens(lines[0]);
    if (head.size() != 2 || head[0] != "family")
        throw input_error("parse", "expected header 'family <n>'");
    size_t n = static_cast<size_t>(detail::to_int(head[1], "family size"));
    std::vector<VertexSet> family(n);
    std::vector<bool> seen(n, false);
    for (size_t i = 1; i < lines.size(); ++i) {
        auto t = detail::tokens(lines[i]);
        if (t.size() < 3 || t[0] != "s")
            throw input_error("parse", "set line needs 's <idx> <v1> ...'");
        int idx = detail::to_int(t[1], "set index");
        if (idx < 0 || static_cast<size_t>(idx) >= n || seen[static_cast<size_t>(idx)])
            throw input_error("parse", "bad or repeated set index " + t[1]);
        seen[static_cast<size_t>(idx)] = true;
        VertexSet s;
        for (size_t j = 2; j < t.size(); ++j) s.push_back(detail::to_int(t[j], "set member"));
        family[static_cast<size_t>(idx)] = make_set(std::move(s));
    }
    for (size_t i = 0; i < n; ++i)
        if (!seen[i]) throw input_error("parse", "set " + std::to_string(i) + " missing");
    return family;
}

// Undirected DOT with vertex labels; parallel edges carry label=mult.
inline void write_dot(std::ostream& os, const Multigraph& g) {
    os << "graph G {\n";
    for (Vertex v : g.vertices()) {
        os << "  n" << v;
        if (!g.label(v).empty()) os << " [label=\"" << g.label(v) << "\"]";
        os << ";\n";
    }
    for (const auto& [e, m] : g.edges()) {
        os << "  n" << e.first << " -- n" << e.second;
        if (m > 1) os << " [label=" << m << "]";
        os << ";\n";
    }
    os << "}\n";
}

// ---------------------------------------------------------------------------
// File helpers
// ---------------------------------------------------------------------------

template <typename T, typename Reader>
T load_from(const std::string& path, Reader reader) {
    std::ifstream in(path);
    if (!in) throw input_error("io", "cannot open '" + path + "' for reading");
    try {
        return reader(in);
    } catch (input_error& e) {
        throw input_error(e.code(), path + ": " + e.what());
    }
}

inline Multigraph load_graph(const std::string& path) {
    return load_from<Multigraph>(path, [](std::istream& in) { return read_graph(in); });
}

inline WitnessFile load_witness(const std::string& path) {
    return load_from<WitnessFile>(path, [](std::istream& in) { return read_witness(in); });
}

inline TreeDecomposition load_decomposition(const std::string& path) {
    return load_from<TreeDecomposition>(path, [](std::istream& in) { return read_decomposition(in); });
}

inline std::vector<VertexSet> load_family(const std::string& path) {
    return load_from<std::vector<VertexSet>>(path, [](std::istream& in) { return read_family(in); });
}

template <typename Writer>
void save_to(const std::string& path, Writer writer) {
    std::ofstream out(path);
    if (!out) throw input_error("io", "cannot open '" + path + "' for writing");
    writer(out);
}

inline void save_graph(const std::string& path, const Multigraph& g) {
    save_to(path, [&](std::ostream& os) { write_graph(os, g); });
}

inline void save_witness(const std::string& path, const ContractionWitness& w) {
    save_to(path, [&](std::ostream& os) { write_witness(os, w); });
}

inline void save_decomposition(const std::string& path, const TreeDecomposition& d) {
    save_to(path, [&](std::ostream& os) { write_decomposition(os, d); });
}

inline void save_dot(const std::string& path, const Multigraph& g) {
    save_to(path, [&](std::ostream& os) { write_dot(os, g); });
}

}  // namespace gridcon
