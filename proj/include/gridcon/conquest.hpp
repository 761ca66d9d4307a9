#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "gridcon/contraction.hpp"
#include "gridcon/grids.hpp"
#include "gridcon/multigraph.hpp"

namespace gridcon {

// ---------------------------------------------------------------------------
// Lambda-state configurations
//
// A configuration tracks, over a host graph G: per-anchor capitals W_q and
// growing states X_q (connected, pairwise disjoint, W_q inside X_q), one
// freeway path per lambda edge (internally disjoint, endpoints in the two
// capitals, vertices inside the two states), and a fixed partition of V(G)
// into bounded-diameter clouds. The conquest grows states cloud by cloud
// until they partition the host.
// ---------------------------------------------------------------------------

struct Freeway {
    int a = -1, b = -1;          // lambda vertices, a < b; path runs a -> b
    std::vector<Vertex> path;    // simple path in the host
};

// The cloud partition never changes across steps, so its validation result is
// carried along instead of being recomputed per step.
struct CloudData {
    std::vector<VertexSet> clouds;   // partition of V(host), each sorted
    std::vector<int> cloud_of;       // host vertex index -> cloud index
    int diameter_bound = 0;
    bool certified = false;          // partition/connectivity/diameter verified
    std::string defect;              // first problem found when not certified
};

struct StateConfiguration {
    std::shared_ptr<const Multigraph> host;
    int cloud_diameter = 0;          // the c bound the clouds respect

    Multigraph lambda;               // anchor graph; vertex ids 0..A-1
    std::vector<VertexSet> capitals;
    std::vector<VertexSet> states;
    std::vector<Freeway> freeways;   // one per lambda edge
    std::shared_ptr<const CloudData> clouds;

    // Grid-backed configurations (from init_configuration) remember the
    // target grid side and per-anchor distances of every host vertex's
    // sigma-image; hand-built configurations leave these empty.
    int k_prime = 0;
    std::shared_ptr<const std::vector<std::vector<int>>> anchor_dist;

    std::vector<int> owner;          // host vertex index -> state index or -1

    int anchor_count() const { return static_cast<int>(capitals.size()); }

    int owner_of(Vertex v) const { return owner[static_cast<size_t>(host->index_of(v))]; }

    VertexSet indep() const {
        VertexSet out;
        for (int i = 0; i < host->vertex_count(); ++i)
            if (owner[static_cast<size_t>(i)] < 0) out.push_back(host->vertex_at(i));
        return out;
    }

    int indep_size() const {
        int n = 0;
        for (int o : owner) n += o < 0;
        return n;
    }

    // A cloud is in front while it is not contained in a single state.
    bool in_front(int cloud) const {
        const auto& c = clouds->clouds[static_cast<size_t>(cloud)];
        int first = owner[static_cast<size_t>(host->index_of(c.front()))];
        if (first < 0) return true;
        for (Vertex v : c)
            if (owner[static_cast<size_t>(host->index_of(v))] != first) return true;
        return false;
    }

    // Number of states the cloud shadows (intersects).
    int coverage(int cloud) const { return static_cast<int>(shadowed_states(cloud).size()); }

    std::vector<int> shadowed_states(int cloud) const {
        std::vector<int> out;
        for (Vertex v : clouds->clouds[static_cast<size_t>(cloud)]) {
            int o = owner[static_cast<size_t>(host->index_of(v))];
            if (o >= 0 && std::find(out.begin(), out.end(), o) == out.end()) out.push_back(o);
        }
        return out;
    }

    long long cost() const {
        long long total = 0;
        for (size_t ci = 0; ci < clouds->clouds.size(); ++ci)
            if (in_front(static_cast<int>(ci))) total += coverage(static_cast<int>(ci));
        return total;
    }
};

// How a front cloud will be absorbed, per the three procedures' guards.
enum class CloudTag { Expandable, Clashing, Annexable, Isolated };

struct CloudClass {
    CloudTag tag = CloudTag::Isolated;
    int state = -1;    // expandable: the unique shadowed state; annexable: chosen absorber
    int freeway = -1;  // clashing: the unique freeway met
};

namespace detail {

inline void rebuild_owner(StateConfiguration& s) {
    int n = s.host->vertex_count();
    s.owner.assign(static_cast<size_t>(n), -1);
    for (size_t a = 0; a < s.states.size(); ++a)
        for (Vertex v : s.states[a]) {
            size_t idx = static_cast<size_t>(s.host->index_of(v));
            if (s.owner[idx] >= 0)
                throw internal_error("state-overlap",
                                     "vertex " + std::to_string(v) + " owned by two states");
            s.owner[idx] = static_cast<int>(a);
        }
}

inline std::shared_ptr<const CloudData> make_cloud_data(const Multigraph& host,
                                                        std::vector<VertexSet> clouds, int bound) {
    auto data = std::make_shared<CloudData>();
    data->clouds = std::move(clouds);
    data->diameter_bound = bound;
    data->cloud_of.assign(static_cast<size_t>(host.vertex_count()), -1);
    data->certified = true;
    for (size_t ci = 0; ci < data->clouds.size() && data->certified; ++ci) {
        if (data->clouds[ci].empty()) {
            data->certified = false;
            data->defect = "cloud " + std::to_string(ci) + " is empty";
            break;
        }
        for (Vertex v : data->clouds[ci]) {
            if (!host.has_vertex(v)) {
                data->certified = false;
                data->defect = "cloud vertex " + std::to_string(v) + " not in host";
                break;
            }
            size_t idx = static_cast<size_t>(host.index_of(v));
            if (data->cloud_of[idx] >= 0) {
                data->certified = false;
                data->defect = "vertex " + std::to_string(v) + " in two clouds";
                break;
            }
            data->cloud_of[idx] = static_cast<int>(ci);
        }
    }
    if (data->certified)
        for (int o : data->cloud_of)
            if (o < 0) {
                data->certified = false;
                data->defect = "clouds do not cover the host";
                break;
            }
    if (data->certified)
        for (size_t ci = 0; ci < data->clouds.size(); ++ci) {
            auto d = diameter(host, data->clouds[ci]);
            if (!d || *d > bound) {
                data->certified = false;
                data->defect = "cloud " + std::to_string(ci) + " has diameter " +
                               (d ? std::to_string(*d) : "inf") + " > " + std::to_string(bound);
                break;
            }
        }
    return data;
}

}  // namespace detail

// Builds a configuration value from parts, computing the caches. Does not
// check the configuration conditions: verify_state_configuration does, so
// hand-assembled negatives stay expressible in tests.
inline StateConfiguration assemble_configuration(std::shared_ptr<const Multigraph> host,
                                                 Multigraph lambda,
                                                 std::vector<VertexSet> capitals,
                                                 std::vector<VertexSet> states,
                                                 std::vector<Freeway> freeways,
                                                 std::vector<VertexSet> clouds, int c) {
    StateConfiguration s;
    s.host = std::move(host);
    s.cloud_diameter = c;
    s.lambda = std::move(lambda);
    s.capitals = std::move(capitals);
    s.states = std::move(states);
    s.freeways = std::move(freeways);
    s.clouds = detail::make_cloud_data(*s.host, std::move(clouds), c);
    detail::rebuild_owner(s);
    return s;
}

// Checks every configuration invariant and names the first violation:
// conditions 1-4 of a lambda-state configuration, the cloud partition, and
// normality properties (A) and (B).
inline Verdict verify_state_configuration(const StateConfiguration& s) {
    const Multigraph& g = *s.host;
    int n = g.vertex_count();
    int anchors = s.anchor_count();

    if (static_cast<int>(s.states.size()) != anchors || s.lambda.vertex_count() != anchors)
        return Verdict::fail("shape: anchors, states, and lambda sizes disagree");

    // Condition 1: states form a connected packing.
    std::vector<int> owner(static_cast<size_t>(n), -1);
    for (int a = 0; a < anchors; ++a) {
        const auto& x = s.states[static_cast<size_t>(a)];
        if (x.empty()) return Verdict::fail("condition-1: state " + std::to_string(a) + " is empty");
        for (Vertex v : x) {
            if (!g.has_vertex(v))
                return Verdict::fail("condition-1: state vertex " + std::to_string(v) +
                                     " not in host");
            size_t idx = static_cast<size_t>(g.index_of(v));
            if (owner[idx] >= 0)
                return Verdict::fail("condition-1: states " + std::to_string(owner[idx]) + " and " +
                                     std::to_string(a) + " overlap at " + std::to_string(v));
            owner[idx] = a;
        }
        if (!is_connected_set(g, x))
            return Verdict::fail("condition-1: state " + std::to_string(a) + " is disconnected");
    }

    // Condition 2: capitals are a connected packing with W inside alpha(W).
    std::vector<int> capital_of(static_cast<size_t>(n), -1);
    for (int a = 0; a < anchors; ++a) {
        const auto& w = s.capitals[static_cast<size_t>(a)];
        if (w.empty())
            return Verdict::fail("condition-2: capital " + std::to_string(a) + " is empty");
        for (Vertex v : w) {
            size_t idx = static_cast<size_t>(g.index_of(v));
            if (capital_of[idx] >= 0)
                return Verdict::fail("condition-2: capitals overlap at " + std::to_string(v));
            capital_of[idx] = a;
            if (owner[idx] != a)
                return Verdict::fail("condition-2: capital vertex " + std::to_string(v) +
                                     " outside its state " + std::to_string(a));
        }
        if (!is_connected_set(g, w))
            return Verdict::fail("condition-2: capital " + std::to_string(a) + " is disconnected");
    }

    // Condition 3 and 4: one freeway per lambda edge, simple internally
    // disjoint paths, endpoints in the capitals, vertices inside the states.
    if (s.freeways.size() != s.lambda.edges().size())
        return Verdict::fail("condition-3: freeway count differs from lambda edge count");
    {
        std::map<std::pair<int, int>, int> fw_count;
        for (const auto& f : s.freeways) ++fw_count[{f.a, f.b}];
        for (const auto& [e, m] : s.lambda.edges())
            if (fw_count[{e.first, e.second}] != 1)
                return Verdict::fail("condition-3: lambda edge {" + std::to_string(e.first) + "," +
                                     std::to_string(e.second) + "} lacks its unique freeway");
    }
    std::vector<int> path_count(static_cast<size_t>(n), 0), internal_count(static_cast<size_t>(n), 0);
    for (size_t fi = 0; fi < s.freeways.size(); ++fi) {
        const auto& f = s.freeways[fi];
        const auto& p = f.path;
        if (p.empty()) return Verdict::fail("condition-3: empty freeway path");
        std::vector<bool> seen(static_cast<size_t>(n), false);
        for (size_t t = 0; t < p.size(); ++t) {
            if (!g.has_vertex(p[t]))
                return Verdict::fail("condition-3: freeway vertex not in host");
            size_t idx = static_cast<size_t>(g.index_of(p[t]));
            if (seen[idx]) return Verdict::fail("condition-3: freeway path repeats a vertex");
            seen[idx] = true;
            if (t + 1 < p.size() && !g.has_edge(p[t], p[t + 1]))
                return Verdict::fail("condition-3: freeway path skips a non-edge");
        }
        if (!set_contains(s.capitals[static_cast<size_t>(f.a)], p.front()) ||
            !set_contains(s.capitals[static_cast<size_t>(f.b)], p.back()))
            return Verdict::fail("condition-4: freeway {" + std::to_string(f.a) + "," +
                                 std::to_string(f.b) + "} endpoints are not in its capitals");
        for (Vertex v : p) {
            int o = owner[static_cast<size_t>(g.index_of(v))];
            if (o != f.a && o != f.b)
                return Verdict::fail("condition-4: freeway {" + std::to_string(f.a) + "," +
                                     std::to_string(f.b) + "} leaves its two states at vertex " +
                                     std::to_string(v));
        }
        for (size_t t = 0; t < p.size(); ++t) {
            size_t idx = static_cast<size_t>(g.index_of(p[t]));
            ++path_count[idx];
            if (t > 0 && t + 1 < p.size()) ++internal_count[idx];
        }
    }
    for (int i = 0; i < n; ++i)
        if (internal_count[static_cast<size_t>(i)] >= 1 && path_count[static_cast<size_t>(i)] >= 2)
            return Verdict::fail("condition-3: freeways share the internal vertex " +
                                 std::to_string(g.vertex_at(i)));

    // Cloud partition and diameter bound.
    const CloudData& cd = *s.clouds;
    if (!cd.certified) return Verdict::fail("clouds: " + cd.defect);
    if (cd.diameter_bound > s.cloud_diameter)
        return Verdict::fail("clouds: certified bound exceeds the configuration bound");

    // Property (A): a cloud meeting a capital lies inside that capital's state.
    for (int i = 0; i < n; ++i) {
        int a = capital_of[static_cast<size_t>(i)];
        if (a < 0) continue;
        int ci = cd.cloud_of[static_cast<size_t>(i)];
        for (Vertex v : cd.clouds[static_cast<size_t>(ci)])
            if (owner[static_cast<size_t>(g.index_of(v))] != a)
                return Verdict::fail("normality-A: cloud " + std::to_string(ci) +
                                     " meets capital " + std::to_string(a) +
                                     " but is not inside its state");
    }

    // Property (B): a cloud meeting two freeways shadows at most one state.
    std::vector<int> met(cd.clouds.size(), 0), stamp(cd.clouds.size(), -1);
    for (size_t fi = 0; fi < s.freeways.size(); ++fi)
        for (Vertex v : s.freeways[fi].path) {
            int ci = cd.cloud_of[static_cast<size_t>(g.index_of(v))];
            if (stamp[static_cast<size_t>(ci)] != static_cast<int>(fi)) {
                stamp[static_cast<size_t>(ci)] = static_cast<int>(fi);
                ++met[static_cast<size_t>(ci)];
            }
        }
    for (size_t ci = 0; ci < cd.clouds.size(); ++ci) {
        if (met[ci] < 2) continue;
        std::vector<int> shadow;
        for (Vertex v : cd.clouds[ci]) {
            int o = owner[static_cast<size_t>(g.index_of(v))];
            if (o >= 0 && std::find(shadow.begin(), shadow.end(), o) == shadow.end())
                shadow.push_back(o);
        }
        if (shadow.size() > 1)
            return Verdict::fail("normality-B: cloud " + std::to_string(ci) + " meets " +
                                 std::to_string(met[ci]) + " freeways but shadows " +
                                 std::to_string(shadow.size()) + " states");
    }
    return Verdict::pass();
}

// ---------------------------------------------------------------------------
// Cloud classification and the three procedures
// ---------------------------------------------------------------------------

namespace detail {

// Distance from the cloud's sigma-image to an anchor; used to hand annexed
// clouds to the nearest of their touching states. Hand-built configurations
// have no geometry, so everything ties at zero and the anchor index decides.
inline int cloud_anchor_distance(const StateConfiguration& s, int cloud, int anchor) {
    if (!s.anchor_dist) return 0;
    const auto& dist = (*s.anchor_dist)[static_cast<size_t>(anchor)];
    int best = std::numeric_limits<int>::max();
    for (Vertex v : s.clouds->clouds[static_cast<size_t>(cloud)])
        best = std::min(best, dist[static_cast<size_t>(s.host->index_of(v))]);
    return best;
}

inline int pick_nearest(const StateConfiguration& s, int cloud, const std::vector<int>& anchors) {
    int best = -1, best_d = std::numeric_limits<int>::max();
    for (int a : anchors) {
        int d = cloud_anchor_distance(s, cloud, a);
        if (d < best_d || (d == best_d && a < best)) {
            best = a;
            best_d = d;
        }
    }
    return best;
}

}  // namespace detail

// Applies the procedure guards to a front cloud: at least two freeways met
// means expansion (into the unique shadowed state), exactly one means clash,
// none plus a touched state means annexation. Isolated otherwise.
inline CloudClass classify_cloud(const StateConfiguration& s, int cloud) {
    if (cloud < 0 || static_cast<size_t>(cloud) >= s.clouds->clouds.size())
        throw input_error("bad-cloud", "no cloud with index " + std::to_string(cloud));
    if (!s.in_front(cloud))
        throw input_error("not-in-front", "cloud " + std::to_string(cloud) + " lies inside a state");
    const Multigraph& g = *s.host;
    const auto& c = s.clouds->clouds[static_cast<size_t>(cloud)];

    std::vector<int> met;
    for (size_t fi = 0; fi < s.freeways.size(); ++fi)
        for (Vertex v : s.freeways[fi].path)
            if (s.clouds->cloud_of[static_cast<size_t>(g.index_of(v))] == cloud) {
                met.push_back(static_cast<int>(fi));
                break;
            }
    auto shadow = s.shadowed_states(cloud);

    CloudClass out;
    if (met.size() >= 2) {
        if (shadow.size() != 1)
            throw internal_error("normality-B", "expansion guard met but cloud shadows " +
                                                    std::to_string(shadow.size()) + " states");
        out.tag = CloudTag::Expandable;
        out.state = shadow.front();
        return out;
    }
    if (met.size() == 1) {
        out.tag = CloudTag::Clashing;
        out.freeway = met.front();
        return out;
    }
    if (!shadow.empty()) {
        out.tag = CloudTag::Annexable;
        out.state = detail::pick_nearest(s, cloud, shadow);
        return out;
    }
    std::vector<int> touched;
    for (Vertex v : c)
        for (const auto& [w, m] : g.neighbors(v)) {
            int o = s.owner[static_cast<size_t>(g.index_of(w))];
            if (o >= 0 && std::find(touched.begin(), touched.end(), o) == touched.end())
                touched.push_back(o);
        }
    if (!touched.empty()) {
        out.tag = CloudTag::Annexable;
        out.state = detail::pick_nearest(s, cloud, touched);
    }
    return out;
}

namespace detail {

inline VertexSet set_union(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline VertexSet set_minus(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// cc_G(X \ C, W): the component of the trimmed state that holds the capital.
inline VertexSet trim_state(const Multigraph& g, const VertexSet& state, const VertexSet& cloud,
                            const VertexSet& capital) {
    VertexSet rest = set_minus(state, cloud);
    std::vector<Vertex> stack(capital.begin(), capital.end());
    VertexSet comp = capital;
    for (Vertex v : capital)
        if (!set_contains(rest, v))
            throw internal_error("trim", "capital vertex " + std::to_string(v) +
                                             " was removed by a cloud");
    while (!stack.empty()) {
        Vertex x = stack.back();
        stack.pop_back();
        for (const auto& [y, m] : g.neighbors(x)) {
            if (!set_contains(rest, y) || set_contains(comp, y)) continue;
            comp.insert(std::lower_bound(comp.begin(), comp.end(), y), y);
            stack.push_back(y);
        }
    }
    return comp;
}

// Shortest path between two cloud vertices inside the cloud, smallest-id
// tie-breaks; the cloud is connected so a path always exists.
inline std::vector<Vertex> path_inside(const Multigraph& g, const VertexSet& cloud, Vertex from,
                                       Vertex to) {
    std::map<Vertex, Vertex> parent;
    parent[from] = from;
    std::queue<Vertex> q;
    q.push(from);
    while (!q.empty() && !parent.count(to)) {
        Vertex x = q.front();
        q.pop();
        std::vector<Vertex> nbs;
        for (const auto& [y, m] : g.neighbors(x))
            if (set_contains(cloud, y) && !parent.count(y)) nbs.push_back(y);
        std::sort(nbs.begin(), nbs.end());
        for (Vertex y : nbs) {
            parent[y] = x;
            q.push(y);
        }
    }
    if (!parent.count(to))
        throw internal_error("cloud-disconnected", "no path between clash contact points");
    std::vector<Vertex> path{to};
    while (path.back() != from) path.push_back(parent[path.back()]);
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace detail

// One procedure application. The result is a fresh configuration; the input
// is untouched. Claims about cost and independent-vertex decrease are checked
// here and raise internal_error when violated.
inline StateConfiguration step(const StateConfiguration& s, int cloud) {
    CloudClass cls = classify_cloud(s, cloud);
    if (cls.tag == CloudTag::Isolated)
        throw input_error("isolated", "cloud " + std::to_string(cloud) +
                                          " touches no state; pick a touching cloud");
    const Multigraph& g = *s.host;
    const VertexSet& c = s.clouds->clouds[static_cast<size_t>(cloud)];
    int cov_before = s.coverage(cloud);
    long long cost_before = s.cost();
    int indep_before = s.indep_size();

    StateConfiguration out = s;

    auto trim_others = [&](int absorber) {
        for (int a = 0; a < s.anchor_count(); ++a) {
            if (a == absorber) continue;
            const auto& x = s.states[static_cast<size_t>(a)];
            bool meets = false;
            for (Vertex v : c)
                if (set_contains(x, v)) {
                    meets = true;
                    break;
                }
            if (meets)
                out.states[static_cast<size_t>(a)] =
                    detail::trim_state(g, x, c, s.capitals[static_cast<size_t>(a)]);
        }
    };

    switch (cls.tag) {
        case CloudTag::Expandable: {
            out.states[static_cast<size_t>(cls.state)] =
                detail::set_union(s.states[static_cast<size_t>(cls.state)], c);
            break;
        }
        case CloudTag::Annexable: {
            out.states[static_cast<size_t>(cls.state)] =
                detail::set_union(s.states[static_cast<size_t>(cls.state)], c);
            trim_others(cls.state);
            break;
        }
        case CloudTag::Clashing: {
            const Freeway& fw = s.freeways[static_cast<size_t>(cls.freeway)];
            const auto& p = fw.path;
            auto in_cloud = [&](Vertex v) {
                return s.clouds->cloud_of[static_cast<size_t>(g.index_of(v))] == cloud;
            };
            // Deterministic side pick: traverse from the endpoint with the
            // smaller id; the owner of the first cloud vertex met absorbs.
            bool from_front = p.front() <= p.back();
            int first_hit = -1;
            if (from_front) {
                for (size_t t = 0; t < p.size(); ++t)
                    if (in_cloud(p[t])) {
                        first_hit = static_cast<int>(t);
                        break;
                    }
            } else {
                for (size_t t = p.size(); t-- > 0;)
                    if (in_cloud(p[t])) {
                        first_hit = static_cast<int>(t);
                        break;
                    }
            }
            if (first_hit < 0)
                throw internal_error("clash", "guard met but the freeway misses the cloud");
            int absorber = s.owner[static_cast<size_t>(g.index_of(p[static_cast<size_t>(first_hit)]))];
            if (absorber != fw.a && absorber != fw.b)
                throw internal_error("clash", "freeway vertex outside its two states");

            // p1 runs from the absorber's endpoint to s1, the first cloud
            // vertex on that side; p2 from the other endpoint to s2. The
            // stretch between s1 and s2 reroutes through the cloud.
            bool absorber_at_front = absorber == fw.a;
            std::vector<Vertex> p1, p2;
            if (absorber_at_front) {
                size_t i1 = 0;
                while (!in_cloud(p[i1])) ++i1;
                size_t i2 = p.size() - 1;
                while (!in_cloud(p[i2])) --i2;
                p1.assign(p.begin(), p.begin() + static_cast<long>(i1) + 1);
                p2.assign(p.rbegin(), p.rbegin() + static_cast<long>(p.size() - i2));
            } else {
                size_t i1 = p.size() - 1;
                while (!in_cloud(p[i1])) --i1;
                size_t i2 = 0;
                while (!in_cloud(p[i2])) ++i2;
                p1.assign(p.rbegin(), p.rbegin() + static_cast<long>(p.size() - i1));
                p2.assign(p.begin(), p.begin() + static_cast<long>(i2) + 1);
            }
            auto middle = detail::path_inside(g, c, p1.back(), p2.back());
            // absorber endpoint -> s1 -> cloud -> s2 -> other endpoint
            std::vector<Vertex> np = p1;
            np.insert(np.end(), middle.begin() + 1, middle.end());
            for (size_t t = p2.size() - 1; t-- > 0;) np.push_back(p2[t]);
            if (!absorber_at_front) std::reverse(np.begin(), np.end());

            out.freeways[static_cast<size_t>(cls.freeway)].path = std::move(np);
            out.states[static_cast<size_t>(absorber)] =
                detail::set_union(s.states[static_cast<size_t>(absorber)], c);
            trim_others(absorber);
            break;
        }
        default:
            break;
    }

    detail::rebuild_owner(out);

    long long cost_after = out.cost();
    if (cost_after > cost_before)
        throw internal_error("claim2-cost", "cost rose from " + std::to_string(cost_before) +
                                                " to " + std::to_string(cost_after));
    if (cov_before >= 1 && cost_after >= cost_before)
        throw internal_error("claim2-cost", "cost did not drop on a coverage-" +
                                                std::to_string(cov_before) + " cloud");
    if (cov_before == 0 && out.indep_size() >= indep_before)
        throw internal_error("claim2-indep", "independent set did not shrink on a free annex");

    auto v = verify_state_configuration(out);
    if (!v) throw internal_error("invariant", "configuration broke after a step: " + v.violation);
    return out;
}

// ---------------------------------------------------------------------------
// The conquest loop
// ---------------------------------------------------------------------------

struct ConquestStats {
    int steps = 0, expands = 0, clashes = 0, annexes = 0;
};

// Per-step record handed to a trace callback together with the configuration
// the step produced.
struct StepInfo {
    int index = 0;            // 1-based step number
    const char* action = "";  // expand | clash | annex
    int cloud = -1;
    int cov_before = 0;
    long long cost_before = 0, cost_after = 0;
    int indep_before = 0, indep_after = 0;
};

using TraceFn = std::function<void(const StateConfiguration&, const StepInfo&)>;

// Runs phase one (all positive-coverage front clouds, by the guard that
// matches their freeway count) and then phase two (zero-coverage annexes)
// until the states partition the host. Clouds are picked by smallest minimum
// vertex id, re-scanned after every step.
inline StateConfiguration run_conquest(StateConfiguration s, ConquestStats* stats = nullptr,
                                       const TraceFn& trace = nullptr) {
    auto pre = verify_state_configuration(s);
    if (!pre) throw input_error("invalid-configuration", pre.violation);

    ConquestStats local;
    ConquestStats& st = stats ? *stats : local;
    // Phase one shortens cost every step, phase two shrinks the independent
    // set; together they cap the step count.
    long long guard = s.cost() + s.host->vertex_count() + 16;

    auto pick_min_id = [&](bool positive_cov) -> int {
        int best = -1;
        Vertex best_id = 0;
        for (size_t ci = 0; ci < s.clouds->clouds.size(); ++ci) {
            int c = static_cast<int>(ci);
            if (!s.in_front(c)) continue;
            int cov = s.coverage(c);
            if (positive_cov ? cov < 1 : cov != 0) continue;
            if (!positive_cov) {
                auto cls = classify_cloud(s, c);
                if (cls.tag == CloudTag::Isolated) continue;
            }
            Vertex id = s.clouds->clouds[ci].front();
            if (best < 0 || id < best_id) {
                best = c;
                best_id = id;
            }
        }
        return best;
    };

    auto apply = [&](int cloud) {
        auto cls = classify_cloud(s, cloud);
        StepInfo info;
        info.cloud = cloud;
        info.cov_before = s.coverage(cloud);
        info.cost_before = s.cost();
        info.indep_before = s.indep_size();
        s = step(s, cloud);
        ++st.steps;
        info.index = st.steps;
        info.cost_after = s.cost();
        info.indep_after = s.indep_size();
        info.action = "annex";
        if (cls.tag == CloudTag::Expandable) {
            ++st.expands;
            info.action = "expand";
        } else if (cls.tag == CloudTag::Clashing) {
            ++st.clashes;
            info.action = "clash";
        } else {
            ++st.annexes;
        }
        if (trace) trace(s, info);
        if (st.steps > guard)
            throw internal_error("livelock", "conquest exceeded its step allowance");
    };

    while (true) {
        int cloud = pick_min_id(true);
        if (cloud < 0) break;
        apply(cloud);
    }
    if (s.cost() != 0)
        throw internal_error("phase-1", "positive cost with no positive-coverage front cloud");
    while (s.indep_size() > 0) {
        int cloud = pick_min_id(false);
        if (cloud < 0)
            throw internal_error("no-applicable-cloud",
                                 "independent vertices remain but no front cloud touches a state; "
                                 "the host graph must have been disconnected");
        apply(cloud);
    }
    return s;
}

}  // namespace gridcon
