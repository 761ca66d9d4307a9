// Command-line front end: grid generators, witness checking and search,
// treewidth, the grid-transfer pipeline, intersection-graph extensions, and
// the experiment harness. One graph or witness per file; all formats are in
// the library's io header.

#include <atomic>
#include <chrono>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "gridcon/conquest.hpp"
#include "gridcon/extension.hpp"
#include "gridcon/instance_gen.hpp"
#include "gridcon/io.hpp"
#include "gridcon/transfer.hpp"

using namespace gridcon;

namespace {

void emit(const Multigraph& g, const std::string& path) {
    if (path.empty() || path == "-")
        write_graph(std::cout, g);
    else
        save_graph(path, g);
}

// Trace snapshot: states as fill colors, freeways bold, intra-cloud edges dashed.
void write_trace_dot(std::ostream& os, const StateConfiguration& s) {
    static const char* palette[] = {"#e6194b", "#3cb44b", "#ffe119", "#4363d8", "#f58231",
                                    "#911eb4", "#46f0f0", "#f032e6", "#bcf60c", "#fabebe",
                                    "#008080", "#e6beff"};
    const Multigraph& g = *s.host;
    os << "graph conquest {\n  node [style=filled];\n";
    for (Vertex v : g.vertices()) {
        int o = s.owner_of(v);
        os << "  n" << v << " [fillcolor=\"" << (o < 0 ? "#dddddd" : palette[o % 12]) << "\"];\n";
    }
    std::set<std::pair<Vertex, Vertex>> on_freeway;
    for (const auto& f : s.freeways)
        for (size_t t = 0; t + 1 < f.path.size(); ++t) {
            Vertex a = f.path[t], b = f.path[t + 1];
            on_freeway.insert(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
        }
    for (const auto& [e, m] : g.edges()) {
        os << "  n" << e.first << " -- n" << e.second;
        if (on_freeway.count(e))
            os << " [penwidth=3]";
        else if (s.clouds->cloud_of[static_cast<size_t>(g.index_of(e.first))] ==
                 s.clouds->cloud_of[static_cast<size_t>(g.index_of(e.second))])
            os << " [style=dashed]";
        os << ";\n";
    }
    os << "}\n";
}

WitnessKind parse_kind(const std::string& name) {
    if (name == "diameter") return WitnessKind::Diameter;
    if (name == "size") return WitnessKind::Size;
    if (name == "unbounded") return WitnessKind::Unbounded;
    throw input_error("kind", "unknown witness kind '" + name + "'");
}

struct ExperimentRow {
    int k = 0, c = 0, inflate = 0;
    uint64_t seed = 0;
};

struct ExperimentResult {
    std::string line;
    bool verified_ok = true;
};

ExperimentResult run_experiment_row(const ExperimentRow& row, bool timing) {
    auto t0 = std::chrono::steady_clock::now();
    auto inst = gen_instance(row.k, row.c, row.inflate, row.seed);
    ConquestStats st;
    auto r = transfer(inst.g, inst.sigma, inst.phi, &st);

    std::string status = r.degenerate ? "degenerate" : "ok";
    std::string verified = "na";
    bool all_ok = true;
    if (!r.degenerate) {
        auto v = verify_contraction(*r.witness);
        verified = v.ok ? "ok" : "violation";
        all_ok = v.ok && r.k_prime == (row.k - 1) / (2 * row.c + 1) - 1;
    }
    auto field = [](std::optional<int> x) { return x ? std::to_string(*x) : std::string("na"); };
    auto tw_of = [&](const Multigraph& g) -> std::optional<int> {
        if (g.vertex_count() > TreewidthBudget{}.max_vertices) return std::nullopt;
        return exact_treewidth(g).first;
    };
    auto bcg_of = [&](const Multigraph& g) -> std::optional<int> {
        if (g.vertex_count() > SearchBudget{}.max_vertices) return std::nullopt;
        return bcg(g);
    };
    long long ms = timing ? std::chrono::duration_cast<std::chrono::milliseconds>(
                                std::chrono::steady_clock::now() - t0)
                                .count()
                          : 0;
    std::ostringstream os;
    os << row.k << "," << row.c << "," << row.inflate << "," << row.seed << ","
       << inst.g.vertex_count() << "," << inst.h.vertex_count() << "," << r.k_prime << ","
       << status << "," << verified << "," << st.steps << "," << st.expands << "," << st.clashes
       << "," << st.annexes << "," << field(tw_of(inst.g)) << "," << field(tw_of(inst.h)) << ","
       << field(bcg_of(inst.g)) << "," << field(bcg_of(inst.h)) << "," << ms;
    return {os.str(), all_ok};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Triangulated-grid contraction toolkit"};
    app.require_subcommand(1);

    // ---- gen ------------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "generate grids or whole instances");
    gen->require_subcommand(1);
    int k = 3, c = 0, inflate = 1;
    uint64_t seed = 1;
    std::string out, out_prefix = "instance", dot_path;

    auto add_grid = [&](const char* name, const char* what, auto maker) {
        auto* sc = gen->add_subcommand(name, what);
        sc->add_option("--k", k, "grid side")->required();
        sc->add_option("-o,--out", out, "output path (default stdout)");
        sc->add_option("--export-dot", dot_path, "also write a DOT rendering");
        sc->callback([&, maker] {
            auto g = maker(k);
            emit(g, out);
            if (!dot_path.empty()) save_dot(dot_path, g);
        });
    };
    add_grid("square", "the k x k grid", [](int kk) { return gen_square_grid(kk); });
    add_grid("gamma", "the uniformly triangulated grid", [](int kk) { return gen_gamma(kk); });
    add_grid("gamma-hat", "the extended uniformly triangulated grid",
             [](int kk) { return gen_gamma_hat(kk); });

    auto* gi = gen->add_subcommand("instance", "host graph with grid and shrink witnesses");
    gi->add_option("--k", k, "grid side")->required();
    gi->add_option("--c", c, "cloud diameter bound");
    gi->add_option("--inflate", inflate, "gadget size limit");
    gi->add_option("--seed", seed, "generator seed");
    gi->add_option("--out-prefix", out_prefix, "write <prefix>.{g,h}.graph and witnesses");
    gi->callback([&] {
        auto inst = gen_instance(k, c, inflate, seed);
        save_graph(out_prefix + ".g.graph", inst.g);
        save_graph(out_prefix + ".h.graph", inst.h);
        save_witness(out_prefix + ".sigma.witness", inst.sigma);
        save_witness(out_prefix + ".phi.witness", inst.phi);
        std::cout << "instance k=" << k << " c=" << c << " inflate=" << inflate << " seed=" << seed
                  << " |V(g)|=" << inst.g.vertex_count() << " |V(h)|=" << inst.h.vertex_count()
                  << "\n";
    });

    // ---- check-contraction ----------------------------------------------
    auto* check = app.add_subcommand("check-contraction", "verify a witness file");
    std::string g_path, h_path, w_path;
    check->add_option("source", g_path, "source graph")->required();
    check->add_option("target", h_path, "target graph")->required();
    check->add_option("witness", w_path, "witness file")->required();
    int check_rc = 0;
    check->callback([&] {
        auto g = load_graph(g_path);
        auto h = load_graph(h_path);
        auto w = attach_witness(g, h, load_witness(w_path));
        auto v = verify_contraction(w);
        std::cout << (v.ok ? "ok" : "violation: " + v.violation) << "\n";
        check_rc = v.ok ? 0 : 1;
    });

    // ---- find-contraction -------------------------------------------------
    auto* find = app.add_subcommand("find-contraction", "exhaustive witness search");
    std::string kind_name_opt = "unbounded";
    int bound = 0;
    long long budget_states = SearchBudget{}.max_states;
    int budget_vertices = SearchBudget{}.max_vertices;
    find->add_option("source", g_path, "source graph")->required();
    find->add_option("target", h_path, "target graph")->required();
    find->add_option("--kind", kind_name_opt, "diameter | size | unbounded");
    find->add_option("--bound", bound, "diameter or size bound");
    find->add_option("--budget", budget_states, "partial-state budget");
    find->add_option("--budget-vertices", budget_vertices, "largest searchable source");
    find->add_option("-o,--out", out, "write the witness here when found");
    int find_rc = 0;
    find->callback([&] {
        auto g = load_graph(g_path);
        auto h = load_graph(h_path);
        SearchBudget b{budget_vertices, budget_states};
        auto w = find_contraction(g, h, parse_kind(kind_name_opt), bound, b);
        if (!w) {
            std::cout << "none\n";
            find_rc = 1;
            return;
        }
        std::cout << "found\n";
        if (!out.empty()) save_witness(out, *w);
    });

    // ---- bcg ---------------------------------------------------------------
    auto* bcg_cmd = app.add_subcommand("bcg", "largest triangulated grid reachable by contraction");
    bcg_cmd->add_option("graph", g_path, "graph")->required();
    bcg_cmd->add_option("--budget", budget_states, "partial-state budget");
    bcg_cmd->add_option("--budget-vertices", budget_vertices, "largest searchable graph");
    bcg_cmd->callback([&] {
        auto g = load_graph(g_path);
        std::cout << bcg(g, SearchBudget{budget_vertices, budget_states}) << "\n";
    });

    // ---- treewidth ----------------------------------------------------------
    auto* tw_cmd = app.add_subcommand("treewidth", "exact treewidth with a certificate");
    int tw_budget = TreewidthBudget{}.max_vertices;
    tw_cmd->add_option("graph", g_path, "graph")->required();
    tw_cmd->add_option("--budget", tw_budget, "largest solvable vertex count");
    tw_cmd->add_option("-o,--out", out, "write the decomposition here");
    tw_cmd->callback([&] {
        auto g = load_graph(g_path);
        auto [w, d] = exact_treewidth(g, TreewidthBudget{tw_budget});
        std::cout << w << "\n";
        if (!out.empty()) save_decomposition(out, d);
    });

    // ---- lift ---------------------------------------------------------------
    auto* lift = app.add_subcommand("lift", "pull a decomposition back along a size witness");
    std::string td_path;
    lift->add_option("source", g_path, "source graph")->required();
    lift->add_option("target", h_path, "target graph")->required();
    lift->add_option("witness", w_path, "size-bounded witness")->required();
    lift->add_option("decomposition", td_path, "decomposition of the target")->required();
    lift->add_option("-o,--out", out, "output decomposition")->required();
    lift->callback([&] {
        auto g = load_graph(g_path);
        auto h = load_graph(h_path);
        auto w = attach_witness(g, h, load_witness(w_path));
        auto d = load_decomposition(td_path);
        auto lifted = lift_decomposition(w, d);
        save_decomposition(out, lifted);
        std::cout << "width " << lifted.width() << "\n";
    });

    // ---- transfer -------------------------------------------------------------
    auto* tr = app.add_subcommand("transfer",
                                  "turn grid and shrink witnesses into a grid witness over H");
    std::string sigma_path, phi_path, trace_dir;
    tr->add_option("host", g_path, "host graph")->required();
    tr->add_option("sigma", sigma_path, "witness: triangulated grid over g")->required();
    tr->add_option("phi", phi_path, "witness: H as a diameter-bounded contraction of g")
        ->required();
    tr->add_option("-o,--out", out, "output witness (grid over H)");
    tr->add_option("--trace-dot", trace_dir, "write one DOT snapshot per conquest step");
    tr->callback([&] {
        auto g = load_graph(g_path);
        auto sf = load_witness(sigma_path);
        int n = 0;
        for (const auto& [v, x] : sf.sigma) n = std::max(n, x + 1);
        int kk = 0;
        while (kk * kk < n) ++kk;
        auto sigma = attach_witness(g, gen_gamma(kk), sf);
        auto pf = load_witness(phi_path);
        auto phi = attach_witness(g, derive_target(g, pf.sigma), pf);

        TraceFn trace = nullptr;
        if (!trace_dir.empty()) {
            std::filesystem::create_directories(trace_dir);
            trace = [&trace_dir](const StateConfiguration& s, const StepInfo& info) {
                std::ostringstream name;
                name << trace_dir << "/step_" << std::setw(4) << std::setfill('0') << info.index
                     << "_" << info.action << ".dot";
                save_to(name.str(), [&](std::ostream& os) { write_trace_dot(os, s); });
            };
        }
        ConquestStats st;
        auto r = transfer(g, sigma, phi, &st, trace);
        if (r.degenerate) {
            std::cout << "degenerate: k=" << r.k << " c=" << r.c << " gives k'=" << r.k_prime
                      << " < 3\n";
            return;
        }
        std::cout << "k=" << r.k << " c=" << r.c << " k'=" << r.k_prime << " k*=" << r.k_star
                  << " steps=" << st.steps << " (expand " << st.expands << ", clash " << st.clashes
                  << ", annex " << st.annexes << ")\n";
        if (!out.empty()) save_witness(out, *r.witness);
    });

    // ---- build-intersection -----------------------------------------------------
    auto* bi = app.add_subcommand("build-intersection", "intersection graph of a set family");
    std::string family_path;
    bi->add_option("host", g_path, "host graph")->required();
    bi->add_option("family", family_path, "family file")->required();
    bi->add_option("-o,--out", out, "output graph (default stdout)");
    bi->callback([&] {
        auto host = load_graph(g_path);
        auto inst = build_intersection(host, load_family(family_path));
        emit(inst.result, out);
    });

    // ---- extend-witness ------------------------------------------------------------
    auto* ew = app.add_subcommand("extend-witness",
                                  "build the (d+1,d-1)-extension witness of an intersection");
    int dval = 1;
    ew->add_option("host", g_path, "host graph")->required();
    ew->add_option("family", family_path, "family file")->required();
    ew->add_option("--d", dval, "edge-degree bound")->required();
    ew->add_option("--out-prefix", out_prefix, "output file prefix")->required();
    ew->callback([&] {
        auto host = load_graph(g_path);
        auto inst = build_intersection(host, load_family(family_path));
        auto w = build_kil45io_witness(inst, dval);
        save_graph(out_prefix + ".base.graph", w.base);
        save_graph(out_prefix + ".middle.graph", w.middle);
        save_graph(out_prefix + ".result.graph", w.result);
        save_witness(out_prefix + ".sigma1.witness", w.sigma1);
        save_witness(out_prefix + ".sigma2.witness", w.sigma2);
        std::cout << "bounds (" << w.c1 << "," << w.c2 << ")\n";
    });

    // ---- theorem-check -----------------------------------------------------------------
    auto* tc = app.add_subcommand("theorem-check", "chained treewidth bounds of an extension");
    std::string base_path, middle_path, result_path, s1_path, s2_path;
    double lambda = 1.0, cexp = 1.0;
    bool lenient = false;
    tc->add_option("base", base_path)->required();
    tc->add_option("middle", middle_path)->required();
    tc->add_option("result", result_path)->required();
    tc->add_option("sigma1", s1_path, "size witness middle -> base")->required();
    tc->add_option("sigma2", s2_path, "diameter witness middle -> result")->required();
    tc->add_option("--lambda", lambda, "class constant")->required();
    tc->add_option("--c", cexp, "class exponent in [1,2)")->required();
    tc->add_option("--tw-budget", tw_budget, "treewidth vertex budget");
    tc->add_option("--bcg-budget-vertices", budget_vertices, "contraction search vertex budget");
    tc->add_flag("--lenient", lenient, "report over-budget measurements as gaps");
    int tc_rc = 0;
    tc->callback([&] {
        ExtensionWitness w;
        w.base = load_graph(base_path);
        w.middle = load_graph(middle_path);
        w.result = load_graph(result_path);
        auto f1 = load_witness(s1_path);
        auto f2 = load_witness(s2_path);
        w.sigma1 = attach_witness(w.middle, w.base, f1);
        w.sigma2 = attach_witness(w.middle, w.result, f2);
        w.c1 = f1.bound;
        w.c2 = f2.bound;
        TheoremBudget b;
        b.tw.max_vertices = tw_budget;
        b.bcg.max_vertices = budget_vertices;
        b.strict = !lenient;
        auto r = theorem_bound_check(w, lambda, cexp, b);
        auto show = [](const char* name, std::optional<int> v) {
            std::cout << name << "=" << (v ? std::to_string(*v) : "na") << " ";
        };
        show("tw(H)", r.tw_result);
        show("tw(J)", r.tw_middle);
        show("tw(G')", r.tw_base);
        show("bcg(H)", r.bcg_result);
        show("bcg(G')", r.bcg_base);
        std::cout << "\n";
        auto verdict = [](const char* name, std::optional<bool> v) {
            std::cout << name << ": " << (v ? (*v ? "holds" : "fails") : "not-evaluated") << "\n";
        };
        verdict("tw(H) <= tw(J)", r.tw_chain);
        verdict("tw(J) <= (c1+1)(tw(G')+1)-1", r.lift_bound);
        verdict("tw(G') <= lambda*bcg(G')^c", r.class_bound);
        verdict("bcg(G') <= (2c2+1)(bcg(H)+2)+1", r.grid_bound);
        verdict("combined bound", r.combined);
        tc_rc = r.all_checked_hold() ? 0 : 1;
    });

    // ---- experiment -------------------------------------------------------------------------
    auto* ex = app.add_subcommand("experiment", "batch transfers over generated instances");
    std::string spec_path;
    int jobs = 1;
    bool no_timing = false;
    ex->add_option("spec", spec_path, "rows of: k c inflate seed")->required();
    ex->add_option("-o,--out", out, "CSV output (default stdout)");
    ex->add_option("--jobs", jobs, "parallel instances");
    ex->add_flag("--no-timing", no_timing, "zero the wall_ms column for byte-stable output");
    int ex_rc = 0;
    ex->callback([&] {
        std::vector<ExperimentRow> rows;
        {
            std::ifstream in(spec_path);
            if (!in) throw input_error("io", "cannot open '" + spec_path + "'");
            std::string line;
            while (std::getline(in, line)) {
                size_t first = line.find_first_not_of(" \t\r");
                if (first == std::string::npos || line[first] == '#') continue;
                std::istringstream ss(line);
                ExperimentRow row;
                if (!(ss >> row.k >> row.c >> row.inflate >> row.seed))
                    throw input_error("parse", "experiment row needs 'k c inflate seed'");
                rows.push_back(row);
            }
        }
        std::vector<ExperimentResult> results(rows.size());
        std::atomic<size_t> next{0};
        auto worker = [&] {
            for (size_t i = next.fetch_add(1); i < rows.size(); i = next.fetch_add(1))
                results[i] = run_experiment_row(rows[i], !no_timing);
        };
        std::vector<std::thread> pool;
        int nthreads = std::max(1, std::min<int>(jobs, static_cast<int>(rows.size())));
        for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
        worker();
        for (auto& t : pool) t.join();

        std::ostringstream csv;
        csv << "k,c,inflate,seed,n_g,n_h,k_prime,status,verified,steps,expands,clashes,annexes,"
               "tw_g,tw_h,bcg_g,bcg_h,wall_ms\n";
        for (const auto& r : results) {
            csv << r.line << "\n";
            if (!r.verified_ok) ex_rc = 1;
        }
        if (out.empty() || out == "-")
            std::cout << csv.str();
        else
            save_to(out, [&](std::ostream& os) { os << csv.str(); });
    });

    // ---- export-dot ---------------------------------------------------------------------------
    auto* xd = app.add_subcommand("export-dot", "DOT rendering of a graph file");
    std::string dot_out;
    xd->add_option("graph", g_path, "graph file")->required();
    xd->add_option("out", dot_out, "DOT output path")->required();
    xd->callback([&] { save_dot(dot_out, load_graph(g_path)); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const resource_error& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 3;
    } catch (const internal_error& e) {
        std::cerr << "internal invariant failure: " << e.what() << "\n";
        return 4;
    }
    return check_rc + find_rc + tc_rc + ex_rc;
}
