/*
   Copyright 2026 The kcm-expander Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "kcm/classify.hpp"
#include "kcm/clusters.hpp"
#include "kcm/dynamics.hpp"
#include "kcm/expansion.hpp"
#include "kcm/experiments.hpp"
#include "kcm/graph.hpp"
#include "kcm/history.hpp"
#include "kcm/textio.hpp"
#include "kcm/toom.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace kcm;

namespace {

struct Common {
    std::uint64_t seed = 1;
    std::string out;
    int threads = 0;
    bool audit = false;
};

// Files produced by one subcommand run. The first artifact goes to stdout
// when no output directory is given.
struct RunResult {
    std::vector<std::pair<std::string, std::string>> artifacts;  // extension, content
    json report = {{"ok", true}, {"failures", json::array()}};
    json summary = json::object();

    void add(std::string ext, std::string content) { artifacts.emplace_back(std::move(ext), std::move(content)); }
    void fail(const std::string& what) {
        report["ok"] = false;
        report["failures"].push_back(what);
    }
    bool ok() const { return report["ok"].get<bool>(); }
};

int finish(const std::string& name, const CLI::App& root, const Common& common, RunResult& r) {
    const std::string config = root.config_to_str(true, false);
    if (common.out.empty()) {
        if (!r.artifacts.empty()) std::cout << r.artifacts.front().second;
        if (!r.summary.empty()) std::cerr << r.summary.dump() << '\n';
    } else {
        fs::create_directories(common.out);
        const std::string stem = name + "-" + hex64(fnv1a(config));
        json manifest;
        manifest["subcommand"] = name;
        manifest["version"] = kVersion;
        manifest["seed"] = common.seed;
        manifest["config"] = config;
        manifest["files"] = json::array();
        for (const auto& [ext, content] : r.artifacts) {
            const auto path = fs::path(common.out) / (stem + "." + ext);
            std::ofstream(path, std::ios::binary) << content;
            manifest["files"].push_back(path.filename().string());
        }
        manifest["summary"] = r.summary;
        manifest["report"] = r.report;
        const auto mpath = fs::path(common.out) / (stem + ".manifest.json");
        std::ofstream(mpath, std::ios::binary) << manifest.dump(2) << '\n';
        std::cout << mpath.string() << '\n';
    }
    if (!r.ok()) {
        std::cerr << r.report.dump() << '\n';
        return 1;
    }
    return 0;
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

Graph graph_from(const GraphSpec& gs) { return gs.build(); }

// ---- graph -------------------------------------------------------------

struct GraphArgs {
    std::string family = "tree";
    int d = 3;
    int f = 0;
    int radius = 4;
    int expansion = 0;
    bool dump = false;
};

RunResult run_graph(const GraphArgs& a, const Common& c) {
    GraphSpec gs;
    if (a.family == "tree") {
        gs.family = FamilyKind::Tree;
    } else if (a.family == "hyperbolic" || a.family == "hyp") {
        gs.family = FamilyKind::Hyperbolic;
        gs.f = a.f;
    } else {
        throw std::invalid_argument("--family: expected tree or hyperbolic, got '" + a.family + "'");
    }
    gs.d = a.d;
    gs.radius = a.radius;
    const Graph g = gs.build();

    RunResult r;
    json s;
    s["graph"] = gs.str();
    s["vertices"] = g.num_vertices();
    s["edges"] = g.num_edges();
    s["max_layer"] = g.max_layer();
    s["jbar"] = compute_jbar(g);
    s["bipartite"] = is_bipartite(g);
    if (a.expansion > 0) {
        const auto rep = expansion_report(g, a.expansion);
        if (rep.phi_e) s["phi_e"] = rep.phi_e->str();
        if (rep.brute_min_ratio)
            s["brute_min_ratio"] = std::to_string(rep.brute_min_ratio->numerator()) + "/" +
                                   std::to_string(rep.brute_min_ratio->denominator());
        s["searched_max_size"] = rep.searched_max_size;
    }
    if (c.audit) {
        const auto audit = audit_graph(g);
        s["audit"] = {{"ok", audit.ok}, {"checked_vertices", audit.checked_vertices},
                      {"checked_faces", audit.checked_faces}};
        for (const auto& f : audit.failures) r.fail("graph audit: " + f);
    }
    r.add("json", s.dump(2) + "\n");
    if (a.dump) {
        std::ostringstream out;
        write_graph(out, g);
        r.add("graph", out.str());
    }
    return r;
}

// ---- classify ----------------------------------------------------------

struct ClassifyArgs {
    int d = 5;
    int f = 0;
    int jbar_radius = 4;
};

RunResult run_classify(const ClassifyArgs& a, const Common& c) {
    const auto rows = a.f == 0 ? case_table_from_inputs(a.d, 0, tree_inputs(a.d))
                               : hyperbolic_case_table(a.d, a.f, a.jbar_radius);
    RunResult r;
    std::ostringstream out;
    write_case_table_csv(out, rows);
    r.add("csv", out.str());
    if (c.audit) {
        bool prev_omega = true, prev_chi = true;
        for (const auto& row : rows) {
            if (!recheck(row.report)) r.fail("recheck failed at j = " + std::to_string(row.j));
            if (row.majority) continue;
            if (row.report.omega_good() && !prev_omega)
                r.fail("omega-goodness not downward closed at j = " + std::to_string(row.j));
            if (row.report.chi_good() && !prev_chi)
                r.fail("chi-goodness not downward closed at j = " + std::to_string(row.j));
            prev_omega = row.report.omega_good();
            prev_chi = row.report.chi_good();
        }
    }
    return r;
}

// ---- simulate ----------------------------------------------------------

struct SimulateArgs {
    std::string graph = "tree:3:6";
    std::string process = "bp";
    int j = 2;
    double eps = 0.0;
    double q = 1.0;
    std::string init = "all-one";
    std::string boundary = "one";
    double T = 10;
    std::string dump = "none";
};

InitialLaw parse_init(const std::string& s) {
    if (s == "all-one") return InitialLaw::all_one();
    if (s == "all-zero") return InitialLaw::all_zero();
    if (s.rfind("bernoulli:", 0) == 0) return InitialLaw::bernoulli(std::stod(s.substr(10)));
    throw std::invalid_argument("--init: expected all-one, all-zero or bernoulli:p, got '" + s + "'");
}

RunResult run_simulate(const SimulateArgs& a, const Common& c) {
    const Graph g = graph_from(GraphSpec::parse(a.graph));
    const Lattice lat(g, parse_boundary(a.boundary));
    const RandomField field(c.seed);
    const Config init = lat.initial(parse_init(a.init), field);
    const int steps = static_cast<int>(a.T);
    if (a.T < 0) throw std::invalid_argument("--T must be nonnegative");
    if (a.dump != "none" && a.dump != "csv" && a.dump != "binary")
        throw std::invalid_argument("--dump: expected none, csv or binary, got '" + a.dump + "'");

    std::vector<Config> states;
    RunResult r;
    if (a.process == "fa") {
        const auto traj = run_fa(lat, a.j, a.q, init, a.T, field);
        for (int t = 0; t <= steps; ++t) states.push_back(traj.state_at(t));
        if (c.audit) {
            const auto again = run_fa(lat, a.j, a.q, init, a.T, field);
            if (again.events.size() != traj.events.size()) r.fail("FA rerun produced a different event list");
            // Replay: the ring at x may flip x only if the constraint held just before it.
            Config cur = init;
            for (std::size_t i = 0; i < traj.events.size(); ++i) {
                const auto& e = traj.events[i];
                const bool allowed = count_one_neighbors(cur, lat, e.x) >= a.j;
                if (allowed != e.constraint_ok || (!allowed && e.value != cur[e.x])) {
                    r.fail("FA ring " + std::to_string(i) + " violates the constraint");
                    break;
                }
                cur[e.x] = e.value;
            }
        }
    } else {
        const auto kind = parse_process(a.process);
        const DiscreteProcess proc = kind == ProcessKind::BP   ? DiscreteProcess::bp(a.j, a.eps)
                                     : kind == ProcessKind::CP ? DiscreteProcess::cp(a.j, a.eps)
                                                               : DiscreteProcess::nmvp(a.eps);
        auto traj = run_discrete(lat, proc, init, steps, field, true);
        if (c.audit) {
            const auto serial = run_discrete(lat, proc, init, steps, field, false);
            if (serial.states != traj.states) r.fail("OpenMP and serial kernels disagree");
            if (kind == ProcessKind::BP && a.eps == 0)
                for (int t = 0; t < steps; ++t)
                    for (VertexId x = 0; x < g.num_vertices(); ++x)
                        if (traj.at(x, t) > traj.at(x, t + 1))
                            r.fail("BP time monotonicity fails at (" + std::to_string(x) + "," + std::to_string(t) + ")");
        }
        states = std::move(traj.states);
    }

    std::ostringstream csv;
    csv << "t,ones,free,density,root\n";
    for (int t = 0; t <= steps; ++t) {
        std::int64_t ones = 0;
        for (VertexId x : lat.free_vertices()) ones += states[t][x];
        const auto n = static_cast<std::int64_t>(lat.free_vertices().size());
        csv << t << ',' << ones << ',' << n << ',' << fixed(n ? double(ones) / n : 0.0, 6) << ','
            << int(states[t][g.root()]) << '\n';
    }
    r.add("csv", csv.str());
    r.summary = {{"graph", a.graph}, {"process", a.process}, {"j", a.j}, {"eps", a.eps}, {"q", a.q},
                 {"boundary", a.boundary}, {"init", a.init}, {"T", a.T}, {"seed", c.seed}};
    if (a.dump == "csv") {
        std::ostringstream d;
        d << "t,vertex,state\n";
        for (int t = 0; t <= steps; ++t)
            for (VertexId x = 0; x < g.num_vertices(); ++x) d << t << ',' << x << ',' << int(states[t][x]) << '\n';
        r.add("states.csv", d.str());
    } else if (a.dump == "binary") {
        // "KCMT", uint32 vertices, uint32 steps + 1, then one byte per (t, vertex).
        std::string d = "KCMT";
        auto put = [&](std::uint32_t v) {
            for (int k = 0; k < 4; ++k) d.push_back(static_cast<char>((v >> (8 * k)) & 0xff));
        };
        put(static_cast<std::uint32_t>(g.num_vertices()));
        put(static_cast<std::uint32_t>(steps + 1));
        for (const auto& s : states) d.append(s.begin(), s.end());
        r.add("states.bin", d);
    }
    return r;
}

// ---- history -----------------------------------------------------------

struct EventArgs {
    std::string graph;
    std::string process = "cp";
    int j = 3;
    double eps = 0.05;
    int T = 15;
    int trials = 100;
    int limit = 1000000;
    int max_layer = 0;
    int cap = 24;
    bool dump = false;
};

// Zero points at time T with layer <= max_layer, trial by trial.
template <class F>
void for_zero_roots(const Lattice& lat, const DiscreteProcess& proc, const EventArgs& a, std::uint64_t seed,
                    F&& visit) {
    const RandomField base(seed);
    int seen = 0;
    for (int trial = 0; trial < a.trials && seen < a.limit; ++trial) {
        const auto field = base.derive(trial);
        const auto traj = run_discrete(lat, proc, lat.initial(InitialLaw::all_one(), field), a.T, field);
        for (VertexId x : lat.free_vertices()) {
            if (seen >= a.limit) break;
            if (lat.graph().layer(x) > a.max_layer || traj.at(x, a.T) != 0) continue;
            visit(trial, field, traj, SpaceTimePoint{x, a.T});
            ++seen;
        }
    }
}

std::string point_str(SpaceTimePoint p) { return std::to_string(p.x) + ":" + std::to_string(p.t); }

RunResult run_history(const EventArgs& a, const Common& c) {
    const auto gs = GraphSpec::parse(a.graph);
    const Graph g = gs.build();
    const Lattice lat(g, Boundary::One);
    const auto kind = parse_process(a.process);
    if (kind == ProcessKind::NMVP) throw std::invalid_argument("--process: histories need bp or cp");
    const DiscreteProcess proc = kind == ProcessKind::BP ? DiscreteProcess::bp(a.j, a.eps) : DiscreteProcess::cp(a.j, a.eps);
    const auto constants = peierls_constants(gs.goodness_inputs(), a.j);

    RunResult r;
    std::ostringstream csv, dump;
    csv << "trial,root,points,sinks,valid,present,edge_general,edge_improved,vertex\n";
    std::int64_t events = 0, certified = 0;
    for_zero_roots(lat, proc, a, c.seed, [&](int trial, const RandomField& field, const DiscreteTrajectory& traj,
                                             SpaceTimePoint root) {
        ++events;
        const std::string where = "trial " + std::to_string(trial) + " root " + point_str(root);
        HistoryGraph h;
        try {
            h = extract_history(traj, lat, field, root);
        } catch (const std::exception& e) {
            r.fail(where + ": extraction: " + e.what());
            csv << trial << ',' << point_str(root) << ",0,0,false,false,n/a,n/a,n/a\n";
            return;
        }
        const auto v = validate_history(h, g);
        const auto p = presence_audit(h, traj, field);
        for (const auto& f : v.failures) r.fail(where + ": " + f);
        for (const auto& f : p.failures) r.fail(where + ": presence: " + f);
        csv << trial << ',' << point_str(root) << ',' << h.points.size() << ',' << h.sinks.size() << ','
            << yes_no(v.ok) << ',' << yes_no(p.ok);
        bool all = v.ok && p.ok;
        for (auto variant : {PeierlsVariant::EdgeGeneral, PeierlsVariant::EdgeImproved, PeierlsVariant::Vertex}) {
            const auto pb = peierls_bound(h, constants, variant);
            csv << ',' << (!pb.applicable ? "n/a" : pb.holds ? "holds" : "fails");
            if (pb.applicable && !pb.holds) {
                all = false;
                r.fail(where + ": " + to_string(variant) + " inequality fails (" + pb.lhs.str() + " > " + pb.rhs.str() + ")");
            }
        }
        csv << '\n';
        certified += all;
        if (a.dump) {
            dump << "# trial " << trial << " root (" << root.x << "," << root.t << ")\n";
            write_history(dump, h);
        }
    });
    r.add("csv", csv.str());
    if (a.dump) r.add("histories.txt", dump.str());
    r.summary = {{"events", events}, {"certified", certified}};
    if (c.audit) {
        const auto audit = audit_graph(g);
        for (const auto& f : audit.failures) r.fail("graph audit: " + f);
    }
    return r;
}

// ---- toom --------------------------------------------------------------

RunResult run_toom(const EventArgs& a, const Common& c) {
    const auto gs = GraphSpec::parse(a.graph);
    const Graph g = gs.build();
    const Lattice lat(g, Boundary::One);
    const auto proc = DiscreteProcess::bp(a.j, a.eps);
    const auto L = polar_bp(g);

    RunResult r;
    std::ostringstream csv, dump;
    csv << "trial,root,found,n_edges,n_sinks,zero_sum_ok,counts_ok\n";
    std::int64_t events = 0, found = 0, certified = 0;
    for_zero_roots(lat, proc, a, c.seed, [&](int trial, const RandomField& field, const DiscreteTrajectory&,
                                             SpaceTimePoint root) {
        ++events;
        const auto dep = build_dependence_bp(g, a.j, field, a.eps, a.T);
        const auto search = find_present_cycle(dep, root, a.cap);
        csv << trial << ',' << point_str(root) << ',';
        if (!search.cycle) {
            csv << "false,,,,\n";
            return;
        }
        ++found;
        const auto& cyc = *search.cycle;
        const auto cert = certify_cycle(cyc, L);
        const auto pres = check_presence(cyc, dep);
        const std::string where = "trial " + std::to_string(trial) + " root " + point_str(root);
        for (const auto& f : cert.failures) r.fail(where + ": " + f);
        for (const auto& f : pres.failures) r.fail(where + ": presence: " + f);
        certified += cert.ok && pres.ok;
        csv << "true," << cyc.n << ',' << cyc.count(CycleRole::Sink) << ',' << yes_no(cert.zero_sum_ok) << ','
            << yes_no(cert.counts_ok) << '\n';
        if (a.dump) {
            dump << "# trial " << trial << " root (" << root.x << "," << root.t << ")\n";
            write_cycle(dump, cyc);
        }
    });
    r.add("csv", csv.str());
    if (a.dump) r.add("cycles.txt", dump.str());
    r.summary = {{"events", events}, {"found", found}, {"certified", certified}, {"misses", events - found},
                 {"cap", a.cap}};
    if (c.audit) {
        for (const auto& f : audit_polar(L, g).failures) r.fail("polar audit: " + f);
        if (gs.family == FamilyKind::Tree) {
            const auto orient = orient_tree(g);
            const auto Lt = polar_tree(g, orient, g.root());
            for (const auto& f : audit_polar(Lt, g, &orient).failures) r.fail("tree polar audit: " + f);
            const auto dep = build_dependence_tree(g, orient, RandomField(c.seed), a.eps, a.T);
            const auto speeds = edge_speeds(Lt, dep.charges);
            for (const auto& f : speeds.deviations) r.fail("edge speeds: " + f);
            r.summary["edge_speeds"] = {{"eps", speeds.eps}, {"reach", speeds.reach}};
        }
    }
    return r;
}

// ---- experiment / cluster ----------------------------------------------

struct ExperimentArgs {
    std::string kind;
    std::string graph = "tree:5:6";
    std::string process = "cp";
    int j = 1;
    std::vector<double> eps{0.0};
    double q = 1.0;
    double p = 1.0;
    std::vector<double> q_grid;
    std::string boundary = "one";
    int T = 10;
    int trials = 100;
    std::vector<double> times;
    int seed_time = 0;
    int margin = 1;
    int ell_max = 10;
    int bisect_steps = 4;
    bool serial = false;
};

std::string canonical_kind(const std::string& k) {
    static const std::map<std::string, std::string> alias = {
        {"nonergodicity", "nonergodicity"},
        {"convergence", "convergence_fa"},
        {"convergence_fa", "convergence_fa"},
        {"cluster_tails", "cluster_tails"},
        {"cluster-tails", "cluster_tails"},
        {"stability", "stability_threshold"},
        {"stability_threshold", "stability_threshold"},
        {"qc_bp", "qc_bp"},
        {"qc", "qc_bp"},
        {"reversibility", "reversibility_fa"},
        {"reversibility_fa", "reversibility_fa"}};
    const auto it = alias.find(k);
    if (it == alias.end()) throw std::invalid_argument("unknown experiment '" + k + "'");
    return it->second;
}

ExperimentSpec to_spec(const ExperimentArgs& a, const Common& c) {
    ExperimentSpec s;
    s.kind = canonical_kind(a.kind);
    s.graph = GraphSpec::parse(a.graph);
    s.process = parse_process(a.process);
    s.j = a.j;
    s.eps = a.eps;
    s.q = a.q;
    s.p = a.p;
    s.q_grid = a.q_grid;
    s.boundary = parse_boundary(a.boundary);
    s.T = a.T;
    s.trials = a.trials;
    s.seed = c.seed;
    s.sample_times = a.times;
    s.seed_time = a.seed_time;
    s.margin = a.margin;
    s.ell_max = a.ell_max;
    s.bisect_steps = a.bisect_steps;
    s.parallel = !a.serial;
    return s;
}

// Order independence of the cluster search on the first few trials.
void audit_clusters(const ExperimentSpec& s, RunResult& r) {
    const Graph g = s.graph.build();
    const Lattice lat(g, s.boundary);
    const RandomField base(s.seed);
    const int seed_time = s.seed_time > 0 ? s.seed_time : s.T / 2;
    for (double eps : s.eps) {
        const DiscreteProcess proc{s.process, s.j, eps};
        for (int trial = 0; trial < std::min(s.trials, 20); ++trial) {
            const auto field = base.derive(trial);
            const auto traj = run_discrete(lat, proc, lat.initial(InitialLaw::all_one(), field), s.T, field);
            ClusterOptions plain;
            plain.spatial_margin = s.margin;
            plain.stop_when_censored = false;
            ClusterOptions shuffled = plain;
            shuffled.shuffle_seed = static_cast<std::uint64_t>(trial) + 1;
            const auto a = zero_cluster(traj, g, {g.root(), seed_time}, plain);
            const auto b = zero_cluster(traj, g, {g.root(), seed_time}, shuffled);
            if (a.points != b.points || a.censored != b.censored || a.diameter != b.diameter)
                r.fail("cluster search depends on frontier order (eps " + fixed(eps, 6) + ", trial " +
                       std::to_string(trial) + ")");
        }
    }
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_experiment_cmd(const ExperimentArgs& a, const Common& c) {
    const auto spec = to_spec(a, c);
    const auto table = run_experiment(spec);
    const fs::path dir = c.out.empty() ? fs::path("results") : fs::path(c.out);
    const auto files = write_result(table, dir);
    table.write_csv(std::cout);
    std::cerr << files.manifest.string() << '\n' << table.summary.dump() << '\n';

    RunResult r;
    if (c.audit) {
        auto serial = spec;
        serial.parallel = false;
        const auto again = run_experiment(serial);
        std::ostringstream a_csv, b_csv;
        table.write_csv(a_csv);
        again.write_csv(b_csv);
        if (a_csv.str() != b_csv.str()) r.fail("serial rerun changed the result table");
        if (table.manifest().dump() != again.manifest().dump()) r.fail("serial rerun changed the manifest");
        if (slurp(files.csv) != a_csv.str()) r.fail("written CSV differs from the table");
        if (spec.kind == "cluster_tails") audit_clusters(spec, r);
    }
    if (!r.ok()) {
        std::cerr << r.report.dump() << '\n';
        return 1;
    }
    return 0;
}

void add_experiment_options(CLI::App* sub, ExperimentArgs& a) {
    sub->add_option("--graph", a.graph, "tree:d[:depth] or hyperbolic:d:f[:radius]")->capture_default_str();
    sub->add_option("--process", a.process, "bp, cp or nmvp")->capture_default_str();
    sub->add_option("--j", a.j, "threshold")->capture_default_str();
    sub->add_option("--eps", a.eps, "noise level(s)")->capture_default_str();
    sub->add_option("--q", a.q, "FA resampling parameter")->capture_default_str();
    sub->add_option("--p", a.p, "FA initial density of the second chain")->capture_default_str();
    sub->add_option("--q-grid", a.q_grid, "initial densities for qc_bp");
    sub->add_option("--boundary", a.boundary, "one, zero or absent")->capture_default_str();
    sub->add_option("--T", a.T, "horizon")->capture_default_str()->check(CLI::NonNegativeNumber);
    sub->add_option("--trials", a.trials, "Monte Carlo trials")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--times", a.times, "sample times for continuous-time runs");
    sub->add_option("--seed-time", a.seed_time, "cluster seed time (0: T/2)")->capture_default_str();
    sub->add_option("--margin", a.margin, "censoring margin in layers")->capture_default_str();
    sub->add_option("--ell-max", a.ell_max, "largest diameter tabulated")->capture_default_str();
    sub->add_option("--bisect-steps", a.bisect_steps, "bisection steps for the threshold proxy")->capture_default_str();
    sub->add_flag("--serial", a.serial, "run trials on one thread");
}

void add_event_options(CLI::App* sub, EventArgs& a) {
    sub->add_option("--graph", a.graph, "tree:d[:depth] or hyperbolic:d:f[:radius]")->capture_default_str();
    sub->add_option("--process", a.process, "bp or cp")->capture_default_str();
    sub->add_option("--j", a.j, "threshold")->capture_default_str();
    sub->add_option("--eps", a.eps, "noise level")->capture_default_str();
    sub->add_option("--T", a.T, "root time")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--trials", a.trials, "independent realizations")->capture_default_str();
    sub->add_option("--limit", a.limit, "stop after this many zero events")->capture_default_str();
    sub->add_option("--max-layer", a.max_layer, "roots are zero points at time T with layer <= this")
        ->capture_default_str();
    sub->add_flag("--dump", a.dump, "also write every witness");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kinetically constrained models and noisy automata on nonamenable graphs"};
    app.set_config("--config", "", "TOML or INI file; flags on the command line take precedence");
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    app.add_option("--seed", common.seed, "master seed")->capture_default_str();
    app.add_option("--out", common.out, "output directory (default: stdout, results/ for experiments)");
    app.add_option("--threads", common.threads, "OpenMP thread cap (0: runtime default)")->capture_default_str();
    app.add_flag("--audit", common.audit, "run the certificate suite and fold failures into the exit status");
    app.add_flag_callback("--version", [] { throw CLI::CallForVersion(kVersion, 0); }, "print the version");

    GraphArgs ga;
    auto* graph = app.add_subcommand("graph", "generate a truncation and report its invariants");
    graph->add_option("--family", ga.family, "tree or hyperbolic")->capture_default_str();
    graph->add_option("--d", ga.d, "degree")->capture_default_str();
    graph->add_option("--f", ga.f, "face size (hyperbolic)")->capture_default_str();
    graph->add_option("--depth,--radius", ga.radius, "truncation depth")->capture_default_str();
    graph->add_option("--expansion", ga.expansion, "brute-force boundary ratio up to this set size");
    graph->add_flag("--dump", ga.dump, "also write the adjacency text format");

    ClassifyArgs ca;
    auto* cls = app.add_subcommand("classify", "goodness table for every threshold");
    cls->add_option("--d", ca.d, "degree")->capture_default_str();
    cls->add_option("--f", ca.f, "face size (0: regular tree)")->capture_default_str();
    cls->add_option("--jbar-radius", ca.jbar_radius, "patch radius for the jbar witness")->capture_default_str();

    SimulateArgs sa;
    auto* sim = app.add_subcommand("simulate", "run one trajectory");
    sim->add_option("--graph", sa.graph, "tree:d[:depth] or hyperbolic:d:f[:radius]")->capture_default_str();
    sim->add_option("--process", sa.process, "bp, cp, nmvp or fa")->capture_default_str();
    sim->add_option("--j", sa.j, "threshold")->capture_default_str();
    sim->add_option("--eps", sa.eps, "noise level")->capture_default_str();
    sim->add_option("--q", sa.q, "FA resampling parameter")->capture_default_str();
    sim->add_option("--init", sa.init, "all-one, all-zero or bernoulli:p")->capture_default_str();
    sim->add_option("--boundary", sa.boundary, "one, zero or absent")->capture_default_str();
    sim->add_option("--T", sa.T, "horizon")->capture_default_str();
    sim->add_option("--dump", sa.dump, "none, csv or binary state dump")->capture_default_str();

    EventArgs ha;
    ha.graph = "hyperbolic:5:4:6";
    auto* hist = app.add_subcommand("history", "extract and certify history graphs of zeros");
    add_event_options(hist, ha);

    EventArgs ta;
    ta.graph = "hyperbolic:5:4:6";
    ta.process = "bp";
    ta.T = 10;
    auto* toom = app.add_subcommand("toom", "search and certify Toom cycles (bootstrap percolation)");
    add_event_options(toom, ta);
    toom->add_option("--cap", ta.cap, "edge cap for the cycle search")->capture_default_str();

    ExperimentArgs ka;
    ka.j = 4;
    ka.eps = {0.02};
    ka.T = 16;
    auto* clu = app.add_subcommand("cluster", "zero-cluster diameter tails");
    add_experiment_options(clu, ka);

    ExperimentArgs ea;
    auto* exp = app.add_subcommand("experiment", "prepackaged Monte Carlo experiments");
    exp->add_option("kind", ea.kind,
                    "nonergodicity, convergence_fa, cluster_tails, stability_threshold, qc_bp, reversibility_fa")
        ->required();
    add_experiment_options(exp, ea);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    }
    if (common.threads > 0) omp_set_num_threads(common.threads);

    try {
        RunResult r;
        std::string name;
        if (graph->parsed()) {
            name = "graph";
            r = run_graph(ga, common);
        } else if (cls->parsed()) {
            name = "classify";
            r = run_classify(ca, common);
        } else if (sim->parsed()) {
            name = "simulate";
            r = run_simulate(sa, common);
        } else if (hist->parsed()) {
            name = "history";
            r = run_history(ha, common);
        } else if (toom->parsed()) {
            name = "toom";
            r = run_toom(ta, common);
        } else if (clu->parsed()) {
            ka.kind = "cluster_tails";
            return run_experiment_cmd(ka, common);
        } else {
            return run_experiment_cmd(ea, common);
        }
        return finish(name, app, common, r);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
