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

#include "kcm/experiments.hpp"

#include "kcm/classify.hpp"
#include "kcm/clusters.hpp"
#include "kcm/random_field.hpp"
#include "kcm/stats.hpp"
#include "kcm/textio.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace kcm {

const char* const kVersion = "0.1.0";

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, sep)) out.push_back(part);
    return out;
}

int to_int(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty()) throw std::invalid_argument("bad " + what + " '" + s + "'");
    return v;
}

std::string num(double v, int digits = 6) { return fixed(v, digits); }
std::string num(std::int64_t v) { return std::to_string(v); }

DiscreteProcess make_process(ProcessKind kind, int j, double eps) {
    switch (kind) {
    case ProcessKind::BP:
        return DiscreteProcess::bp(j, eps);
    case ProcessKind::CP:
        return DiscreteProcess::cp(j, eps);
    case ProcessKind::NMVP:
        return DiscreteProcess::nmvp(eps);
    }
    return DiscreteProcess::cp(j, eps);
}

// Runs body(trial) for every trial, in parallel when asked. Results must be
// written to per-trial slots and reduced afterwards in trial order.
template <class F>
void for_trials(const ExperimentSpec& spec, F&& body) {
    const int n = spec.trials;
#pragma omp parallel for schedule(dynamic) if (spec.parallel)
    for (int trial = 0; trial < n; ++trial) body(trial);
}

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

ResultTable start_table(const ExperimentSpec& spec, std::vector<std::string> columns) {
    if (spec.trials < 1) throw std::invalid_argument("trials must be at least 1");
    ResultTable t;
    t.experiment = spec.kind;
    t.spec = spec.to_json();
    t.columns = std::move(columns);
    return t;
}

// Probability that the root holds `value` at time T, from all ones.
struct RootCount {
    std::int64_t hits = 0;
    std::int64_t n = 0;
};

RootCount root_value_count(const Lattice& lat, const DiscreteProcess& proc, int T, const ExperimentSpec& spec,
                           std::uint8_t value) {
    const RandomField base(spec.seed);
    std::vector<std::uint8_t> hit(spec.trials, 0);
    const VertexId root = lat.graph().root();
    for_trials(spec, [&](int trial) {
        const auto f = base.derive(trial);
        std::uint8_t last = 0;
        simulate_discrete(lat, proc, lat.initial(InitialLaw::all_one(), f), T, f,
                          [&](int t, const Config& c) {
                              if (t == T) last = c[root];
                          });
        hit[trial] = last == value;
    });
    RootCount rc;
    rc.n = spec.trials;
    for (auto h : hit) rc.hits += h;
    return rc;
}

}  // namespace

GraphSpec GraphSpec::parse(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.empty()) throw std::invalid_argument("empty graph spec");
    GraphSpec g;
    if (parts[0] == "tree") {
        if (parts.size() < 2 || parts.size() > 3) throw std::invalid_argument("expected tree:d[:depth], got '" + text + "'");
        g.family = FamilyKind::Tree;
        g.d = to_int(parts[1], "degree");
        g.radius = parts.size() == 3 ? to_int(parts[2], "depth") : 6;
    } else if (parts[0] == "hyperbolic" || parts[0] == "hyp") {
        if (parts.size() < 3 || parts.size() > 4)
            throw std::invalid_argument("expected hyperbolic:d:f[:radius], got '" + text + "'");
        g.family = FamilyKind::Hyperbolic;
        g.d = to_int(parts[1], "degree");
        g.f = to_int(parts[2], "face size");
        g.radius = parts.size() == 4 ? to_int(parts[3], "radius") : 6;
    } else {
        throw std::invalid_argument("unknown graph family '" + parts[0] + "'");
    }
    if (g.radius < 1) throw std::invalid_argument("radius must be positive");
    return g;
}

std::string GraphSpec::str() const {
    if (family == FamilyKind::Tree) return "tree:" + std::to_string(d) + ":" + std::to_string(radius);
    return "hyperbolic:" + std::to_string(d) + ":" + std::to_string(f) + ":" + std::to_string(radius);
}

Graph GraphSpec::build() const {
    return family == FamilyKind::Tree ? build_tree(d, radius) : build_hyperbolic(d, f, radius);
}

GoodnessInputs GraphSpec::goodness_inputs() const {
    return family == FamilyKind::Tree ? tree_inputs(d) : hyperbolic_inputs(d, f);
}

nlohmann::ordered_json ExperimentSpec::to_json() const {
    nlohmann::ordered_json j;
    j["kind"] = kind;
    j["graph"] = graph.str();
    j["process"] = kcm::to_string(process);
    j["j"] = this->j;
    j["eps"] = eps;
    j["q"] = q;
    j["p"] = p;
    j["q_grid"] = q_grid;
    j["boundary"] = kcm::to_string(boundary);
    j["T"] = T;
    j["trials"] = trials;
    j["seed"] = seed;
    j["sample_times"] = sample_times;
    j["seed_time"] = seed_time;
    j["margin"] = margin;
    j["ell_max"] = ell_max;
    j["bisect_steps"] = bisect_steps;
    if (graph.family == FamilyKind::Tree) j["tree_orientation"] = "ray root -> first child, other edges towards the ray";
    return j;
}

ExperimentSpec ExperimentSpec::from_json(const nlohmann::json& j) {
    ExperimentSpec s;
    s.kind = j.value("kind", s.kind);
    if (j.contains("graph")) s.graph = GraphSpec::parse(j["graph"].get<std::string>());
    if (j.contains("process")) s.process = parse_process(j["process"].get<std::string>());
    s.j = j.value("j", s.j);
    if (j.contains("eps")) s.eps = j["eps"].get<std::vector<double>>();
    s.q = j.value("q", s.q);
    s.p = j.value("p", s.p);
    s.q_grid = j.value("q_grid", s.q_grid);
    if (j.contains("boundary")) s.boundary = parse_boundary(j["boundary"].get<std::string>());
    s.T = j.value("T", s.T);
    s.trials = j.value("trials", s.trials);
    s.seed = j.value("seed", s.seed);
    s.sample_times = j.value("sample_times", s.sample_times);
    s.seed_time = j.value("seed_time", s.seed_time);
    s.margin = j.value("margin", s.margin);
    s.ell_max = j.value("ell_max", s.ell_max);
    s.bisect_steps = j.value("bisect_steps", s.bisect_steps);
    return s;
}

std::uint64_t ExperimentSpec::hash() const { return fnv1a(to_json().dump()); }

void ResultTable::write_csv(std::ostream& out) const {
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
        out << '\n';
    }
}

nlohmann::ordered_json ResultTable::manifest() const {
    const std::string stem = experiment + "-" + hex64(fnv1a(spec.dump()));
    nlohmann::ordered_json m;
    m["experiment"] = experiment;
    m["version"] = kVersion;
    m["spec"] = spec;
    m["spec_hash"] = hex64(fnv1a(spec.dump()));
    m["seed"] = spec.value("seed", std::uint64_t{0});
    m["columns"] = columns;
    m["rows"] = rows.size();
    m["summary"] = summary;
    m["files"] = {{"csv", stem + ".csv"}, {"plot", plot.empty() ? "" : stem + ".dat"}, {"timing", stem + ".timing.json"}};
    return m;
}

WrittenFiles write_result(const ResultTable& table, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const std::string stem = table.experiment + "-" + hex64(fnv1a(table.spec.dump()));
    WrittenFiles w{dir / (stem + ".csv"), dir / (stem + ".json"), dir / (stem + ".timing.json"), {}};
    auto open = [](const std::filesystem::path& p) {
        std::ofstream out(p, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + p.string());
        return out;
    };
    {
        auto out = open(w.csv);
        table.write_csv(out);
    }
    {
        auto out = open(w.manifest);
        out << table.manifest().dump(2) << '\n';
    }
    {
        auto out = open(w.timing);
        out << nlohmann::ordered_json{{"wall_seconds", table.wall_seconds}}.dump(2) << '\n';
    }
    if (!table.plot.empty()) {
        w.plot = dir / (stem + ".dat");
        auto out = open(w.plot);
        for (const auto& [x, y] : table.plot) out << num(x) << ' ' << num(y) << '\n';
    }
    return w;
}

ResultTable exp_nonergodicity(const ExperimentSpec& spec) {
    Stopwatch clock;
    if (spec.process == ProcessKind::BP) throw std::invalid_argument("nonergodicity needs cp or nmvp");
    auto table = start_table(spec, {"t", "n", "zeros", "p_hat", "stderr", "ci_lo", "ci_hi"});
    const Graph g = spec.graph.build();
    const Lattice lat(g, spec.boundary);
    const auto proc = make_process(spec.process, spec.j, spec.eps.at(0));
    const int T = spec.T;
    const RandomField base(spec.seed);
    std::vector<std::vector<std::uint8_t>> zero(spec.trials, std::vector<std::uint8_t>(T + 1, 0));
    for_trials(spec, [&](int trial) {
        const auto f = base.derive(trial);
        simulate_discrete(lat, proc, lat.initial(InitialLaw::all_one(), f), T, f,
                          [&](int t, const Config& c) { zero[trial][t] = c[g.root()] == 0; });
    });
    double max_hi = 0;
    for (int t = 0; t <= T; ++t) {
        std::int64_t k = 0;
        for (const auto& z : zero) k += z[t];
        const std::int64_t n = spec.trials;
        const double p = static_cast<double>(k) / n;
        const auto ci = wilson(k, n);
        if (t >= 1) max_hi = std::max(max_hi, ci.hi);
        table.add_row({num(std::int64_t{t}), num(n), num(k), num(p), num(std::sqrt(p * (1 - p) / n)), num(ci.lo),
                       num(ci.hi)});
        table.plot.emplace_back(t, p);
    }
    table.summary["max_ci_hi"] = max_hi;
    table.summary["verdict"] = max_hi < 0.5 ? "multiplicity supported" : "not supported at this eps";
    table.wall_seconds = clock.seconds();
    return table;
}

ResultTable exp_convergence_fa(const ExperimentSpec& spec) {
    Stopwatch clock;
    auto table = start_table(
        spec, {"t", "n", "mean_low", "deviation", "stderr", "discrepancies", "p_disc", "ci_lo", "ci_hi"});
    const Graph g = spec.graph.build();
    const Lattice lat(g, spec.boundary);
    std::vector<double> times = spec.sample_times;
    if (times.empty()) times = {0, 5, 10, 20, 30};
    times.erase(std::remove_if(times.begin(), times.end(), [&](double t) { return t > spec.T; }), times.end());
    const RandomField base(spec.seed);
    const std::size_t m = times.size();
    std::vector<std::vector<std::uint8_t>> low(spec.trials, std::vector<std::uint8_t>(m)),
        disc(spec.trials, std::vector<std::uint8_t>(m));
    for_trials(spec, [&](int trial) {
        const auto f = base.derive(trial);
        const auto run = run_fa_coupled(lat, spec.j, spec.q, spec.p, spec.T, f, times);
        for (std::size_t i = 0; i < m; ++i) {
            low[trial][i] = run.low.state_at(times[i])[g.root()];
            const auto& d = run.discrepancies[i];
            disc[trial][i] = std::find(d.begin(), d.end(), g.root()) != d.end();
        }
    });
    std::vector<double> fx, fy;
    std::vector<Interval> cis;
    for (std::size_t i = 0; i < m; ++i) {
        std::int64_t ones = 0, k = 0;
        for (int r = 0; r < spec.trials; ++r) {
            ones += low[r][i];
            k += disc[r][i];
        }
        const std::int64_t n = spec.trials;
        const double mean = static_cast<double>(ones) / n, p = static_cast<double>(k) / n;
        const auto ci = wilson(k, n);
        cis.push_back(ci);
        table.add_row({num(times[i]), num(n), num(mean), num(std::abs(mean - spec.q)),
                       num(std::sqrt(mean * (1 - mean) / n)), num(k), num(p), num(ci.lo), num(ci.hi)});
        table.plot.emplace_back(times[i], p);
        if (k > 0 && times[i] > 0) {
            fx.push_back(times[i]);
            fy.push_back(std::log(p));
        }
    }
    bool nonincreasing = true;
    for (std::size_t i = 1; i < cis.size(); ++i) nonincreasing = nonincreasing && cis[i].lo <= cis[i - 1].hi;
    table.summary["nonincreasing_within_ci"] = nonincreasing;
    table.summary["final_p_disc"] = table.plot.empty() ? 0.0 : table.plot.back().second;
    if (fx.size() >= 2) {
        const auto fit = least_squares(fx, fy);
        table.summary["decay_rate"] = -fit.slope;
        table.summary["fit_r2"] = fit.r2;
    } else {
        table.summary["decay_rate"] = nullptr;
    }
    table.wall_seconds = clock.seconds();
    return table;
}

ResultTable exp_cluster_tails(const ExperimentSpec& spec) {
    Stopwatch clock;
    auto table = start_table(
        spec, {"eps", "ell", "n", "survive", "censored", "p_hat", "ci_lo", "ci_hi", "p_upper", "log_p"});
    const Graph g = spec.graph.build();
    const Lattice lat(g, spec.boundary);
    const int ts = spec.seed_time > 0 ? spec.seed_time : spec.T / 2;
    const int good_j = spec.process == ProcessKind::NMVP ? spec.graph.d / 2 + 1 : spec.j;
    try {
        const auto rep = classify(good_j, spec.graph.goodness_inputs());
        const bool good = spec.process == ProcessKind::BP ? rep.omega_good() : rep.chi_good();
        table.summary["gate"] = good ? "ok" : "warning: threshold not good for this family";
    } catch (const std::exception& e) {
        table.summary["gate"] = std::string("warning: ") + e.what();
    }
    nlohmann::ordered_json per_eps = nlohmann::ordered_json::array();
    for (double eps : spec.eps) {
        const auto proc = make_process(spec.process, spec.j, eps);
        const RandomField base(spec.seed);
        std::vector<std::pair<bool, int>> summaries(spec.trials);
        ClusterOptions opts;
        opts.spatial_margin = spec.margin;
        for_trials(spec, [&](int trial) {
            const auto f = base.derive(trial);
            const auto traj = run_discrete(lat, proc, lat.initial(InitialLaw::all_one(), f), spec.T, f);
            const auto c = zero_cluster(traj, g, {g.root(), ts}, opts);
            summaries[trial] = {c.censored, c.diameter};
        });
        const auto tab = tail_table(summaries, spec.ell_max);
        const auto fit = fit_decay(tab, eps);
        std::int64_t censored = 0;
        for (const auto& s : summaries) censored += s.first;
        bool strict = true;
        for (const auto& r : tab) {
            if (r.ell >= 1 && r.ell <= 8) strict = strict && r.n_survive < tab[r.ell - 1].n_survive;
            const double logp = r.n_survive > 0 ? std::log(r.p_hat) : -INFINITY;
            table.add_row({num(eps), num(std::int64_t{r.ell}), num(r.n_trials), num(r.n_survive), num(r.n_censored),
                           num(r.p_hat), num(r.ci_lo), num(r.ci_hi), num(r.p_upper), r.n_survive > 0 ? num(logp) : "-inf"});
        }
        nlohmann::ordered_json s;
        s["eps"] = eps;
        s["censored_fraction"] = static_cast<double>(censored) / spec.trials;
        s["strictly_decreasing_to_8"] = strict;
        s["fit_sufficient"] = fit.sufficient;
        s["slope"] = fit.slope;
        s["c"] = fit.c;
        s["r2"] = fit.r2;
        s["points"] = fit.points;
        s["decays"] = fit.decays;
        per_eps.push_back(s);
    }
    table.summary["per_eps"] = per_eps;
    table.summary["seed_time"] = ts;
    table.wall_seconds = clock.seconds();
    return table;
}

ResultTable exp_stability_threshold(const ExperimentSpec& spec) {
    Stopwatch clock;
    auto table = start_table(spec, {"eps", "source", "n", "ones", "p_hat", "ci_lo", "ci_hi"});
    const Graph g = spec.graph.build();
    const Lattice lat(g, spec.boundary);
    struct Point {
        double eps;
        bool bisect;
        RootCount rc;
    };
    std::vector<Point> pts;
    auto estimate = [&](double eps) { return root_value_count(lat, make_process(spec.process, spec.j, eps), spec.T, spec, 1); };
    std::vector<double> grid = spec.eps;
    std::sort(grid.begin(), grid.end());
    for (double e : grid) pts.push_back({e, false, estimate(e)});
    auto phat = [](const RootCount& rc) { return static_cast<double>(rc.hits) / rc.n; };
    std::optional<std::pair<double, double>> bracket;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        if (phat(pts[i].rc) >= 0.5 && phat(pts[i + 1].rc) < 0.5) {
            bracket = {pts[i].eps, pts[i + 1].eps};
            break;
        }
    if (bracket)
        for (int s = 0; s < spec.bisect_steps; ++s) {
            const double mid = 0.5 * (bracket->first + bracket->second);
            const auto rc = estimate(mid);
            pts.push_back({mid, true, rc});
            (phat(rc) >= 0.5 ? bracket->first : bracket->second) = mid;
        }
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.eps < b.eps; });
    for (const auto& pt : pts) {
        const auto ci = wilson(pt.rc.hits, pt.rc.n);
        table.add_row({num(pt.eps), pt.bisect ? "bisect" : "grid", num(pt.rc.n), num(pt.rc.hits), num(phat(pt.rc)),
                       num(ci.lo), num(ci.hi)});
        table.plot.emplace_back(pt.eps, phat(pt.rc));
    }
    table.summary["label"] = "finite-size proxy for the stability threshold";
    if (bracket) {
        table.summary["proxy_lo"] = bracket->first;
        table.summary["proxy_hi"] = bracket->second;
    } else {
        table.summary["proxy_lo"] = nullptr;
        table.summary["proxy_hi"] = nullptr;
    }
    table.wall_seconds = clock.seconds();
    return table;
}

ResultTable exp_qc_bp(const ExperimentSpec& spec) {
    Stopwatch clock;
    auto table = start_table(spec, {"q", "n", "filled", "fraction", "ci_lo", "ci_hi"});
    const Graph g = spec.graph.build();
    const Lattice lat(g, spec.boundary);
    const auto proc = DiscreteProcess::bp(spec.j, 0.0);
    const RandomField base(spec.seed);
    std::vector<double> grid = spec.q_grid.empty() ? std::vector<double>{spec.q} : spec.q_grid;
    std::sort(grid.begin(), grid.end());
    for (double q : grid) {
        std::vector<std::uint8_t> filled(spec.trials, 0);
        for_trials(spec, [&](int trial) {
            const auto f = base.derive(trial);
            Config cur = lat.initial(InitialLaw::bernoulli(q), f), next = cur;
            for (int t = 1; t <= spec.T; ++t) {
                step_discrete_serial(cur, next, lat, f, t, proc);
                const bool fixed_point = next == cur;
                cur.swap(next);
                if (fixed_point) break;
            }
            bool all = true;
            for (VertexId x : lat.free_vertices()) all = all && cur[x] == 1;
            filled[trial] = all;
        });
        std::int64_t k = 0;
        for (auto v : filled) k += v;
        const auto ci = wilson(k, spec.trials);
        const double frac = static_cast<double>(k) / spec.trials;
        table.add_row({num(q), num(std::int64_t{spec.trials}), num(k), num(frac), num(ci.lo), num(ci.hi)});
        table.plot.emplace_back(q, frac);
    }
    table.summary["label"] = "finite-size proxy for the bootstrap critical density";
    table.wall_seconds = clock.seconds();
    return table;
}

ResultTable exp_reversibility_fa(const ExperimentSpec& spec) {
    Stopwatch clock;
    auto table = start_table(spec, {"t", "n", "mean", "stderr", "z", "vertex_mean_min", "vertex_mean_max"});
    const Graph g = spec.graph.build();
    const Lattice lat(g, spec.boundary);
    std::vector<double> times = spec.sample_times;
    if (times.empty()) times = {spec.T / 4.0, spec.T / 2.0, 3 * spec.T / 4.0, static_cast<double>(spec.T)};
    const auto& free = lat.free_vertices();
    const std::size_t m = times.size(), nf = free.size();
    const RandomField base(spec.seed);
    // Per trial and sample time: number of free ones, and the free values themselves.
    std::vector<std::vector<std::int64_t>> ones(spec.trials, std::vector<std::int64_t>(m));
    std::vector<std::vector<std::vector<std::uint8_t>>> vals(spec.trials);
    for_trials(spec, [&](int trial) {
        const auto f = base.derive(trial);
        const auto traj = run_fa(lat, spec.j, spec.q, lat.initial(InitialLaw::bernoulli(spec.q), f), spec.T, f);
        vals[trial].resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            const auto c = traj.state_at(times[i]);
            auto& v = vals[trial][i];
            v.resize(nf);
            for (std::size_t k = 0; k < nf; ++k) {
                v[k] = c[free[k]];
                ones[trial][i] += v[k];
            }
        }
    });
    const double n = spec.trials;
    auto mean_sd = [&](const std::vector<double>& xs) {
        double s = 0, s2 = 0;
        for (double x : xs) s += x;
        const double mu = s / xs.size();
        for (double x : xs) s2 += (x - mu) * (x - mu);
        const double sd = xs.size() > 1 ? std::sqrt(s2 / (xs.size() - 1)) : 0.0;
        return std::pair{mu, sd / std::sqrt(static_cast<double>(xs.size()))};
    };
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<double> per_trial(spec.trials);
        for (int r = 0; r < spec.trials; ++r) per_trial[r] = static_cast<double>(ones[r][i]) / nf;
        const auto [mu, se] = mean_sd(per_trial);
        double vmin = 1, vmax = 0;
        for (std::size_t k = 0; k < nf; ++k) {
            std::int64_t s = 0;
            for (int r = 0; r < spec.trials; ++r) s += vals[r][i][k];
            vmin = std::min(vmin, s / n);
            vmax = std::max(vmax, s / n);
        }
        const double z = se > 0 ? (mu - spec.q) / se : 0.0;
        table.add_row({num(times[i]), num(std::int64_t{spec.trials}), num(mu), num(se), num(z), num(vmin), num(vmax)});
        table.plot.emplace_back(times[i], mu);
    }
    std::vector<double> pooled(spec.trials);
    for (int r = 0; r < spec.trials; ++r) {
        std::int64_t s = 0;
        for (std::size_t i = 0; i < m; ++i) s += ones[r][i];
        pooled[r] = static_cast<double>(s) / (static_cast<double>(nf) * m);
    }
    const auto [mu, se] = mean_sd(pooled);
    table.summary["pooled_mean"] = mu;
    table.summary["pooled_stderr"] = se;
    table.summary["z"] = se > 0 ? (mu - spec.q) / se : 0.0;
    table.summary["within_3_stderr"] = std::abs(mu - spec.q) <= 3 * se;
    table.wall_seconds = clock.seconds();
    return table;
}

ResultTable run_experiment(const ExperimentSpec& spec) {
    if (spec.kind == "nonergodicity") return exp_nonergodicity(spec);
    if (spec.kind == "convergence_fa") return exp_convergence_fa(spec);
    if (spec.kind == "cluster_tails") return exp_cluster_tails(spec);
    if (spec.kind == "stability_threshold") return exp_stability_threshold(spec);
    if (spec.kind == "qc_bp") return exp_qc_bp(spec);
    if (spec.kind == "reversibility_fa") return exp_reversibility_fa(spec);
    throw std::invalid_argument("unknown experiment '" + spec.kind + "'");
}

}  // namespace kcm
