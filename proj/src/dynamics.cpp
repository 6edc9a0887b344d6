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

#include "kcm/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kcm {

std::string to_string(Boundary b) {
    switch (b) {
    case Boundary::One:
        return "one";
    case Boundary::Zero:
        return "zero";
    case Boundary::Absent:
        return "absent";
    }
    return "one";
}

Boundary parse_boundary(const std::string& s) {
    if (s == "one") return Boundary::One;
    if (s == "zero") return Boundary::Zero;
    if (s == "absent") return Boundary::Absent;
    throw std::invalid_argument("unknown boundary policy '" + s + "'");
}

std::string to_string(ProcessKind kind) {
    switch (kind) {
    case ProcessKind::BP:
        return "bp";
    case ProcessKind::CP:
        return "cp";
    case ProcessKind::NMVP:
        return "nmvp";
    }
    return "bp";
}

ProcessKind parse_process(const std::string& s) {
    if (s == "bp") return ProcessKind::BP;
    if (s == "cp") return ProcessKind::CP;
    if (s == "nmvp") return ProcessKind::NMVP;
    throw std::invalid_argument("unknown process '" + s + "'");
}

Lattice::Lattice(const Graph& g, Boundary boundary)
    : g_(&g), boundary_(boundary), degree_(g.num_vertices(), 0) {
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        if (g.is_interior(v)) free_.push_back(v);
        for (VertexId w : g.neighbors(v))
            degree_[v] += (boundary != Boundary::Absent || g.is_interior(w)) ? 1 : 0;
    }
}

Config Lattice::initial(const InitialLaw& law, const RandomField& field) const {
    Config c(num_vertices(), frozen_value());
    for (VertexId v : free_) {
        switch (law.kind) {
        case InitialLaw::Kind::AllOne:
            c[v] = 1;
            break;
        case InitialLaw::Kind::AllZero:
            c[v] = 0;
            break;
        case InitialLaw::Kind::Bernoulli:
            c[v] = field.init_uniform(v) < law.p ? 1 : 0;
            break;
        case InitialLaw::Kind::Explicit:
            if (law.config.size() != c.size())
                throw std::invalid_argument("explicit configuration has the wrong size");
            c[v] = law.config[v] ? 1 : 0;
            break;
        }
    }
    return c;
}

void step_discrete_serial(const Config& prev, Config& next, const Lattice& lat,
                          const RandomField& field, std::int64_t t, const DiscreteProcess& proc) {
    next = prev;
    for (VertexId x : lat.free_vertices()) next[x] = update_value(prev, lat, field, t, proc, x);
}

void step_discrete(const Config& prev, Config& next, const Lattice& lat, const RandomField& field,
                   std::int64_t t, const DiscreteProcess& proc) {
    next = prev;
    const auto& free = lat.free_vertices();
    const auto n = static_cast<std::int64_t>(free.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const VertexId x = free[i];
        next[x] = update_value(prev, lat, field, t, proc, x);
    }
}

void simulate_discrete(const Lattice& lat, const DiscreteProcess& proc, Config init, int T,
                       const RandomField& field,
                       const std::function<void(int, const Config&)>& observe, bool parallel) {
    if (T < 0) throw std::invalid_argument("horizon must be nonnegative");
    Config cur = std::move(init), next;
    observe(0, cur);
    for (int t = 1; t <= T; ++t) {
        if (parallel)
            step_discrete(cur, next, lat, field, t, proc);
        else
            step_discrete_serial(cur, next, lat, field, t, proc);
        cur.swap(next);
        observe(t, cur);
    }
}

DiscreteTrajectory run_discrete(const Lattice& lat, const DiscreteProcess& proc, const Config& init,
                                int T, const RandomField& field, bool parallel) {
    DiscreteTrajectory traj;
    traj.process = proc;
    traj.states.reserve(static_cast<std::size_t>(T) + 1);
    simulate_discrete(
        lat, proc, init, T, field, [&](int, const Config& c) { traj.states.push_back(c); }, parallel);
    return traj;
}

Config ContinuousTrajectory::state_at(double t) const {
    Config c = initial;
    for (const auto& e : events) {
        if (e.time > t) break;
        c[e.x] = e.value;
    }
    return c;
}

std::vector<FaEvent> merged_rings(const Lattice& lat, double T, const RandomField& field) {
    std::vector<FaEvent> events;
    events.reserve(static_cast<std::size_t>(lat.free_vertices().size() * (T + 4 * std::sqrt(T + 1) + 2)));
    for (VertexId x : lat.free_vertices()) {
        double t = 0;
        for (std::int64_t k = 0;; ++k) {
            t += field.clock_gap(x, k);
            if (t > T) break;
            events.push_back({t, x, 0, false, k});
        }
    }
    std::sort(events.begin(), events.end(), [](const FaEvent& a, const FaEvent& b) {
        return a.time != b.time ? a.time < b.time : a.x < b.x;
    });
    return events;
}

ContinuousTrajectory run_fa(const Lattice& lat, int j, double q, const Config& init, double T,
                            const RandomField& field) {
    if (!(T > 0)) throw std::invalid_argument("FA horizon must be positive");
    ContinuousTrajectory traj;
    traj.initial = init;
    traj.horizon = T;
    traj.events = merged_rings(lat, T, field);
    Config cur = init;
    for (auto& e : traj.events) {
        e.constraint_ok = count_one_neighbors(cur, lat, e.x) >= j;
        if (e.constraint_ok) cur[e.x] = field.ring_uniform(e.x, e.ring) < q ? 1 : 0;
        e.value = cur[e.x];
    }
    return traj;
}

FaCoupledRun run_fa_coupled(const Lattice& lat, int j, double q, double p, double T,
                            const RandomField& field, std::vector<double> sample_times) {
    FaCoupledRun run;
    std::sort(sample_times.begin(), sample_times.end());
    run.sample_times = sample_times;
    const Config low0 = lat.initial(InitialLaw::bernoulli(p), field);
    const Config high0 = lat.initial(InitialLaw::bernoulli(q), field);
    run.low = run_fa(lat, j, q, low0, T, field);
    run.high = run_fa(lat, j, q, high0, T, field);

    Config lo = low0, hi = high0;
    std::size_t next_event = 0;
    const auto& ev_lo = run.low.events;
    const auto& ev_hi = run.high.events;
    for (double s : sample_times) {
        for (; next_event < ev_lo.size() && ev_lo[next_event].time <= s; ++next_event) {
            lo[ev_lo[next_event].x] = ev_lo[next_event].value;
            hi[ev_hi[next_event].x] = ev_hi[next_event].value;
        }
        std::vector<VertexId> diff;
        for (VertexId x : lat.free_vertices())
            if (lo[x] != hi[x]) diff.push_back(x);
        run.discrepancies.push_back(std::move(diff));
    }
    return run;
}

namespace {

// Index of the last event at x with time <= t, or -1.
std::int64_t last_event_before(const std::vector<std::vector<std::int64_t>>& by_vertex, VertexId x,
                               const std::vector<FaEvent>& events, double t, bool inclusive) {
    const auto& idx = by_vertex[x];
    std::int64_t best = -1;
    for (std::int64_t i : idx) {
        if (inclusive ? events[i].time <= t : events[i].time < t)
            best = i;
        else
            break;
    }
    return best;
}

}  // namespace

std::vector<DiscrepancyStep> trace_discrepancy(const FaCoupledRun& run, const Lattice& lat,
                                               VertexId x, double t) {
    const auto& lo = run.low.events;
    const auto& hi = run.high.events;
    std::vector<std::vector<std::int64_t>> by_vertex(lat.num_vertices());
    for (std::size_t i = 0; i < lo.size(); ++i) by_vertex[lo[i].x].push_back(static_cast<std::int64_t>(i));

    auto value = [&](const ContinuousTrajectory& tr, const std::vector<FaEvent>& ev, VertexId v,
                     double s, bool inclusive) {
        const auto i = last_event_before(by_vertex, v, ev, s, inclusive);
        return i < 0 ? tr.initial[v] : ev[i].value;
    };
    auto discrepant = [&](VertexId v, double s, bool inclusive) {
        return value(run.low, lo, v, s, inclusive) != value(run.high, hi, v, s, inclusive);
    };

    std::vector<DiscrepancyStep> chain;
    if (!discrepant(x, t, true)) return chain;
    VertexId v = x;
    double s = t;
    bool inclusive = true;
    for (;;) {
        // Find when v last became discrepant at or before s.
        const auto& idx = by_vertex[v];
        std::int64_t created = -1;
        for (auto it = idx.rbegin(); it != idx.rend(); ++it) {
            const auto& e = lo[*it];
            if (inclusive ? e.time > s : e.time >= s) continue;
            const bool after = lo[*it].value != hi[*it].value;
            const bool before = discrepant(v, e.time, false);
            if (after && !before) {
                created = *it;
                break;
            }
        }
        if (created < 0) {
            // Discrepant since time 0.
            if (run.low.initial[v] == run.high.initial[v]) return {};
            chain.push_back({v, 0.0});
            return chain;
        }
        const double tc = lo[created].time;
        chain.push_back({v, tc});
        VertexId parent = -1;
        for (VertexId y : lat.graph().neighbors(v))
            if (lat.is_free(y) && discrepant(y, tc, false)) {
                parent = y;
                break;
            }
        if (parent < 0) return {};
        v = parent;
        s = tc;
        inclusive = false;
    }
}

bool audit_discrepancy_provenance(const FaCoupledRun& run, const Lattice& lat) {
    Config lo = run.low.initial, hi = run.high.initial;
    const auto& el = run.low.events;
    const auto& eh = run.high.events;
    if (el.size() != eh.size()) return false;
    for (std::size_t i = 0; i < el.size(); ++i) {
        const VertexId x = el[i].x;
        if (eh[i].x != x || eh[i].time != el[i].time) return false;
        if (lo[x] > hi[x]) return false;  // monotone coupling must hold
        const bool was = lo[x] != hi[x];
        lo[x] = el[i].value;
        hi[x] = eh[i].value;
        if (lo[x] != hi[x] && !was) {
            bool source = false;
            for (VertexId y : lat.graph().neighbors(x)) source = source || (lo[y] != hi[y]);
            if (!source) return false;
        }
    }
    return true;
}

CoupledCpNmvp run_coupled_cp_nmvp(const Lattice& lat, double eps, int T, const RandomField& field) {
    const int d = lat.graph().nominal_degree();
    CoupledCpNmvp out;
    const Config ones = lat.initial(InitialLaw::all_one(), field);
    out.chi = run_discrete(lat, DiscreteProcess::cp(d / 2 + 1, eps), ones, T, field);
    out.sigma = run_discrete(lat, DiscreteProcess::nmvp(eps), ones, T, field);
    for (int t = 0; t <= T; ++t)
        for (VertexId x : lat.free_vertices())
            out.violations += out.chi.at(x, t) > out.sigma.at(x, t);
    return out;
}

}  // namespace kcm
