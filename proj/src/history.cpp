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

#include "kcm/history.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>

namespace kcm {

namespace {

bool contains(const std::vector<SpaceTimePoint>& sorted, SpaceTimePoint p) {
    return std::binary_search(sorted.begin(), sorted.end(), p);
}

std::string str(SpaceTimePoint p) {
    return "(" + std::to_string(p.x) + "," + std::to_string(p.t) + ")";
}

}  // namespace

std::string to_string(PeierlsVariant v) {
    switch (v) {
    case PeierlsVariant::EdgeGeneral:
        return "edge-general";
    case PeierlsVariant::EdgeImproved:
        return "edge-improved";
    case PeierlsVariant::Vertex:
        return "vertex";
    }
    return "edge-general";
}

HistoryGraph history_from_edges(ProcessKind kind, int j, SpaceTimePoint root,
                                std::vector<SpaceTimeEdge> edges) {
    HistoryGraph h;
    h.kind = kind;
    h.j = j;
    h.root = root;
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    h.edges = std::move(edges);
    std::set<SpaceTimePoint> pts{root}, sources;
    for (const auto& e : h.edges) {
        pts.insert(e.from);
        pts.insert(e.to);
        sources.insert(e.from);
    }
    h.points.assign(pts.begin(), pts.end());
    for (const auto& p : h.points)
        if (!sources.count(p)) h.sinks.push_back(p);
    return h;
}

HistoryGraph extract_history(const DiscreteTrajectory& traj, const Lattice& lat,
                             const RandomField& field, SpaceTimePoint root) {
    const auto& proc = traj.process;
    if (proc.kind == ProcessKind::NMVP)
        throw std::invalid_argument("histories are defined for BP and CP only");
    if (root.t < 1 || root.t > traj.horizon()) throw std::invalid_argument("root time out of range");
    if (traj.at(root.x, root.t) != 0) throw std::invalid_argument("root " + str(root) + " is not zero");
    const Graph& g = lat.graph();
    auto noise = [&](VertexId x, int t) { return field.uniform_at(x, t) < proc.eps; };

    std::vector<SpaceTimeEdge> edges;
    if (noise(root.x, root.t)) return history_from_edges(proc.kind, proc.j, root, {});

    std::vector<VertexId> open{root.x};  // non-noise points of the current layer
    for (int t = root.t; t > 1 && !open.empty(); --t) {
        std::set<VertexId> below;
        for (VertexId x : open) {
            const int need = g.degree(x) - proc.j + 1;
            int taken = 0;
            for (VertexId y : g.neighbors(x)) {
                if (taken == need) break;
                if (!lat.is_free(y) || traj.at(y, t - 1) != 0) continue;
                edges.push_back({{x, t}, {y, t - 1}, EdgeKind::Oblique});
                below.insert(y);
                ++taken;
            }
            if (taken < need)
                throw std::runtime_error("point " + str({x, t}) + " has " + std::to_string(taken) +
                                         " zero neighbours at time " + std::to_string(t - 1) +
                                         ", needs " + std::to_string(need));
            if (proc.kind == ProcessKind::BP) {
                edges.push_back({{x, t}, {x, t - 1}, EdgeKind::Straight});
                below.insert(x);
            }
        }
        open.clear();
        for (VertexId y : below)
            if (!noise(y, t - 1)) open.push_back(y);
    }
    return history_from_edges(proc.kind, proc.j, root, std::move(edges));
}

ValidationReport validate_history(const HistoryGraph& h, const Graph& g) {
    ValidationReport rep;
    const int T = h.root.t;
    if (!contains(h.points, h.root)) rep.fail("item1: root " + str(h.root) + " not in U");
    for (const auto& p : h.points)
        if (p != h.root && (p.t < 1 || p.t > T)) rep.fail("item1: point " + str(p) + " outside [1, T]");

    std::map<SpaceTimePoint, std::pair<int, int>> out;  // (oblique, straight)
    for (const auto& e : h.edges) {
        if (!contains(h.points, e.from) || !contains(h.points, e.to))
            rep.fail("geometry: edge endpoint outside U");
        if (e.to.t != e.from.t - 1) rep.fail("geometry: edge " + str(e.from) + "->" + str(e.to) + " not one step down");
        if (e.kind == EdgeKind::Straight && e.to.x != e.from.x)
            rep.fail("geometry: straight edge changes vertex at " + str(e.from));
        if (e.kind == EdgeKind::Oblique && !g.adjacent(e.from.x, e.to.x))
            rep.fail("geometry: oblique edge between non-neighbours at " + str(e.from));
        auto& c = out[e.from];
        (e.kind == EdgeKind::Oblique ? c.first : c.second) += 1;
    }
    for (const auto& s : h.sinks) {
        if (!contains(h.points, s)) rep.fail("sinks: sink " + str(s) + " not in U");
        if (out.count(s)) rep.fail("item3: sink " + str(s) + " has outgoing edges");
    }
    for (const auto& p : h.points) {
        const bool sink = contains(h.sinks, p);
        if (p.t == 1 && !sink) rep.fail("item2: time-1 point " + str(p) + " not a sink");
        if (!sink && !out.count(p)) rep.fail("sinks: " + str(p) + " has no outgoing edges but is not a sink");
        if (sink) continue;
        const auto [obl, str_] = out.count(p) ? out[p] : std::pair<int, int>{0, 0};
        const int need = g.degree(p.x) - h.j + 1;
        if (h.kind == ProcessKind::CP) {
            if (str_ != 0) rep.fail("item4: straight edge at " + str(p));
            if (obl != need)
                rep.fail("item4: " + str(p) + " has " + std::to_string(obl) + " oblique edges, needs " +
                         std::to_string(need));
        } else {
            if (str_ != 1) rep.fail("item5: " + str(p) + " has " + std::to_string(str_) + " straight edges");
            if (obl != need)
                rep.fail("item5: " + str(p) + " has " + std::to_string(obl) + " oblique edges, needs " +
                         std::to_string(need));
        }
    }
    // Reachability from the root along the orientation.
    std::map<SpaceTimePoint, std::vector<SpaceTimePoint>> adj;
    for (const auto& e : h.edges) adj[e.from].push_back(e.to);
    std::set<SpaceTimePoint> seen{h.root};
    std::vector<SpaceTimePoint> stack{h.root};
    while (!stack.empty()) {
        const auto p = stack.back();
        stack.pop_back();
        for (const auto& q : adj[p])
            if (seen.insert(q).second) stack.push_back(q);
    }
    if (seen.size() != h.points.size()) rep.fail("connected: some points are not reachable from the root");
    return rep;
}

ValidationReport presence_audit(const HistoryGraph& h, const DiscreteTrajectory& traj,
                                const RandomField& field) {
    ValidationReport rep;
    for (const auto& p : h.points) {
        if (p.t < 0 || p.t > traj.horizon()) {
            rep.fail("point " + str(p) + " outside the trajectory");
            continue;
        }
        if (traj.at(p.x, p.t) != 0) rep.fail("point " + str(p) + " is not zero");
        const bool is_noise = field.uniform_at(p.x, p.t) < traj.process.eps;
        if (is_noise != contains(h.sinks, p))
            rep.fail(std::string(is_noise ? "noise point " : "sink ") + str(p) +
                     (is_noise ? " is not a sink" : " is not a noise point"));
    }
    return rep;
}

PeierlsReport peierls_bound(const HistoryGraph& h, const PeierlsConstants& c, PeierlsVariant v) {
    PeierlsReport rep;
    const auto U = static_cast<std::int64_t>(h.points.size());
    const auto S = static_cast<std::int64_t>(h.sinks.size());
    const int j = c.j, D = c.max_degree, d = c.min_degree;
    const bool bp = h.kind == ProcessKind::BP;
    Surd a, b;  // lhs = a*U + b0, rhs = b*S
    Surd b0;
    switch (v) {
    case PeierlsVariant::EdgeGeneral:
        rep.applicable = true;
        a = 3 * c.phi_e - Surd(D + 2 * j - 2);
        b0 = Surd(D) - c.phi_e;
        b = 2 * (c.phi_e - Surd(j - 1));
        break;
    case PeierlsVariant::EdgeImproved:
        rep.applicable = bp || c.bipartite;
        if (!rep.applicable) rep.reason = "needs BP or a bipartite graph";
        a = 2 * (c.phi_e - Surd(j - 1));
        b0 = Surd(d) - c.phi_e;
        b = c.phi_e + Surd(D - 2 * j + 2);
        break;
    case PeierlsVariant::Vertex:
        rep.applicable = c.phi_v.has_value();
        if (!rep.applicable) {
            rep.reason = "no vertex-expansion bound available";
            break;
        }
        a = *c.phi_v - Surd(bp ? j - 1 : j);
        b0 = Surd(1);
        b = *c.phi_v - Surd(bp ? j - 2 : j - 1);
        break;
    }
    if (!rep.applicable) return rep;
    rep.lhs = a * U + b0;
    rep.rhs = b * S;
    rep.holds = rep.lhs <= rep.rhs;
    if (a.sign() > 0 && b.sign() > 0) {
        rep.informative = true;
        rep.K = b.value() / a.value();
    }
    return rep;
}

PeierlsConstants peierls_constants(const GoodnessInputs& in, int j) {
    return {in.phi_e, in.phi_v_lower, in.max_degree, in.min_degree, j, in.bipartite};
}

namespace {

class HistoryCounter {
public:
    HistoryCounter(const Graph& g, int j, ProcessKind kind) : g_(g), j_(j), kind_(kind) {}

    std::int64_t count(const std::vector<VertexId>& layer, int t, int left) {
        std::int64_t total = 0;
        const int m = static_cast<int>(layer.size());
        for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
            if (mask == 0) {
                total += left == 0 ? 1 : 0;
                continue;
            }
            if (t == 1) continue;
            std::vector<VertexId> open;
            for (int i = 0; i < m; ++i)
                if (mask >> i & 1u) open.push_back(layer[i]);
            std::map<VertexId, int> below;
            total += choose(open, 0, below, t, left);
        }
        return total;
    }

private:
    std::int64_t choose(const std::vector<VertexId>& open, std::size_t idx,
                        std::map<VertexId, int>& below, int t, int left) {
        if (static_cast<int>(below.size()) > left) return 0;
        if (idx == open.size()) {
            std::vector<VertexId> next;
            for (const auto& [y, c] : below) next.push_back(y);
            return count(next, t - 1, left - static_cast<int>(next.size()));
        }
        const VertexId x = open[idx];
        if (!g_.is_interior(x)) throw std::invalid_argument("enumeration reached the truncation boundary");
        const auto nbrs = g_.neighbors(x);
        const int deg = static_cast<int>(nbrs.size());
        const int need = deg - j_ + 1;
        std::int64_t total = 0;
        if (kind_ == ProcessKind::BP) ++below[x];
        std::vector<int> pick(need);
        // Lexicographic k-subsets of the neighbour list.
        for (int i = 0; i < need; ++i) pick[i] = i;
        for (;;) {
            for (int i : pick) ++below[nbrs[i]];
            total += choose(open, idx + 1, below, t, left);
            for (int i : pick)
                if (--below[nbrs[i]] == 0) below.erase(nbrs[i]);
            int i = need - 1;
            while (i >= 0 && pick[i] == deg - need + i) --i;
            if (i < 0) break;
            ++pick[i];
            for (int k = i + 1; k < need; ++k) pick[k] = pick[k - 1] + 1;
        }
        if (kind_ == ProcessKind::BP && --below[x] == 0) below.erase(x);
        return total;
    }

    const Graph& g_;
    int j_;
    ProcessKind kind_;
};

}  // namespace

std::int64_t count_histories(const Graph& g, SpaceTimePoint root, int n, int j, ProcessKind kind,
                             int cap) {
    if (n < 1) throw std::invalid_argument("history size must be at least 1");
    if (n > cap) throw std::invalid_argument("history size above enumeration cap " + std::to_string(cap));
    if (kind == ProcessKind::NMVP) throw std::invalid_argument("histories are defined for BP and CP only");
    if (j < 1 || j > g.degree(root.x)) throw std::invalid_argument("threshold out of range");
    HistoryCounter counter(g, j, kind);
    return counter.count({root.x}, root.t, n - 1);
}

double history_count_bound(int n, int max_degree) {
    return std::pow(4.0, n) * std::pow(1.0 + std::pow(2.0, max_degree), n);
}

void write_history(std::ostream& out, const HistoryGraph& h) {
    for (const auto& e : h.edges)
        out << str(e.from) << "->" << str(e.to) << ' '
            << (e.kind == EdgeKind::Straight ? "straight" : "oblique") << '\n';
    out << "sinks";
    for (const auto& s : h.sinks) out << ' ' << str(s);
    out << '\n';
}

}  // namespace kcm
