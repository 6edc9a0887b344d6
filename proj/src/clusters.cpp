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

#include "kcm/clusters.hpp"

#include "kcm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <unordered_map>
#include <unordered_set>

namespace kcm {

std::vector<SpaceTimePoint> strong_neighbors(SpaceTimePoint p, const Graph& g, int T) {
    std::vector<SpaceTimePoint> out;
    for (int s = std::max(0, p.t - 1); s <= std::min(T, p.t + 1); ++s) {
        if (s != p.t) out.push_back({p.x, s});
        for (VertexId y : g.neighbors(p.x)) out.push_back({y, s});
    }
    return out;
}

namespace {

std::uint64_t key(SpaceTimePoint p) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.x)) << 32) |
           static_cast<std::uint32_t>(p.t);
}

// Distance in G between vertices; depth-bounded BFS, parent climbing on trees.
class GraphDistance {
public:
    explicit GraphDistance(const Graph& g) : g_(g) {}

    std::unordered_map<VertexId, int> from(VertexId src, const std::vector<VertexId>& targets,
                                           int max_depth) const {
        std::unordered_map<VertexId, int> found;
        if (g_.family().kind == FamilyKind::Tree) {
            for (VertexId y : targets) found[y] = tree_distance(src, y);
            return found;
        }
        std::unordered_set<VertexId> want(targets.begin(), targets.end());
        std::unordered_map<VertexId, int> dist{{src, 0}};
        std::deque<VertexId> queue{src};
        std::size_t remaining = want.size();
        if (want.count(src)) {
            found[src] = 0;
            --remaining;
        }
        while (!queue.empty() && remaining > 0) {
            const VertexId v = queue.front();
            queue.pop_front();
            const int dv = dist[v];
            if (dv >= max_depth) continue;
            for (VertexId w : g_.neighbors(v)) {
                if (dist.count(w)) continue;
                dist[w] = dv + 1;
                queue.push_back(w);
                if (want.count(w)) {
                    found[w] = dv + 1;
                    --remaining;
                }
            }
        }
        return found;
    }

private:
    VertexId parent(VertexId v) const {
        for (VertexId w : g_.neighbors(v))
            if (g_.layer(w) == g_.layer(v) - 1) return w;
        return v;
    }
    int tree_distance(VertexId a, VertexId b) const {
        int d = 0;
        while (a != b) {
            if (g_.layer(a) >= g_.layer(b))
                a = parent(a);
            else
                b = parent(b);
            ++d;
        }
        return d;
    }

    const Graph& g_;
};

}  // namespace

Cluster zero_cluster(const DiscreteTrajectory& traj, const Graph& g, SpaceTimePoint seed,
                     const ClusterOptions& opts) {
    Cluster cl;
    const int T = traj.horizon();
    if (traj.at(seed.x, seed.t) != 0 || !g.is_interior(seed.x)) return cl;

    auto touches = [&](SpaceTimePoint p) {
        return p.t == 0 || p.t == T || g.layer(p.x) >= g.radius() - opts.spatial_margin;
    };
    std::mt19937_64 rng(opts.shuffle_seed.value_or(0));
    std::unordered_set<std::uint64_t> seen{key(seed)};
    std::vector<SpaceTimePoint> frontier{seed};
    cl.censored = touches(seed);
    while (!frontier.empty()) {
        if (cl.censored && opts.stop_when_censored) break;
        std::size_t pick = frontier.size() - 1;
        if (opts.shuffle_seed) pick = std::uniform_int_distribution<std::size_t>(0, pick)(rng);
        const SpaceTimePoint p = frontier[pick];
        frontier[pick] = frontier.back();
        frontier.pop_back();
        cl.points.push_back(p);
        for (const auto& q : strong_neighbors(p, g, T)) {
            if (!g.is_interior(q.x) || traj.at(q.x, q.t) != 0) continue;
            if (!seen.insert(key(q)).second) continue;
            frontier.push_back(q);
            cl.censored = cl.censored || touches(q);
        }
    }
    if (cl.censored && opts.stop_when_censored) {
        cl.points.insert(cl.points.end(), frontier.begin(), frontier.end());
        std::sort(cl.points.begin(), cl.points.end());
        cl.diameter = Cluster::kUnknown;
        return cl;
    }
    std::sort(cl.points.begin(), cl.points.end());

    // Per spatial vertex: time span of the cluster above it.
    std::unordered_map<VertexId, std::pair<int, int>> span;
    for (const auto& p : cl.points) {
        auto [it, fresh] = span.try_emplace(p.x, p.t, p.t);
        if (!fresh) {
            it->second.first = std::min(it->second.first, p.t);
            it->second.second = std::max(it->second.second, p.t);
        }
    }
    std::vector<VertexId> sites;
    for (const auto& [x, s] : span) sites.push_back(x);
    std::sort(sites.begin(), sites.end());
    const GraphDistance dist(g);
    int diam = 0;
    for (VertexId x : sites) {
        const auto dx = dist.from(x, sites, static_cast<int>(sites.size()));
        const auto [xlo, xhi] = span[x];
        for (VertexId y : sites) {
            const auto [ylo, yhi] = span[y];
            const int dt = std::max(std::abs(xhi - ylo), std::abs(yhi - xlo));
            const auto it = dx.find(y);
            const int ds = it == dx.end() ? static_cast<int>(sites.size()) : it->second;
            diam = std::max(diam, std::max(ds, dt));
        }
    }
    cl.diameter = diam;
    return cl;
}

std::vector<TailRow> tail_table(const std::vector<std::pair<bool, int>>& summaries, int ell_max) {
    std::vector<TailRow> rows;
    const auto n = static_cast<std::int64_t>(summaries.size());
    std::int64_t censored = 0;
    for (const auto& [c, d] : summaries) censored += c ? 1 : 0;
    for (int ell = 0; ell <= ell_max; ++ell) {
        TailRow row;
        row.ell = ell;
        row.n_trials = n;
        row.n_censored = censored;
        for (const auto& [c, d] : summaries)
            if (!c && d != Cluster::kEmpty && d >= ell) ++row.n_survive;
        row.p_hat = n ? static_cast<double>(row.n_survive) / static_cast<double>(n) : 0.0;
        const auto ci = wilson(row.n_survive, n);
        row.ci_lo = ci.lo;
        row.ci_hi = ci.hi;
        row.p_upper = n ? static_cast<double>(row.n_survive + censored) / static_cast<double>(n) : 0.0;
        rows.push_back(row);
    }
    return rows;
}

std::vector<TailRow> tail_table(const std::vector<Cluster>& clusters, int ell_max) {
    std::vector<std::pair<bool, int>> summaries;
    summaries.reserve(clusters.size());
    for (const auto& c : clusters) summaries.emplace_back(c.censored, c.diameter);
    return tail_table(summaries, ell_max);
}

DecayFit fit_decay(const std::vector<TailRow>& table, double eps) {
    DecayFit fit;
    std::vector<double> x, y;
    for (const auto& row : table)
        if (row.n_survive > 0) {
            x.push_back(row.ell + 1.0);
            y.push_back(std::log(row.p_hat));
        }
    fit.points = static_cast<int>(x.size());
    if (fit.points < 3) return fit;
    const LinearFit lf = least_squares(x, y);
    fit.sufficient = true;
    fit.slope = lf.slope;
    fit.intercept = lf.intercept;
    fit.r2 = lf.r2;
    fit.c = (eps > 0 && eps < 1) ? lf.slope / std::log(eps) : 0.0;
    if (fit.c == 0.0) fit.c = 0.0;
    fit.decays = fit.c > 0;
    return fit;
}

}  // namespace kcm
