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

#include <doctest.h>

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "kcm/history.hpp"

using namespace kcm;

namespace {

// Zero points (x, t) with 1 <= t <= T on free vertices, across trials.
template <class F>
int for_zero_events(const Lattice& lat, const DiscreteProcess& proc, int T, int trials, int limit,
                    std::uint64_t seed, F&& visit, bool skip_noise_roots = false) {
    int seen = 0;
    RandomField base(seed);
    for (int trial = 0; trial < trials && seen < limit; ++trial) {
        const auto field = base.derive(trial);
        const auto traj = run_discrete(lat, proc, lat.initial(InitialLaw::all_one(), field), T, field);
        for (int t = T; t >= 1 && seen < limit; --t)
            for (VertexId x = 0; x < lat.graph().num_vertices() && seen < limit; ++x)
                if (lat.is_free(x) && traj.at(x, t) == 0 &&
                    !(skip_noise_roots && field.uniform_at(x, t) < proc.eps)) {
                    visit(traj, field, SpaceTimePoint{x, t});
                    ++seen;
                }
    }
    return seen;
}

// Independent count: every point set U of size n in the backward cone and
// every edge subset inside U, kept when the validator accepts it and the
// edge set spans exactly U.
std::int64_t brute_force_count(const Graph& g, SpaceTimePoint root, int n, int j, ProcessKind kind) {
    std::vector<SpaceTimePoint> cone;
    const auto dist = g.distances_from(root.x);
    for (int t = 1; t < root.t; ++t)
        for (VertexId x = 0; x < g.num_vertices(); ++x)
            if (dist[x] >= 0 && dist[x] <= root.t - t) cone.push_back({x, t});
    std::int64_t total = 0;
    std::vector<int> pick;
    auto visit_set = [&](const std::vector<SpaceTimePoint>& U) {
        std::vector<SpaceTimeEdge> cand;
        for (const auto& p : U)
            for (const auto& q : U) {
                if (q.t != p.t - 1) continue;
                if (q.x == p.x) cand.push_back({p, q, EdgeKind::Straight});
                else if (g.adjacent(p.x, q.x)) cand.push_back({p, q, EdgeKind::Oblique});
            }
        REQUIRE(cand.size() < 24);
        std::vector<SpaceTimePoint> sorted = U;
        std::sort(sorted.begin(), sorted.end());
        for (std::uint32_t mask = 0; mask < (1u << cand.size()); ++mask) {
            std::vector<SpaceTimeEdge> edges;
            for (std::size_t i = 0; i < cand.size(); ++i)
                if (mask >> i & 1u) edges.push_back(cand[i]);
            const auto h = history_from_edges(kind, j, root, edges);
            if (h.points == sorted && validate_history(h, g).ok) ++total;
        }
    };
    std::function<void(std::size_t, std::vector<SpaceTimePoint>&)> rec =
        [&](std::size_t from, std::vector<SpaceTimePoint>& U) {
            if (static_cast<int>(U.size()) == n) {
                visit_set(U);
                return;
            }
            for (std::size_t i = from; i < cone.size(); ++i) {
                U.push_back(cone[i]);
                rec(i + 1, U);
                U.pop_back();
            }
        };
    std::vector<SpaceTimePoint> U{root};
    rec(0, U);
    return total;
}

}  // namespace

TEST_CASE("singleton history is valid and the general bound is tight") {
    const Graph g = build_tree(3, 4);
    const auto h = history_from_edges(ProcessKind::CP, 2, {0, 3}, {});
    CHECK(h.points.size() == 1);
    CHECK(h.sinks == h.points);
    CHECK(validate_history(h, g).ok);

    PeierlsConstants c{Surd(1), Surd(1), 3, 3, 2, true};
    const auto rep = peierls_bound(h, c, PeierlsVariant::EdgeGeneral);
    CHECK(rep.applicable);
    CHECK(rep.holds);
    CHECK(rep.lhs == rep.rhs);
    CHECK(rep.lhs == 2 * c.phi_e - Surd(2 * 2 - 2));
}

TEST_CASE("validator flags rule violations") {
    const Graph g = build_tree(3, 4);
    const SpaceTimePoint root{0, 2};
    SUBCASE("straight edge in a CP history") {
        std::vector<SpaceTimeEdge> e{{root, {1, 1}, EdgeKind::Oblique},
                                     {root, {2, 1}, EdgeKind::Oblique},
                                     {root, {0, 1}, EdgeKind::Straight}};
        const auto rep = validate_history(history_from_edges(ProcessKind::CP, 2, root, e), g);
        CHECK_FALSE(rep.ok);
        CHECK(std::any_of(rep.failures.begin(), rep.failures.end(),
                          [](const std::string& s) { return s.rfind("item4", 0) == 0; }));
    }
    SUBCASE("time-1 point outside the sinks") {
        HistoryGraph h = history_from_edges(
            ProcessKind::CP, 2, root, {{root, {1, 1}, EdgeKind::Oblique}, {root, {2, 1}, EdgeKind::Oblique}});
        REQUIRE(validate_history(h, g).ok);
        h.sinks.erase(h.sinks.begin());
        const auto rep = validate_history(h, g);
        CHECK_FALSE(rep.ok);
        CHECK(std::any_of(rep.failures.begin(), rep.failures.end(),
                          [](const std::string& s) { return s.rfind("item2", 0) == 0; }));
    }
    SUBCASE("oblique edge between non-neighbours") {
        const auto h = history_from_edges(
            ProcessKind::CP, 2, root, {{root, {1, 1}, EdgeKind::Oblique}, {root, {5, 1}, EdgeKind::Oblique}});
        CHECK_FALSE(validate_history(h, g).ok);
    }
    SUBCASE("wrong out-degree") {
        const auto h = history_from_edges(ProcessKind::CP, 2, root, {{root, {1, 1}, EdgeKind::Oblique}});
        CHECK_FALSE(validate_history(h, g).ok);
    }
    SUBCASE("disconnected point") {
        HistoryGraph h = history_from_edges(
            ProcessKind::CP, 2, root, {{root, {1, 1}, EdgeKind::Oblique}, {root, {2, 1}, EdgeKind::Oblique}});
        h.points.push_back({3, 1});
        h.sinks.push_back({3, 1});
        std::sort(h.points.begin(), h.points.end());
        std::sort(h.sinks.begin(), h.sinks.end());
        CHECK_FALSE(validate_history(h, g).ok);
    }
}

TEST_CASE("extracted CP histories on H(5,4) pass both audits") {
    const Graph g = build_hyperbolic(5, 4, 5);
    const Lattice lat(g, Boundary::One);
    const auto proc = DiscreteProcess::cp(3, 0.05);
    int n_sinks4 = 0;
    auto check = [&](const DiscreteTrajectory& traj, const RandomField& f, SpaceTimePoint r) {
        const auto h = extract_history(traj, lat, f, r);
        const auto v = validate_history(h, g);
        INFO((v.failures.empty() ? std::string() : v.failures.front()));
        CHECK(v.ok);
        CHECK(presence_audit(h, traj, f).ok);
        int noise = 0;
        for (const auto& p : h.points) noise += f.uniform_at(p.x, p.t) < proc.eps;
        CHECK(noise == static_cast<int>(h.sinks.size()));
        n_sinks4 += h.sinks.size() == 4;
    };
    CHECK(for_zero_events(lat, proc, 6, 400, 500, 11, check) == 500);
    // Same audits restricted to roots that are not noise points.
    CHECK(for_zero_events(lat, proc, 6, 20000, 5000, 12, check, true) == 5000);
    // With j = 2 a non-noise root already has four sinks below it.
    CHECK(for_zero_events(lat, DiscreteProcess::cp(2, 0.05), 6, 2000, 10, 13, check, true) == 10);
    CHECK(n_sinks4 > 0);
}

TEST_CASE("noise root gives the singleton and BP keeps straight edges") {
    const Graph g = build_tree(4, 6);
    const Lattice lat(g, Boundary::One);
    const auto proc = DiscreteProcess::bp(2, 0.08);
    int singles = 0, larger = 0;
    for_zero_events(lat, proc, 5, 200, 400, 5,
                    [&](const DiscreteTrajectory& traj, const RandomField& f, SpaceTimePoint r) {
                        const auto h = extract_history(traj, lat, f, r);
                        CHECK(validate_history(h, g).ok);
                        CHECK(presence_audit(h, traj, f).ok);
                        if (f.uniform_at(r.x, r.t) < proc.eps) {
                            CHECK(h.points.size() == 1);
                            CHECK(h.edges.empty());
                            CHECK(h.sinks.size() == 1);
                            ++singles;
                            return;
                        }
                        ++larger;
                        for (const auto& p : h.points) {
                            if (std::binary_search(h.sinks.begin(), h.sinks.end(), p)) continue;
                            const SpaceTimePoint down{p.x, p.t - 1};
                            CHECK(std::binary_search(h.points.begin(), h.points.end(), down));
                        }
                    });
    for_zero_events(lat, proc, 5, 2000, 200, 6,
                    [&](const DiscreteTrajectory& traj, const RandomField& f, SpaceTimePoint r) {
                        const auto h = extract_history(traj, lat, f, r);
                        CHECK(validate_history(h, g).ok);
                        CHECK(h.points.size() >= 5);
                        ++larger;
                    },
                    true);
    CHECK(singles > 0);
    CHECK(larger > 0);
}

TEST_CASE("presence audit catches a non-sink noise point") {
    const Graph g = build_tree(4, 6);
    const Lattice lat(g, Boundary::One);
    const auto proc = DiscreteProcess::cp(3, 0.1);
    bool tested = false;
    for_zero_events(lat, proc, 4, 100, 1000, 3,
                    [&](const DiscreteTrajectory& traj, const RandomField& f, SpaceTimePoint r) {
                        if (tested || f.uniform_at(r.x, r.t) < proc.eps) return;
                        auto h = extract_history(traj, lat, f, r);
                        REQUIRE(presence_audit(h, traj, f).ok);
                        // Declare the (non-noise) root a sink.
                        h.sinks.insert(std::lower_bound(h.sinks.begin(), h.sinks.end(), r), r);
                        CHECK_FALSE(presence_audit(h, traj, f).ok);
                        tested = true;
                    });
    CHECK(tested);
}

TEST_CASE("Peierls inequalities on extracted histories") {
    SUBCASE("CP on H(7,4), j = 3, edge bounds") {
        const Graph g = build_hyperbolic(7, 4, 5);
        const Lattice lat(g, Boundary::One);
        const auto in = hyperbolic_inputs(7, 4);
        REQUIRE(classify(3, in).chi_item == ChiItem::I);
        const auto c = peierls_constants(in, 3);
        int n = 0;
        for_zero_events(lat, DiscreteProcess::cp(3, 0.1), 5, 30, 300, 21,
                        [&](const DiscreteTrajectory& traj, const RandomField& f, SpaceTimePoint r) {
                            const auto h = extract_history(traj, lat, f, r);
                            const auto rep = peierls_bound(h, c, PeierlsVariant::EdgeGeneral);
                            CHECK(rep.applicable);
                            CHECK(rep.holds);
                            CHECK(rep.informative);
                            CHECK(static_cast<double>(h.sinks.size()) >= h.points.size() / rep.K - 1e-12);
                            CHECK(peierls_bound(h, c, PeierlsVariant::EdgeImproved).holds);
                            ++n;
                        });
        CHECK(n == 300);
    }
    SUBCASE("BP on tree(5), j = 3, vertex bound") {
        const Graph g = build_tree(5, 7);
        const Lattice lat(g, Boundary::One);
        const auto c = peierls_constants(tree_inputs(5), 3);
        REQUIRE(c.phi_v.has_value());
        int n = 0;
        for_zero_events(lat, DiscreteProcess::bp(3, 0.1), 5, 50, 300, 8,
                        [&](const DiscreteTrajectory& traj, const RandomField& f, SpaceTimePoint r) {
                            const auto h = extract_history(traj, lat, f, r);
                            const auto rep = peierls_bound(h, c, PeierlsVariant::Vertex);
                            CHECK(rep.holds);
                            CHECK(rep.informative);
                            CHECK(rep.K == doctest::Approx(2.0));
                            ++n;
                        });
        CHECK(n == 300);
    }
    SUBCASE("improved bound needs BP or bipartite") {
        const auto in = hyperbolic_inputs(7, 3);
        const auto h = history_from_edges(ProcessKind::CP, 2, {0, 2}, {});
        const auto rep = peierls_bound(h, peierls_constants(in, 2), PeierlsVariant::EdgeImproved);
        CHECK_FALSE(rep.applicable);
        CHECK_FALSE(rep.reason.empty());
    }
}

TEST_CASE("history counts") {
    const Graph g = build_tree(3, 4);
    CHECK(count_histories(g, {0, 3}, 1, 2, ProcessKind::CP) == 1);
    CHECK(count_histories(g, {0, 3}, 1, 2, ProcessKind::BP) == 1);
    CHECK_THROWS(count_histories(g, {0, 3}, 9, 2, ProcessKind::CP));

    SUBCASE("agrees with brute force") {
        for (ProcessKind kind : {ProcessKind::CP, ProcessKind::BP})
            for (int T : {2, 3})
                for (int n = 1; n <= 4; ++n) {
                    CAPTURE(n);
                    CAPTURE(T);
                    CHECK(count_histories(g, {0, T}, n, 2, kind) == brute_force_count(g, {0, T}, n, 2, kind));
                }
    }
    SUBCASE("BP, n = 2: no admissible single-child choice") {
        // M_T(o) has deg - j + 1 = 2 oblique targets plus the straight one.
        CHECK(count_histories(g, {0, 3}, 2, 2, ProcessKind::BP) == 0);
        CHECK(count_histories(g, {0, 3}, 4, 2, ProcessKind::BP) == 3);
    }
    SUBCASE("exponential bound") {
        const Graph deep = build_tree(3, 7);
        for (int n = 1; n <= 5; ++n) {
            const auto k = count_histories(deep, {0, 6}, n, 2, ProcessKind::CP);
            CHECK(static_cast<double>(k) <= history_count_bound(n, 3));
        }
        CHECK(count_histories(deep, {0, 6}, 3, 2, ProcessKind::CP) == 3);
    }
}

TEST_CASE("history dump format") {
    const SpaceTimePoint root{0, 2};
    const auto h = history_from_edges(ProcessKind::CP, 2, root,
                                      {{root, {2, 1}, EdgeKind::Oblique}, {root, {1, 1}, EdgeKind::Oblique}});
    std::ostringstream out;
    write_history(out, h);
    CHECK(out.str() == "(0,2)->(1,1) oblique\n(0,2)->(2,1) oblique\nsinks (1,1) (2,1)\n");
}
