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

#pragma once

#include "kcm/graph.hpp"
#include "kcm/random_field.hpp"
#include "kcm/spacetime.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kcm {

/// charges[x][s-1] is A_s^x. Empty for vertices whose neighbourhood is cut
/// by the truncation.
using Charges = std::vector<std::vector<std::vector<VertexId>>>;

/// Typed dependence graph over space-time points with 1 <= t <= horizon.
/// Noise points have type 0 and no outgoing edges; update points have one
/// edge of type s to (y, t-1) for every y in A_s^x.
struct TypedDependenceGraph {
    const Graph* graph = nullptr;
    int sigma = 0;
    Charges charges;
    RandomField field;
    double eps = 0;
    int horizon = 0;

    bool typed(SpaceTimePoint p) const { return p.t >= 1 && p.t <= horizon; }
    bool is_noise(SpaceTimePoint p) const { return typed(p) && field.uniform_at(p.x, p.t) < eps; }
    bool is_bullet(SpaceTimePoint p) const { return typed(p) && !is_noise(p); }
    bool has_charges(VertexId x) const { return !charges[x].empty(); }
    std::span<const VertexId> charge(VertexId x, int s) const { return charges[x][s - 1]; }
    /// Edge (from, to) of type s is present.
    bool has_edge(SpaceTimePoint from, SpaceTimePoint to, int s) const;
};

/// sigma = 2: A_1^x = {x}, A_2^x = the j smallest neighbours of x one layer
/// further from the graph root. Throws std::invalid_argument if j exceeds
/// the finite-radius witness of the truncation.
TypedDependenceGraph build_dependence_bp(const Graph& g, int j, const RandomField& field, double eps,
                                         int horizon);

/// Orientation of a regular tree truncation: the ray root, first child,
/// first child of that, ... points away from the root, every other edge
/// points towards the ray. out[x] is y_d^x (-1 if cut off), in[x] lists
/// y_1^x..y_{d-1}^x by increasing id.
struct TreeOrientation {
    int d = 0;
    std::vector<VertexId> out;
    std::vector<std::vector<VertexId>> in;
};

TreeOrientation orient_tree(const Graph& tree);

/// sigma = d: A_s^x = N(x) minus y_s^x, for every interior x.
TypedDependenceGraph build_dependence_tree(const Graph& tree, const TreeOrientation& orient,
                                           const RandomField& field, double eps, int horizon);

enum class PolarConstruction { BpDistance, TreeRecursive };

struct PolarMap {
    PolarConstruction construction = PolarConstruction::BpDistance;
    int sigma = 0;
    std::vector<std::int64_t> values;  ///< row-major, sigma entries per vertex

    std::span<const std::int64_t> at(VertexId x) const {
        return {values.data() + static_cast<std::size_t>(x) * sigma, static_cast<std::size_t>(sigma)};
    }
    std::int64_t coord(VertexId x, int s) const { return values[static_cast<std::size_t>(x) * sigma + s - 1]; }
};

/// L_2 = dist(root, x), L_1 = -L_2.
PolarMap polar_bp(const Graph& g);

/// Solves L(y_i^x) - L(x) = -e_i + e_d from L(basepoint) = 0. Throws
/// std::logic_error if some edge relation fails afterwards.
PolarMap polar_tree(const Graph& tree, const TreeOrientation& orient, VertexId basepoint);

struct PolarAudit {
    bool ok = true;
    std::vector<std::string> failures;
};

/// Coordinates sum to zero everywhere; for tree maps also
/// L_d(y_d^x) - L_d(x) = -1 and every recurrence relation.
PolarAudit audit_polar(const PolarMap& L, const Graph& g, const TreeOrientation* orient = nullptr);

struct EdgeSpeeds {
    std::vector<std::int64_t> eps;    ///< eps_s, s = 1..sigma
    std::vector<std::int64_t> reach;  ///< R_s
    bool constant = true;             ///< same values at every vertex with charges
    std::int64_t points_checked = 0;
    std::vector<std::string> deviations;
};

EdgeSpeeds edge_speeds(const PolarMap& L, const Charges& charges);

/// 3(d + 1)(n_sinks - 1).
std::int64_t contour_edge_bound(int d, int n_sinks);

/// 3(1 + sum R_s / sum eps_s)(n_sinks - 1); requires sum eps_s > 0.
double contour_edge_bound(const EdgeSpeeds& speeds, int n_sinks);

enum class CycleRole { Source, Sink, Pass1, Pass2 };
std::string to_string(CycleRole r);

/// Oriented cycle on [n] with images psi_0..psi_n (psi_n = psi_0).
/// forward[v] says (v, v+1) is an edge, otherwise (v+1, v) is.
/// edge_type[v] is the dependence-graph type claimed for that edge.
struct ToomCycle {
    int n = 0;
    std::vector<bool> forward;
    std::vector<SpaceTimePoint> psi;
    std::vector<int> edge_type;

    CycleRole role(int v) const;
    int count(CycleRole r) const;
    int edges_of_kind(bool forward_kind) const;
    /// Sinks' images.
    std::vector<SpaceTimePoint> sinks() const;
    /// Tail and head of the edge between v and v+1.
    std::pair<int, int> edge(int v) const;
    /// The type the presence conditions require for the edge between v and v+1.
    int required_type(int v) const;
};

ToomCycle singleton_cycle(SpaceTimePoint root);

struct CycleReport {
    bool ok = true;
    bool well_formed = true;
    bool definition_ok = true;  ///< conditions (1) and (2)
    bool edges_consistent = true;
    bool zero_sum_ok = true;
    bool counts_ok = true;
    std::int64_t zero_sum = 0;
    std::vector<std::string> failures;

    void fail(bool CycleReport::*flag, std::string msg) {
        this->*flag = false;
        ok = false;
        failures.push_back(std::move(msg));
    }
};

/// Checks the oriented-cycle structure, conditions (1)-(2), that every
/// claimed type matches its role and its geometry, the zero sum taken with
/// the increments each claimed type implies for L, and
/// |V_o| = |V_*|, |E_1| = |E_2|, n = 4(|V_*| - 1). A singleton (n = 1)
/// only gets the structural checks.
CycleReport certify_cycle(const ToomCycle& c, const PolarMap& L);

/// Presence in the dependence graph: sinks are noise points and every edge
/// exists with its claimed type.
CycleReport check_presence(const ToomCycle& c, const TypedDependenceGraph& dep);

struct CycleSearch {
    std::optional<ToomCycle> cycle;
    int cap = 0;
    std::int64_t nodes = 0;
};

/// Iterative deepening over present cycles rooted at `root` with at most
/// edge_cap edges and all times in [1, root.t]. Returns the first cycle in
/// canonical order; an empty result only means none was found within the cap.
CycleSearch find_present_cycle(const TypedDependenceGraph& dep, SpaceTimePoint root, int edge_cap);

/// Exact number of present cycles rooted at `root` with exactly n_edges edges.
std::int64_t count_present_cycles(const TypedDependenceGraph& dep, SpaceTimePoint root, int n_edges);

/// One line per cycle edge: `v (x,t) -> w (y,s) E1|E2 type k`.
void write_cycle(std::ostream& out, const ToomCycle& c);

}  // namespace kcm
