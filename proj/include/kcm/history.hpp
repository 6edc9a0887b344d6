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

#include "kcm/classify.hpp"
#include "kcm/dynamics.hpp"
#include "kcm/spacetime.hpp"
#include "kcm/surd.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace kcm {

enum class EdgeKind { Straight, Oblique };

struct SpaceTimeEdge {
    SpaceTimePoint from;
    SpaceTimePoint to;
    EdgeKind kind = EdgeKind::Oblique;

    auto operator<=>(const SpaceTimeEdge&) const = default;
};

struct HistoryGraph {
    ProcessKind kind = ProcessKind::CP;
    int j = 1;
    SpaceTimePoint root;
    std::vector<SpaceTimeEdge> edges;   ///< sorted
    std::vector<SpaceTimePoint> points;  ///< U, sorted
    std::vector<SpaceTimePoint> sinks;   ///< U*, sorted

    std::size_t size() const { return points.size(); }
};

/// Builds (U, F, U*) from the edge set alone: U is the root plus all edge
/// endpoints, U* the points without outgoing edges.
HistoryGraph history_from_edges(ProcessKind kind, int j, SpaceTimePoint root,
                                std::vector<SpaceTimeEdge> edges);

/// Constructive extraction for a zero at `root` of a BP or CP trajectory
/// started from all ones. Zero-state neighbours are taken in increasing id
/// order. Throws std::runtime_error if a step has too few zero neighbours.
HistoryGraph extract_history(const DiscreteTrajectory& traj, const Lattice& lat,
                             const RandomField& field, SpaceTimePoint root);

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> failures;  ///< tagged "item1".."item5", "geometry", "connected", "sinks"
    void fail(std::string msg) {
        ok = false;
        failures.push_back(std::move(msg));
    }
};

/// Items (1)-(5) of a history graph, edge geometry, sink consistency with
/// the edge set, and reachability of every point from the root.
ValidationReport validate_history(const HistoryGraph& h, const Graph& g);

/// Noise points of the realization inside U are exactly U*, and every point of U is zero.
ValidationReport presence_audit(const HistoryGraph& h, const DiscreteTrajectory& traj,
                                const RandomField& field);

enum class PeierlsVariant { EdgeGeneral, EdgeImproved, Vertex };
std::string to_string(PeierlsVariant v);

struct PeierlsConstants {
    Surd phi_e;
    std::optional<Surd> phi_v;  ///< lower bound is enough for the vertex variant
    int max_degree = 0;
    int min_degree = 0;
    int j = 1;
    bool bipartite = false;
};

struct PeierlsReport {
    bool applicable = false;
    bool holds = false;
    Surd lhs;
    Surd rhs;
    bool informative = false;  ///< |U*| >= |U| / K with a finite positive K
    double K = 0;
    std::string reason;
};

/// Evaluates the chosen inequality exactly:
///   EdgeGeneral:  (3F - D - 2j + 2)|U| + D - F <= 2(F - j + 1)|U*|
///   EdgeImproved: 2(F - j + 1)|U| + d - F <= (F + D - 2j + 2)|U*|   (BP, or CP on bipartite G)
///   Vertex, CP:   (V - j)|U| + 1 <= (V - j + 1)|U*|
///   Vertex, BP:   (V - j + 1)|U| + 1 <= (V - j + 2)|U*|
/// with F = Phi_E, V = Phi_V (or a lower bound), D = max degree, d = min degree.
PeierlsReport peierls_bound(const HistoryGraph& h, const PeierlsConstants& c, PeierlsVariant v);

PeierlsConstants peierls_constants(const GoodnessInputs& in, int j);

/// Number of history graphs with |U| = n for the root, by layered
/// enumeration of sink sets and neighbour choices. Throws above the cap.
std::int64_t count_histories(const Graph& g, SpaceTimePoint root, int n, int j, ProcessKind kind,
                             int cap = 7);

/// 2^{2n} (1 + 2^D)^n as a double (exceeds int64 quickly).
double history_count_bound(int n, int max_degree);

void write_history(std::ostream& out, const HistoryGraph& h);

}  // namespace kcm
