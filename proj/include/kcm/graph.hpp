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

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace kcm {

using VertexId = std::int32_t;

enum class FamilyKind { Hyperbolic, Tree, Explicit };

/// Which infinite graph a truncation was cut from.
struct Family {
    FamilyKind kind = FamilyKind::Explicit;
    int d = 0;  ///< degree of the infinite graph (0 for explicit graphs)
    int f = 0;  ///< face size, hyperbolic only

    static Family hyperbolic(int d, int f) { return {FamilyKind::Hyperbolic, d, f}; }
    static Family tree(int d) { return {FamilyKind::Tree, d, 0}; }
    static Family explicit_graph() { return {}; }

    std::string name() const;
    bool operator==(const Family&) const = default;
};

/// Finite rooted truncation of a bounded-degree graph.
///
/// Vertices are dense ids, adjacency is stored as sorted CSR rows, and the
/// layer of a vertex is its BFS distance from the root. Vertices of layer
/// at most radius-1 are "interior"; their neighbourhoods are complete copies
/// of the infinite graph's. An optional rotation system stores the
/// counter-clockwise cyclic order of neighbours around every vertex.
class Graph {
public:
    Graph() = default;

    /// Validates symmetry, absence of loops and duplicate edges, computes
    /// layers by BFS from `root`, and sorts adjacency rows. `rotation`, when
    /// non-empty, must hold a permutation of each vertex's neighbours.
    static Graph from_adjacency(std::vector<std::vector<VertexId>> adjacency, VertexId root,
                                int radius, Family family,
                                std::vector<std::vector<VertexId>> rotation = {});

    int num_vertices() const { return static_cast<int>(offsets_.size()) - 1; }
    std::int64_t num_edges() const { return static_cast<std::int64_t>(targets_.size()) / 2; }

    std::span<const VertexId> neighbors(VertexId v) const {
        return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
    }
    int degree(VertexId v) const { return static_cast<int>(offsets_[v + 1] - offsets_[v]); }
    bool adjacent(VertexId u, VertexId v) const;

    VertexId root() const { return root_; }
    int layer(VertexId v) const { return layer_[v]; }
    int radius() const { return radius_; }
    bool is_interior(VertexId v) const { return layer_[v] <= radius_ - 1; }
    int max_layer() const { return max_layer_; }

    const Family& family() const { return family_; }
    /// Degree of the infinite graph when known from the family, else max degree.
    int nominal_degree() const;
    int max_degree() const { return max_degree_; }
    int min_interior_degree() const;

    bool has_rotation() const { return !rot_targets_.empty(); }
    std::span<const VertexId> rotation(VertexId v) const {
        return {rot_targets_.data() + offsets_[v], rot_targets_.data() + offsets_[v + 1]};
    }

    /// Raw CSR arrays for hot loops.
    std::span<const std::int64_t> offsets() const { return offsets_; }
    std::span<const VertexId> targets() const { return targets_; }

    /// Vertices grouped by layer, ascending id within each layer.
    std::vector<std::vector<VertexId>> layers() const;

    /// BFS distances from `source`; -1 for unreachable vertices.
    std::vector<int> distances_from(VertexId source, int max_distance = -1) const;

private:
    std::vector<std::int64_t> offsets_{0};
    std::vector<VertexId> targets_;
    std::vector<VertexId> rot_targets_;
    std::vector<int> layer_;
    VertexId root_ = 0;
    int radius_ = 0;
    int max_layer_ = 0;
    int max_degree_ = 0;
    Family family_;
};

/// d-regular tree truncated at `depth`. Throws std::invalid_argument if d < 2.
Graph build_tree(int d, int depth);

/// Ball of radius `radius` around a vertex of the hyperbolic lattice H(d, f),
/// with rotation system. Throws std::domain_error unless (d-2)(f-2) > 4.
Graph build_hyperbolic(int d, int f, int radius);

/// Closed-walk faces of the rotation system whose vertices are all interior.
std::vector<std::vector<VertexId>> interior_faces(const Graph& g);

struct AuditReport {
    bool ok = true;
    std::int64_t checked_vertices = 0;
    std::int64_t checked_faces = 0;
    std::vector<std::string> failures;
};

/// Degree audit on interior vertices and, when a rotation is present, face
/// length audit on interior faces. Also re-checks the layer invariant.
AuditReport audit_graph(const Graph& g);

bool is_bipartite(const Graph& g);

/// min over layers k <= R-1 and x in layer k of the number of neighbours in
/// layer k+1, for r fixed to the graph root. Finite-radius witness only.
int compute_jbar(const Graph& g);

/// Line format: header `family d f radius`, then `id layer n1,n2,... [r1,r2,...]`.
void write_graph(std::ostream& out, const Graph& g);
Graph read_graph(std::istream& in);

}  // namespace kcm
