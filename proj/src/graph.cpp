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

#include "kcm/graph.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace kcm {

std::string Family::name() const {
    switch (kind) {
    case FamilyKind::Hyperbolic:
        return "hyperbolic";
    case FamilyKind::Tree:
        return "tree";
    case FamilyKind::Explicit:
        return "explicit";
    }
    return "explicit";
}

Graph Graph::from_adjacency(std::vector<std::vector<VertexId>> adjacency, VertexId root,
                            int radius, Family family,
                            std::vector<std::vector<VertexId>> rotation) {
    const auto n = static_cast<VertexId>(adjacency.size());
    if (n == 0) throw std::invalid_argument("graph must have at least one vertex");
    if (root < 0 || root >= n) throw std::invalid_argument("root out of range");
    if (radius < 0) throw std::invalid_argument("radius must be nonnegative");
    if (!rotation.empty() && rotation.size() != adjacency.size())
        throw std::invalid_argument("rotation size mismatch");

    Graph g;
    g.root_ = root;
    g.radius_ = radius;
    g.family_ = family;
    g.offsets_.assign(n + 1, 0);
    for (VertexId v = 0; v < n; ++v) {
        auto& row = adjacency[v];
        std::sort(row.begin(), row.end());
        for (std::size_t i = 0; i < row.size(); ++i) {
            const VertexId w = row[i];
            if (w < 0 || w >= n) throw std::invalid_argument("neighbor id out of range");
            if (w == v) throw std::invalid_argument("self-loop at vertex " + std::to_string(v));
            if (i > 0 && row[i - 1] == w)
                throw std::invalid_argument("duplicate edge at vertex " + std::to_string(v));
        }
        g.offsets_[v + 1] = g.offsets_[v] + static_cast<std::int64_t>(row.size());
        g.max_degree_ = std::max(g.max_degree_, static_cast<int>(row.size()));
    }
    g.targets_.reserve(static_cast<std::size_t>(g.offsets_[n]));
    for (const auto& row : adjacency) g.targets_.insert(g.targets_.end(), row.begin(), row.end());
    for (VertexId v = 0; v < n; ++v)
        for (VertexId w : g.neighbors(v))
            if (!std::binary_search(adjacency[w].begin(), adjacency[w].end(), v))
                throw std::invalid_argument("adjacency is not symmetric");

    if (!rotation.empty()) {
        g.rot_targets_.reserve(g.targets_.size());
        for (VertexId v = 0; v < n; ++v) {
            auto sorted = rotation[v];
            std::sort(sorted.begin(), sorted.end());
            if (sorted != adjacency[v])
                throw std::invalid_argument("rotation is not a permutation of the neighbours of " +
                                            std::to_string(v));
            g.rot_targets_.insert(g.rot_targets_.end(), rotation[v].begin(), rotation[v].end());
        }
    }

    g.layer_ = g.distances_from(root);
    for (VertexId v = 0; v < n; ++v) {
        if (g.layer_[v] < 0) throw std::invalid_argument("graph is not connected");
        g.max_layer_ = std::max(g.max_layer_, g.layer_[v]);
    }
    return g;
}

bool Graph::adjacent(VertexId u, VertexId v) const {
    auto row = neighbors(u);
    return std::binary_search(row.begin(), row.end(), v);
}

int Graph::nominal_degree() const {
    return family_.kind == FamilyKind::Explicit ? max_degree_ : family_.d;
}

int Graph::min_interior_degree() const {
    int best = std::numeric_limits<int>::max();
    for (VertexId v = 0; v < num_vertices(); ++v)
        if (is_interior(v)) best = std::min(best, degree(v));
    return best == std::numeric_limits<int>::max() ? 0 : best;
}

std::vector<std::vector<VertexId>> Graph::layers() const {
    std::vector<std::vector<VertexId>> out(static_cast<std::size_t>(max_layer_) + 1);
    for (VertexId v = 0; v < num_vertices(); ++v) out[layer_[v]].push_back(v);
    return out;
}

std::vector<int> Graph::distances_from(VertexId source, int max_distance) const {
    std::vector<int> dist(num_vertices(), -1);
    std::vector<VertexId> frontier{source};
    dist[source] = 0;
    for (std::size_t head = 0; head < frontier.size(); ++head) {
        const VertexId v = frontier[head];
        if (max_distance >= 0 && dist[v] >= max_distance) continue;
        for (VertexId w : neighbors(v)) {
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                frontier.push_back(w);
            }
        }
    }
    return dist;
}

Graph build_tree(int d, int depth) {
    if (d < 2) throw std::invalid_argument("tree degree must be at least 2");
    if (depth < 0) throw std::invalid_argument("tree depth must be nonnegative");
    std::vector<std::vector<VertexId>> adj(1);
    std::vector<VertexId> frontier{0};
    for (int k = 0; k < depth; ++k) {
        std::vector<VertexId> next;
        for (VertexId v : frontier) {
            const int children = (k == 0) ? d : d - 1;
            for (int c = 0; c < children; ++c) {
                const auto w = static_cast<VertexId>(adj.size());
                adj.emplace_back();
                adj[v].push_back(w);
                adj[w].push_back(v);
                next.push_back(w);
            }
        }
        frontier = std::move(next);
    }
    return Graph::from_adjacency(std::move(adj), 0, depth, Family::tree(d));
}

namespace {

// Disc-shaped patch of the {f, d} tiling grown by closing the oldest open
// vertex. Open vertices lie on the outer boundary; their rotation is a
// linear ccw list whose front is the next boundary vertex and whose back is
// the previous one, with the outer face in the wedge from back to front.
class TilingPatch {
public:
    TilingPatch(int d, int f) : d_(d), f_(f) {
        for (int i = 0; i < f; ++i) {
            rot_.push_back({(i + 1) % f, (i + f - 1) % f});
            closed_.push_back(0);
        }
    }

    int size() const { return static_cast<int>(rot_.size()); }
    bool closed(VertexId v) const { return closed_[v] != 0; }
    const std::vector<VertexId>& rot(VertexId v) const { return rot_[v]; }

    // Closes every open vertex with id <= last, oldest first.
    void close_through(VertexId last) {
        for (; cursor_ <= last && cursor_ < size(); ++cursor_)
            while (!closed(cursor_)) add_face_at(cursor_);
    }

    std::vector<int> distances() const {
        std::vector<int> dist(rot_.size(), -1);
        std::vector<VertexId> queue{0};
        dist[0] = 0;
        for (std::size_t h = 0; h < queue.size(); ++h)
            for (VertexId w : rot_[queue[h]])
                if (dist[w] < 0) {
                    dist[w] = dist[queue[h]] + 1;
                    queue.push_back(w);
                }
        return dist;
    }

private:
    int deg(VertexId v) const { return static_cast<int>(rot_[v].size()); }
    VertexId next(VertexId v) const { return rot_[v].front(); }
    VertexId prev(VertexId v) const { return rot_[v].back(); }

    // Adds the face lying outside the boundary edge leaving v (or, when v
    // already has full degree, the face closing v's gap).
    void add_face_at(VertexId v) {
        VertexId first = v;
        if (deg(v) == d_) {
            first = prev(v);
            while (deg(first) == d_) {
                first = prev(first);
                if (first == v) throw std::logic_error("tiling patch boundary fully saturated");
            }
        }
        VertexId last = next(v);
        while (deg(last) == d_) {
            last = next(last);
            if (last == v) throw std::logic_error("tiling patch boundary fully saturated");
        }
        std::vector<VertexId> path{first};
        for (VertexId u = first; u != last;) {
            u = next(u);
            path.push_back(u);
            if (static_cast<int>(path.size()) > f_)
                throw std::logic_error("tiling face overflow while growing patch");
        }
        const int fresh = f_ - static_cast<int>(path.size());
        if (fresh < 0) throw std::logic_error("tiling face overflow while growing patch");
        for (std::size_t i = 1; i + 1 < path.size(); ++i) closed_[path[i]] = 1;

        if (fresh == 0) {
            if (std::find(rot_[first].begin(), rot_[first].end(), last) != rot_[first].end())
                throw std::logic_error("tiling patch would create a multi-edge");
            rot_[first].insert(rot_[first].begin(), last);
            rot_[last].push_back(first);
            return;
        }
        const auto base = static_cast<VertexId>(rot_.size());
        // New chain last - x_1 - ... - x_fresh - first, boundary order reversed.
        for (int i = 1; i <= fresh; ++i) {
            const VertexId nxt = (i == 1) ? last : base + i - 2;
            const VertexId prv = (i == fresh) ? first : base + i;
            rot_.push_back({nxt, prv});
            closed_.push_back(0);
        }
        rot_[first].insert(rot_[first].begin(), base + fresh - 1);
        rot_[last].push_back(base);
    }

    int d_;
    int f_;
    std::vector<std::vector<VertexId>> rot_;
    std::vector<char> closed_;
    VertexId cursor_ = 0;
};

}  // namespace

Graph build_hyperbolic(int d, int f, int radius) {
    if (d < 3 || f < 3 || (d - 2) * (f - 2) <= 4)
        throw std::domain_error("H(d,f) requires d,f >= 3 and (d-2)(f-2) > 4");
    if (radius < 0) throw std::invalid_argument("radius must be nonnegative");

    TilingPatch patch(d, f);
    std::vector<int> dist;
    for (;;) {
        dist = patch.distances();
        VertexId last_needed = -1;
        for (VertexId v = 0; v < patch.size(); ++v)
            if (dist[v] >= 0 && dist[v] <= radius - 1 && !patch.closed(v)) last_needed = v;
        if (last_needed < 0) break;
        patch.close_through(last_needed);
    }

    // Relabel the ball of radius `radius` by (distance, creation order).
    std::vector<VertexId> members;
    for (VertexId v = 0; v < patch.size(); ++v)
        if (dist[v] >= 0 && dist[v] <= radius) members.push_back(v);
    std::stable_sort(members.begin(), members.end(),
                     [&](VertexId a, VertexId b) { return dist[a] < dist[b]; });
    std::vector<VertexId> relabel(patch.size(), -1);
    for (std::size_t i = 0; i < members.size(); ++i) relabel[members[i]] = static_cast<VertexId>(i);

    std::vector<std::vector<VertexId>> adj(members.size()), rot(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
        for (VertexId w : patch.rot(members[i]))
            if (relabel[w] >= 0) rot[i].push_back(relabel[w]);
        auto smallest = std::min_element(rot[i].begin(), rot[i].end());
        std::rotate(rot[i].begin(), smallest, rot[i].end());
        adj[i] = rot[i];
    }
    return Graph::from_adjacency(std::move(adj), 0, radius, Family::hyperbolic(d, f),
                                 std::move(rot));
}

std::vector<std::vector<VertexId>> interior_faces(const Graph& g) {
    std::vector<std::vector<VertexId>> faces;
    if (!g.has_rotation()) return faces;
    const auto offsets = g.offsets();
    std::vector<char> seen(g.targets().size(), 0);
    auto position = [&](VertexId v, VertexId u) {
        auto r = g.rotation(v);
        return static_cast<int>(std::find(r.begin(), r.end(), u) - r.begin());
    };
    const int cap = 4 * std::max(3, g.family().f) + 8;
    for (VertexId u0 = 0; u0 < g.num_vertices(); ++u0) {
        if (!g.is_interior(u0)) continue;
        const int deg0 = g.degree(u0);
        for (int i0 = 0; i0 < deg0; ++i0) {
            if (seen[offsets[u0] + i0]) continue;
            std::vector<VertexId> face;
            VertexId u = u0;
            int i = i0;
            bool interior = true;
            do {
                if (!g.is_interior(u)) {
                    interior = false;
                    break;
                }
                seen[offsets[u] + i] = 1;
                face.push_back(u);
                const VertexId v = g.rotation(u)[i];
                const int k = position(v, u);
                const int dv = g.degree(v);
                u = v;
                i = (k - 1 + dv) % dv;
                if (static_cast<int>(face.size()) > cap) {
                    interior = false;
                    break;
                }
            } while (!(u == u0 && i == i0));
            if (interior) faces.push_back(std::move(face));
        }
    }
    return faces;
}

AuditReport audit_graph(const Graph& g) {
    AuditReport rep;
    const int d = g.family().d;
    auto fail = [&](std::string msg) {
        rep.ok = false;
        if (rep.failures.size() < 32) rep.failures.push_back(std::move(msg));
    };
    const auto recomputed = g.distances_from(g.root());
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        if (recomputed[v] != g.layer(v)) fail("layer mismatch at vertex " + std::to_string(v));
        if (!g.is_interior(v)) continue;
        ++rep.checked_vertices;
        if (g.family().kind != FamilyKind::Explicit && g.degree(v) != d)
            fail("interior vertex " + std::to_string(v) + " has degree " +
                 std::to_string(g.degree(v)) + ", expected " + std::to_string(d));
    }
    if (g.family().kind == FamilyKind::Tree &&
        g.num_edges() != static_cast<std::int64_t>(g.num_vertices()) - 1)
        fail("tree has a cycle");
    if (g.has_rotation() && g.family().kind == FamilyKind::Hyperbolic) {
        for (const auto& face : interior_faces(g)) {
            ++rep.checked_faces;
            if (static_cast<int>(face.size()) != g.family().f)
                fail("interior face of length " + std::to_string(face.size()) + " at vertex " +
                     std::to_string(face.front()));
        }
    }
    return rep;
}

bool is_bipartite(const Graph& g) {
    std::vector<int> color(g.num_vertices(), -1);
    for (VertexId s = 0; s < g.num_vertices(); ++s) {
        if (color[s] >= 0) continue;
        color[s] = 0;
        std::vector<VertexId> queue{s};
        for (std::size_t h = 0; h < queue.size(); ++h) {
            const VertexId v = queue[h];
            for (VertexId w : g.neighbors(v)) {
                if (color[w] < 0) {
                    color[w] = 1 - color[v];
                    queue.push_back(w);
                } else if (color[w] == color[v]) {
                    return false;
                }
            }
        }
    }
    return true;
}

int compute_jbar(const Graph& g) {
    int best = std::numeric_limits<int>::max();
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        if (g.layer(v) > g.radius() - 1) continue;
        int forward = 0;
        for (VertexId w : g.neighbors(v)) forward += (g.layer(w) == g.layer(v) + 1);
        best = std::min(best, forward);
    }
    return best == std::numeric_limits<int>::max() ? 0 : best;
}

namespace {

void write_list(std::ostream& out, std::span<const VertexId> ids) {
    if (ids.empty()) {
        out << '-';
        return;
    }
    for (std::size_t i = 0; i < ids.size(); ++i) out << (i ? "," : "") << ids[i];
}

std::vector<VertexId> parse_list(const std::string& tok) {
    std::vector<VertexId> ids;
    if (tok == "-") return ids;
    std::stringstream ss(tok);
    std::string part;
    while (std::getline(ss, part, ',')) ids.push_back(static_cast<VertexId>(std::stol(part)));
    return ids;
}

}  // namespace

void write_graph(std::ostream& out, const Graph& g) {
    out << g.family().name() << ' ' << g.family().d << ' ' << g.family().f << ' ' << g.radius()
        << '\n';
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        out << v << ' ' << g.layer(v) << ' ';
        write_list(out, g.neighbors(v));
        if (g.has_rotation()) {
            out << ' ';
            write_list(out, g.rotation(v));
        }
        out << '\n';
    }
}

Graph read_graph(std::istream& in) {
    std::string kind;
    int d = 0, f = 0, radius = 0;
    if (!(in >> kind >> d >> f >> radius)) throw std::runtime_error("malformed graph header");
    Family family;
    if (kind == "hyperbolic")
        family = Family::hyperbolic(d, f);
    else if (kind == "tree")
        family = Family::tree(d);
    else if (kind == "explicit")
        family = Family::explicit_graph();
    else
        throw std::runtime_error("unknown graph family '" + kind + "'");

    std::vector<std::vector<VertexId>> adj, rot;
    VertexId root = -1;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        long id = 0;
        int layer = 0;
        std::string nbrs, rotation;
        if (!(ls >> id >> layer >> nbrs)) throw std::runtime_error("malformed vertex line: " + line);
        if (id != static_cast<long>(adj.size()))
            throw std::runtime_error("vertex ids must be dense and ordered");
        adj.push_back(parse_list(nbrs));
        if (ls >> rotation) rot.push_back(parse_list(rotation));
        if (layer == 0) root = static_cast<VertexId>(id);
    }
    if (root < 0) throw std::runtime_error("graph file has no layer-0 vertex");
    if (!rot.empty() && rot.size() != adj.size())
        throw std::runtime_error("rotation given for some vertices only");
    return Graph::from_adjacency(std::move(adj), root, radius, family, std::move(rot));
}

}  // namespace kcm
