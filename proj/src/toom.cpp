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

#include "kcm/toom.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

namespace kcm {

namespace {

std::string str(SpaceTimePoint p) {
    return "(" + std::to_string(p.x) + "," + std::to_string(p.t) + ")";
}

bool sorted_contains(std::span<const VertexId> v, VertexId x) {
    return std::binary_search(v.begin(), v.end(), x);
}

}  // namespace

bool TypedDependenceGraph::has_edge(SpaceTimePoint from, SpaceTimePoint to, int s) const {
    if (s < 1 || s > sigma || !is_bullet(from) || to.t != from.t - 1) return false;
    if (!has_charges(from.x)) return false;
    return sorted_contains(charge(from.x, s), to.x);
}

TypedDependenceGraph build_dependence_bp(const Graph& g, int j, const RandomField& field, double eps,
                                         int horizon) {
    const int witness = compute_jbar(g);
    if (j < 1 || j > witness)
        throw std::invalid_argument("j = " + std::to_string(j) + " outside [1, " + std::to_string(witness) +
                                    "] for this truncation");
    TypedDependenceGraph dep{&g, 2, Charges(g.num_vertices()), field, eps, horizon};
    for (VertexId x = 0; x < g.num_vertices(); ++x) {
        if (!g.is_interior(x)) continue;
        std::vector<VertexId> forward;
        for (VertexId y : g.neighbors(x))
            if (g.layer(y) == g.layer(x) + 1 && static_cast<int>(forward.size()) < j) forward.push_back(y);
        dep.charges[x] = {{x}, forward};
    }
    return dep;
}

TreeOrientation orient_tree(const Graph& tree) {
    const int n = tree.num_vertices();
    TreeOrientation o{tree.nominal_degree(), std::vector<VertexId>(n, -1), std::vector<std::vector<VertexId>>(n)};
    std::vector<bool> on_ray(n, false);
    for (VertexId v = tree.root();;) {
        on_ray[v] = true;
        VertexId next = -1;
        for (VertexId w : tree.neighbors(v))
            if (tree.layer(w) == tree.layer(v) + 1) {
                next = w;
                break;
            }
        o.out[v] = next;
        if (next < 0) break;
        v = next;
    }
    for (VertexId v = 0; v < n; ++v) {
        if (on_ray[v]) continue;
        for (VertexId w : tree.neighbors(v))
            if (tree.layer(w) == tree.layer(v) - 1) o.out[v] = w;
    }
    for (VertexId v = 0; v < n; ++v)
        if (o.out[v] >= 0) o.in[o.out[v]].push_back(v);
    for (VertexId v = 0; v < n; ++v) {
        std::sort(o.in[v].begin(), o.in[v].end());
        if (tree.is_interior(v) && (static_cast<int>(o.in[v].size()) != o.d - 1 || o.out[v] < 0))
            throw std::logic_error("orientation: vertex " + std::to_string(v) + " has in-degree " +
                                   std::to_string(o.in[v].size()));
    }
    return o;
}

TypedDependenceGraph build_dependence_tree(const Graph& tree, const TreeOrientation& orient,
                                           const RandomField& field, double eps, int horizon) {
    const int d = orient.d;
    TypedDependenceGraph dep{&tree, d, Charges(tree.num_vertices()), field, eps, horizon};
    for (VertexId x = 0; x < tree.num_vertices(); ++x) {
        if (!tree.is_interior(x)) continue;
        std::vector<VertexId> y(orient.in[x]);
        y.push_back(orient.out[x]);
        auto& ch = dep.charges[x];
        ch.resize(d);
        for (int s = 0; s < d; ++s) {
            for (int i = 0; i < d; ++i)
                if (i != s) ch[s].push_back(y[i]);
            std::sort(ch[s].begin(), ch[s].end());
        }
    }
    return dep;
}

PolarMap polar_bp(const Graph& g) {
    PolarMap L{PolarConstruction::BpDistance, 2, std::vector<std::int64_t>(2 * static_cast<std::size_t>(g.num_vertices()))};
    for (VertexId x = 0; x < g.num_vertices(); ++x) {
        L.values[2 * static_cast<std::size_t>(x)] = -g.layer(x);
        L.values[2 * static_cast<std::size_t>(x) + 1] = g.layer(x);
    }
    return L;
}

namespace {

// Index i (1-based) of y among the incoming neighbours of x, or 0.
int in_index(const TreeOrientation& o, VertexId x, VertexId y) {
    const auto& in = o.in[x];
    auto it = std::lower_bound(in.begin(), in.end(), y);
    return it != in.end() && *it == y ? static_cast<int>(it - in.begin()) + 1 : 0;
}

}  // namespace

PolarMap polar_tree(const Graph& tree, const TreeOrientation& orient, VertexId basepoint) {
    const int d = orient.d;
    const int n = tree.num_vertices();
    PolarMap L{PolarConstruction::TreeRecursive, d, std::vector<std::int64_t>(static_cast<std::size_t>(n) * d, 0)};
    std::vector<bool> done(n, false);
    std::vector<VertexId> queue{basepoint};
    done[basepoint] = true;
    auto row = [&](VertexId v) { return L.values.begin() + static_cast<std::ptrdiff_t>(v) * d; };
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const VertexId a = queue[head];
        for (VertexId b : tree.neighbors(a)) {
            if (done[b]) continue;
            std::copy(row(a), row(a) + d, row(b));
            if (orient.out[b] == a) {
                // b = y_i^a
                const int i = in_index(orient, a, b);
                row(b)[i - 1] -= 1;
                row(b)[d - 1] += 1;
            } else if (orient.out[a] == b) {
                // a = y_i^b
                const int i = in_index(orient, b, a);
                row(b)[i - 1] += 1;
                row(b)[d - 1] -= 1;
            } else {
                throw std::logic_error("unoriented edge " + std::to_string(a) + "-" + std::to_string(b));
            }
            done[b] = true;
            queue.push_back(b);
        }
    }
    const auto audit = audit_polar(L, tree, &orient);
    if (!audit.ok) throw std::logic_error("polar map inconsistent: " + audit.failures.front());
    return L;
}

PolarAudit audit_polar(const PolarMap& L, const Graph& g, const TreeOrientation* orient) {
    PolarAudit rep;
    auto fail = [&](std::string msg) {
        rep.ok = false;
        if (rep.failures.size() < 20) rep.failures.push_back(std::move(msg));
    };
    const int d = L.sigma;
    for (VertexId x = 0; x < g.num_vertices(); ++x) {
        std::int64_t sum = 0;
        for (auto v : L.at(x)) sum += v;
        if (sum != 0) fail("coordinates of " + std::to_string(x) + " sum to " + std::to_string(sum));
        if (!orient) continue;
        const VertexId y = orient->out[x];
        if (y >= 0 && L.coord(y, d) - L.coord(x, d) != -1)
            fail("L_d(y_d) - L_d(x) != -1 at " + std::to_string(x));
        for (std::size_t i = 0; i < orient->in[x].size(); ++i) {
            const VertexId yi = orient->in[x][i];
            for (int s = 1; s <= d; ++s) {
                const std::int64_t want = (s == static_cast<int>(i) + 1 ? -1 : 0) + (s == d ? 1 : 0);
                if (L.coord(yi, s) - L.coord(x, s) != want)
                    fail("recurrence fails on edge " + std::to_string(yi) + "->" + std::to_string(x));
            }
        }
    }
    return rep;
}

EdgeSpeeds edge_speeds(const PolarMap& L, const Charges& charges) {
    EdgeSpeeds out;
    const int sigma = L.sigma;
    for (VertexId x = 0; x < static_cast<VertexId>(charges.size()); ++x) {
        const auto& ch = charges[x];
        if (ch.empty()) continue;
        std::vector<std::int64_t> eps(sigma), reach(sigma);
        for (int s = 1; s <= sigma; ++s) {
            std::int64_t sup = std::numeric_limits<std::int64_t>::min();
            std::int64_t all_min = std::numeric_limits<std::int64_t>::max();
            for (const auto& a : ch) {
                std::int64_t inf = std::numeric_limits<std::int64_t>::max();
                for (VertexId y : a) inf = std::min(inf, L.coord(y, s) - L.coord(x, s));
                sup = std::max(sup, inf);
                all_min = std::min(all_min, inf);
            }
            eps[s - 1] = sup;
            reach[s - 1] = -all_min;
        }
        if (out.points_checked == 0) {
            out.eps = eps;
            out.reach = reach;
        } else if (eps != out.eps || reach != out.reach) {
            out.constant = false;
            if (out.deviations.size() < 20) out.deviations.push_back("vertex " + std::to_string(x));
        }
        ++out.points_checked;
    }
    return out;
}

std::int64_t contour_edge_bound(int d, int n_sinks) {
    if (n_sinks < 1) throw std::invalid_argument("need at least one sink");
    return 3LL * (d + 1) * (n_sinks - 1);
}

double contour_edge_bound(const EdgeSpeeds& speeds, int n_sinks) {
    std::int64_t se = 0, sr = 0;
    for (auto e : speeds.eps) se += e;
    for (auto r : speeds.reach) sr += r;
    if (se <= 0) throw std::domain_error("total edge speed is not positive");
    return 3.0 * (1.0 + static_cast<double>(sr) / static_cast<double>(se)) * (n_sinks - 1);
}

std::string to_string(CycleRole r) {
    switch (r) {
    case CycleRole::Source:
        return "source";
    case CycleRole::Sink:
        return "sink";
    case CycleRole::Pass1:
        return "pass1";
    case CycleRole::Pass2:
        return "pass2";
    }
    return "source";
}

CycleRole ToomCycle::role(int v) const {
    const bool out_fwd = forward[v];
    const bool in_fwd = forward[(v - 1 + n) % n];  // edge between v-1 and v is (v-1, v)
    if (out_fwd && !in_fwd) return CycleRole::Source;
    if (!out_fwd && in_fwd) return CycleRole::Sink;
    return out_fwd ? CycleRole::Pass1 : CycleRole::Pass2;
}

int ToomCycle::count(CycleRole r) const {
    int k = 0;
    for (int v = 0; v < n; ++v) k += role(v) == r;
    return k;
}

int ToomCycle::edges_of_kind(bool forward_kind) const {
    return static_cast<int>(std::count(forward.begin(), forward.end(), forward_kind));
}

std::vector<SpaceTimePoint> ToomCycle::sinks() const {
    std::vector<SpaceTimePoint> out;
    if (n == 1) return {psi[0]};
    for (int v = 0; v < n; ++v)
        if (role(v) == CycleRole::Sink) out.push_back(psi[v]);
    return out;
}

std::pair<int, int> ToomCycle::edge(int v) const {
    return forward[v] ? std::pair{v, v + 1} : std::pair{v + 1, v};
}

int ToomCycle::required_type(int v) const {
    const int tail = forward[v] ? v : (v + 1) % n;
    const bool source = role(tail) == CycleRole::Source && tail != 0;
    const int s = forward[v] ? 1 : 2;
    return source ? 3 - s : s;
}

ToomCycle singleton_cycle(SpaceTimePoint root) {
    return ToomCycle{1, {true}, {root, root}, {0}};
}

namespace {

// Conditions (1) and (2). Classes are ranked 1 < source < 2; the origin
// enters class 1 as index 0 and class 2 as index n.
std::optional<std::string> definition_violation(const ToomCycle& c) {
    struct Entry {
        int index;
        int rank;
    };
    std::map<SpaceTimePoint, std::vector<Entry>> by_point;
    for (int v = 0; v < c.n; ++v) {
        const auto r = c.role(v);
        if (v == 0) {
            by_point[c.psi[0]].push_back({0, 0});
            by_point[c.psi[0]].push_back({c.n, 2});
        } else if (r != CycleRole::Sink) {
            by_point[c.psi[v]].push_back({v, r == CycleRole::Pass1 ? 0 : (r == CycleRole::Source ? 1 : 2)});
        }
    }
    for (int v = 0; v < c.n; ++v) {
        if (v == 0 || c.role(v) != CycleRole::Sink) continue;
        for (int w = 0; w < c.n; ++w)
            if (w != v && c.psi[w] == c.psi[v])
                return "condition (1): sink " + std::to_string(v) + " shares its image " + str(c.psi[v]);
    }
    for (const auto& [p, es] : by_point)
        for (const auto& a : es)
            for (const auto& b : es)
                if (a.rank <= b.rank && a.index > b.index)
                    return "condition (2): " + std::to_string(a.index) + " and " + std::to_string(b.index) +
                           " share " + str(p);
    return std::nullopt;
}

}  // namespace

CycleReport certify_cycle(const ToomCycle& c, const PolarMap& L) {
    CycleReport rep;
    if (c.n < 1 || static_cast<int>(c.forward.size()) != c.n || static_cast<int>(c.psi.size()) != c.n + 1 ||
        static_cast<int>(c.edge_type.size()) != c.n) {
        rep.fail(&CycleReport::well_formed, "array sizes do not match n");
        return rep;
    }
    if (c.psi[0] != c.psi[c.n]) rep.fail(&CycleReport::well_formed, "psi_0 != psi_n");
    if (c.n == 1) return rep;
    if (c.role(0) != CycleRole::Source) rep.fail(&CycleReport::well_formed, "0 is not a source");
    if (!rep.well_formed) return rep;
    if (L.sigma != 2) throw std::invalid_argument("cycles need a two-type polar map");

    if (auto why = definition_violation(c)) rep.fail(&CycleReport::definition_ok, *why);

    for (int v = 0; v < c.n; ++v) {
        const auto [tail, head] = c.edge(v);
        const auto p = c.psi[tail], q = c.psi[head];
        const int type = c.edge_type[v];
        const std::string name = "edge " + std::to_string(tail) + "->" + std::to_string(head);
        if (type != c.required_type(v))
            rep.fail(&CycleReport::edges_consistent,
                     name + " claims type " + std::to_string(type) + ", role needs " + std::to_string(c.required_type(v)));
        if (q.t != p.t - 1) rep.fail(&CycleReport::edges_consistent, name + " does not step down in time");
        if ((type == 1) != (p.x == q.x)) rep.fail(&CycleReport::edges_consistent, name + " geometry contradicts its type");
        // Implied increments: type 1 keeps L, type 2 moves one layer out.
        const std::int64_t implied1 = type == 2 ? -1 : 0, implied2 = -implied1;
        if (L.coord(q.x, 1) - L.coord(p.x, 1) != implied1 || L.coord(q.x, 2) - L.coord(p.x, 2) != implied2)
            rep.fail(&CycleReport::edges_consistent, name + " polar increment contradicts its type");
        rep.zero_sum += c.forward[v] ? implied1 : implied2;
    }
    if (rep.zero_sum != 0) rep.fail(&CycleReport::zero_sum_ok, "zero sum is " + std::to_string(rep.zero_sum));

    const int sources = c.count(CycleRole::Source), sinks = c.count(CycleRole::Sink);
    const int e1 = c.edges_of_kind(true), e2 = c.edges_of_kind(false);
    if (sources != sinks)
        rep.fail(&CycleReport::counts_ok, std::to_string(sources) + " sources vs " + std::to_string(sinks) + " sinks");
    if (e1 != e2) rep.fail(&CycleReport::counts_ok, "|E1| = " + std::to_string(e1) + ", |E2| = " + std::to_string(e2));
    if (c.n != 4 * (sinks - 1))
        rep.fail(&CycleReport::counts_ok, "|E| = " + std::to_string(c.n) + " != 4(|V*| - 1)");
    return rep;
}

CycleReport check_presence(const ToomCycle& c, const TypedDependenceGraph& dep) {
    CycleReport rep;
    for (const auto& s : c.sinks())
        if (!dep.is_noise(s)) rep.fail(&CycleReport::ok, "sink " + str(s) + " is not a noise point");
    if (c.n == 1) return rep;
    for (int v = 0; v < c.n; ++v) {
        const auto [tail, head] = c.edge(v);
        if (c.edge_type[v] != c.required_type(v) || !dep.has_edge(c.psi[tail], c.psi[head], c.edge_type[v]))
            rep.fail(&CycleReport::ok, "edge " + std::to_string(tail) + "->" + std::to_string(head) + " absent");
    }
    return rep;
}

namespace {

class CycleSearcher {
public:
    CycleSearcher(const TypedDependenceGraph& dep, SpaceTimePoint root, int cap, bool count_mode)
        : dep_(dep), g_(*dep.graph), root_(root), cap_(cap), count_mode_(count_mode),
          dist_(g_.distances_from(root.x)) {}

    void run() {
        if (!dep_.is_bullet(root_) || !dep_.has_charges(root_.x)) return;
        psi_ = {root_};
        push({root_.x, root_.t - 1}, true, 1);
        if (affordable()) down_run();
        pop();
    }

    bool done() const { return found_.has_value() && !count_mode_; }
    std::optional<ToomCycle> found_;
    std::int64_t count_ = 0;
    std::int64_t nodes_ = 0;

private:
    void push(SpaceTimePoint p, bool fwd, int type) {
        psi_.push_back(p);
        fwd_.push_back(fwd);
        type_.push_back(type);
        ++nodes_;
    }
    void pop() {
        psi_.pop_back();
        fwd_.pop_back();
        type_.pop_back();
    }

    // Edges still needed to get back to the root.
    bool affordable() const {
        const auto p = psi_.back();
        const int d = dist_[p.x];
        if (d < 0) return false;
        return static_cast<int>(fwd_.size()) + std::max(root_.t - p.t, d) <= cap_;
    }

    // Straight run down from the head of a forward edge to the first noise point.
    void down_run() {
        int pushed = 0;
        for (;;) {
            const auto p = psi_.back();
            if (dep_.is_noise(p)) {
                climb();
                break;
            }
            if (!dep_.is_bullet(p)) break;
            push({p.x, p.t - 1}, true, 1);
            ++pushed;
            if (!affordable()) break;
        }
        for (; pushed > 0; --pushed) pop();
    }

    void climb() {
        if (done()) return;
        const auto p = psi_.back();
        // Close the cycle with the origin's oblique edge.
        if (p.t == root_.t - 1 && sorted_contains(dep_.charge(root_.x, 2), p.x)) {
            push(root_, false, 2);
            close();
            pop();
            if (done()) return;
        }
        // Straight step up into a new source, then its oblique edge down.
        const SpaceTimePoint u{p.x, p.t + 1};
        if (u.t <= root_.t && dep_.is_bullet(u) && dep_.has_charges(u.x)) {
            push(u, false, 1);
            if (affordable())
                for (VertexId y : dep_.charge(u.x, 2)) {
                    push({y, u.t - 1}, true, 2);
                    if (affordable()) down_run();
                    pop();
                    if (done()) break;
                }
            pop();
            if (done()) return;
        }
        // Oblique step up to a vertex whose charge contains p.x.
        for (VertexId x : g_.neighbors(p.x)) {
            if (g_.layer(x) != g_.layer(p.x) - 1 || !dep_.has_charges(x)) continue;
            if (!sorted_contains(dep_.charge(x, 2), p.x)) continue;
            const SpaceTimePoint q{x, p.t + 1};
            if (q.t > root_.t || !dep_.is_bullet(q)) continue;
            push(q, false, 2);
            if (affordable()) climb();
            pop();
            if (done()) return;
        }
    }

    void close() {
        const int n = static_cast<int>(fwd_.size());
        if (count_mode_ && n != cap_) return;
        ToomCycle c{n, fwd_, psi_, type_};
        if (definition_violation(c)) return;
        if (count_mode_)
            ++count_;
        else
            found_ = std::move(c);
    }

    const TypedDependenceGraph& dep_;
    const Graph& g_;
    SpaceTimePoint root_;
    int cap_;
    bool count_mode_;
    std::vector<int> dist_;
    std::vector<SpaceTimePoint> psi_;
    std::vector<bool> fwd_;
    std::vector<int> type_;
};

}  // namespace

CycleSearch find_present_cycle(const TypedDependenceGraph& dep, SpaceTimePoint root, int edge_cap) {
    if (dep.sigma != 2) throw std::invalid_argument("cycle search needs sigma = 2");
    CycleSearch out;
    out.cap = edge_cap;
    if (dep.is_noise(root)) {
        out.cycle = singleton_cycle(root);
        return out;
    }
    for (int cap = 4; cap <= edge_cap; cap += 4) {
        CycleSearcher s(dep, root, cap, false);
        s.run();
        out.nodes += s.nodes_;
        if (s.found_) {
            out.cycle = std::move(s.found_);
            break;
        }
    }
    return out;
}

std::int64_t count_present_cycles(const TypedDependenceGraph& dep, SpaceTimePoint root, int n_edges) {
    if (dep.sigma != 2) throw std::invalid_argument("cycle search needs sigma = 2");
    CycleSearcher s(dep, root, n_edges, true);
    s.run();
    return s.count_;
}

void write_cycle(std::ostream& out, const ToomCycle& c) {
    for (int v = 0; v < c.n; ++v) {
        const auto [tail, head] = c.edge(v);
        out << tail << ' ' << str(c.psi[tail]) << " -> " << head << ' ' << str(c.psi[head]) << ' '
            << (c.forward[v] ? "E1" : "E2") << " type " << c.edge_type[v] << '\n';
    }
}

}  // namespace kcm
