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

#include "kcm/expansion.hpp"

#include <omp.h>

#include <algorithm>
#include <stdexcept>

namespace kcm {

namespace {

void require_hyperbolic(int d, int f) {
    if (d < 3 || f < 3 || (d - 2) * (f - 2) <= 4)
        throw std::domain_error("H(d,f) requires d,f >= 3 and (d-2)(f-2) > 4");
}

// ESU enumeration of connected vertex sets; every set is visited once, from
// its smallest vertex.
class SubsetWalker {
public:
    SubsetWalker(const Graph& g, int max_size)
        : g_(g), k_(max_size), in_sub_(g.num_vertices(), 0), near_(g.num_vertices(), 0) {}

    template <class Visit>
    void run_from(VertexId v, Visit&& visit) {
        if (!g_.is_interior(v)) return;
        root_ = v;
        std::vector<VertexId> ext;
        for (VertexId u : g_.neighbors(v))
            if (u > v && g_.is_interior(u)) ext.push_back(u);
        add(v);
        extend(ext, 1, g_.degree(v), visit);
        remove(v);
    }

private:
    void add(VertexId w) {
        in_sub_[w] = 1;
        ++near_[w];
        for (VertexId u : g_.neighbors(w)) ++near_[u];
    }
    void remove(VertexId w) {
        in_sub_[w] = 0;
        --near_[w];
        for (VertexId u : g_.neighbors(w)) --near_[u];
    }

    template <class Visit>
    void extend(std::vector<VertexId> ext, int size, std::int64_t boundary, Visit& visit) {
        visit(size, boundary);
        if (size == k_) return;
        while (!ext.empty()) {
            const VertexId w = ext.back();
            ext.pop_back();
            std::vector<VertexId> next = ext;
            int into = 0;
            for (VertexId u : g_.neighbors(w)) {
                into += in_sub_[u];
                if (near_[u] == 0 && u > root_ && g_.is_interior(u)) next.push_back(u);
            }
            add(w);
            extend(std::move(next), size + 1, boundary + g_.degree(w) - 2 * into, visit);
            remove(w);
        }
    }

    const Graph& g_;
    int k_;
    VertexId root_ = 0;
    std::vector<char> in_sub_;
    std::vector<int> near_;
};

struct Best {
    std::int64_t boundary = 0;
    std::int64_t size = 0;
    void offer(std::int64_t b, std::int64_t s) {
        if (size == 0 || b * size < boundary * s) {
            boundary = b;
            size = s;
        }
    }
};

std::optional<Rational> to_ratio(const Best& best) {
    if (best.size == 0) return std::nullopt;
    return Rational(best.boundary, best.size);
}

}  // namespace

Surd phi_e_exact(int d, int f) {
    require_hyperbolic(d, f);
    const std::int64_t a = d - 2, b = f - 2;
    return Surd::sqrt(Rational(a * (a * b - 4), b));
}

double phi_e_formula(int d, int f) { return phi_e_exact(d, f).value(); }

Surd alpha_lower_exact(int d, bool triangle_free) {
    const int e = triangle_free ? d + 2 : d;
    if (e < 6)
        throw std::domain_error("alpha bound needs d >= 6 (d >= 4 for triangle-free graphs)");
    return Surd(Rational(e - 6, 2), Rational(1, 2), static_cast<std::int64_t>(e - 2) * (e - 6));
}

double alpha_lower(int d, bool triangle_free) { return alpha_lower_exact(d, triangle_free).value(); }

std::optional<Rational> brute_force_boundary_ratio_serial(const Graph& g, int max_size) {
    if (max_size < 1) throw std::invalid_argument("max_size must be at least 1");
    Best best;
    SubsetWalker walker(g, max_size);
    for (VertexId v = 0; v < g.num_vertices(); ++v)
        walker.run_from(v, [&](int size, std::int64_t b) { best.offer(b, size); });
    return to_ratio(best);
}

std::optional<Rational> brute_force_boundary_ratio(const Graph& g, int max_size) {
    if (max_size < 1) throw std::invalid_argument("max_size must be at least 1");
    Best global;
#pragma omp parallel
    {
        Best local;
        SubsetWalker walker(g, max_size);
#pragma omp for schedule(dynamic, 16) nowait
        for (VertexId v = 0; v < g.num_vertices(); ++v)
            walker.run_from(v, [&](int size, std::int64_t b) { local.offer(b, size); });
#pragma omp critical(kcm_boundary_ratio)
        if (local.size > 0) global.offer(local.boundary, local.size);
    }
    return to_ratio(global);
}

std::int64_t count_connected_subsets(const Graph& g, int max_size) {
    std::int64_t total = 0;
    SubsetWalker walker(g, max_size);
    for (VertexId v = 0; v < g.num_vertices(); ++v)
        walker.run_from(v, [&](int, std::int64_t) { ++total; });
    return total;
}

ExpansionReport expansion_report(const Graph& g, int max_size) {
    ExpansionReport rep;
    const Family& fam = g.family();
    if (fam.kind == FamilyKind::Hyperbolic) {
        rep.phi_e = phi_e_exact(fam.d, fam.f);
        const bool triangle_free = fam.f >= 4;
        if (fam.d >= (triangle_free ? 5 : 7)) rep.alpha_lower = alpha_lower_exact(fam.d, triangle_free);
    } else if (fam.kind == FamilyKind::Tree) {
        rep.phi_e = Surd(fam.d - 2);
        rep.alpha_lower = Surd(fam.d - 2);
    }
    rep.brute_min_ratio = brute_force_boundary_ratio(g, max_size);
    rep.jbar_witness = compute_jbar(g);
    rep.searched_max_size = max_size;
    return rep;
}

}  // namespace kcm
