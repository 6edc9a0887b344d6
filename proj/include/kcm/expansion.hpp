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
#include "kcm/surd.hpp"

#include <optional>

namespace kcm {

/// (d-2) * sqrt(1 - 4/((d-2)(f-2))). Throws std::domain_error unless (d-2)(f-2) > 4.
double phi_e_formula(int d, int f);
Surd phi_e_exact(int d, int f);

/// alpha_d = (d - 6 + sqrt((d-2)(d-6))) / 2, evaluated at d+2 when triangle_free.
/// The vertex-expansion bound it encodes needs minimum degree >= 7 (>= 5 when
/// triangle-free); the formula itself is accepted down to where it is real.
double alpha_lower(int d, bool triangle_free);
Surd alpha_lower_exact(int d, bool triangle_free);

/// Exact min of |dK|/|K| over connected K inside the interior with |K| <= max_size.
/// std::nullopt when no admissible K exists.
std::optional<Rational> brute_force_boundary_ratio(const Graph& g, int max_size);
/// Single-threaded reference with identical enumeration order.
std::optional<Rational> brute_force_boundary_ratio_serial(const Graph& g, int max_size);

/// Number of connected interior subsets with size <= max_size (enumeration audit).
std::int64_t count_connected_subsets(const Graph& g, int max_size);

struct ExpansionReport {
    std::optional<Surd> phi_e;        ///< closed form, when the family has one
    std::optional<Surd> alpha_lower;  ///< certified lower bound on the vertex constant
    std::optional<Rational> brute_min_ratio;
    int jbar_witness = 0;
    int searched_max_size = 0;
};

ExpansionReport expansion_report(const Graph& g, int max_size);

}  // namespace kcm
