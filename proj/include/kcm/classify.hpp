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

#include "kcm/surd.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace kcm {

enum class OmegaItem { None, A, B };
enum class ChiItem { None, I, II, III, IV };

std::string to_string(OmegaItem item);
std::string to_string(ChiItem item);

/// Constants of the underlying infinite graph fed to the goodness checks.
struct GoodnessInputs {
    Surd phi_e;
    std::optional<Surd> phi_v_lower;  ///< certified lower bound, if one is known
    int max_degree = 0;
    int min_degree = 0;
    int jbar = 0;  ///< finite-radius witness
    bool bipartite = false;
    bool regular_tree = false;
    int d = 0;
};

struct GoodnessReport {
    int j = 0;
    OmegaItem omega_item = OmegaItem::None;  ///< first satisfied item in order a, b
    ChiItem chi_item = ChiItem::None;        ///< first satisfied item in order i..iv
    std::vector<OmegaItem> omega_items;      ///< every satisfied item
    std::vector<ChiItem> chi_items;
    bool chi_via_lower_bound = false;  ///< chi_item is (iii), decided on a lower bound
    GoodnessInputs inputs;

    bool omega_good() const { return omega_item != OmegaItem::None; }
    bool chi_good() const { return chi_item != ChiItem::None; }
};

/// Throws std::invalid_argument unless 1 <= j <= min_degree.
GoodnessReport classify(int j, const GoodnessInputs& inputs);

/// Re-evaluates every recorded item against the recorded inputs.
bool recheck(const GoodnessReport& report);

GoodnessInputs tree_inputs(int d);
/// Closed forms for H(d,f); jbar is the witness on a generated patch of `jbar_radius`.
GoodnessInputs hyperbolic_inputs(int d, int f, int jbar_radius = 4);

/// 1 <= j <= d-3 for f = 3, 1 <= j <= d-2 for f >= 4.
bool in_nontrivial_range(int d, int f, int j);

struct CaseRow {
    int d = 0;
    int f = 0;
    int j = 0;
    bool majority = false;  ///< row for the majority threshold floor(d/2)+1
    bool in_range = false;
    GoodnessReport report;
    std::string note;
};

/// One row per threshold j in [1, d], followed by the majority row.
std::vector<CaseRow> hyperbolic_case_table(int d, int f, int jbar_radius = 4);
std::vector<CaseRow> case_table_from_inputs(int d, int f, const GoodnessInputs& inputs);

void write_case_table_csv(std::ostream& out, const std::vector<CaseRow>& rows, bool header = true);

}  // namespace kcm
