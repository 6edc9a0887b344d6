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

#include "kcm/classify.hpp"

#include "kcm/expansion.hpp"
#include "kcm/graph.hpp"
#include "kcm/textio.hpp"

#include <ostream>
#include <stdexcept>

namespace kcm {

std::string to_string(OmegaItem item) {
    switch (item) {
    case OmegaItem::A:
        return "a";
    case OmegaItem::B:
        return "b";
    case OmegaItem::None:
        break;
    }
    return "none";
}

std::string to_string(ChiItem item) {
    switch (item) {
    case ChiItem::I:
        return "i";
    case ChiItem::II:
        return "ii";
    case ChiItem::III:
        return "iii";
    case ChiItem::IV:
        return "iv";
    case ChiItem::None:
        break;
    }
    return "none";
}

namespace {

bool holds(OmegaItem item, int j, const GoodnessInputs& in) {
    switch (item) {
    case OmegaItem::A:
        return Surd(j) < in.phi_e + Surd(1);
    case OmegaItem::B:
        return j <= in.jbar;
    case OmegaItem::None:
        break;
    }
    return false;
}

bool holds(ChiItem item, int j, const GoodnessInputs& in) {
    switch (item) {
    case ChiItem::I:
        return Surd(2 * j) < 3 * in.phi_e - Surd(in.max_degree - 2);
    case ChiItem::II:
        return in.bipartite && Surd(j) < in.phi_e + Surd(1);
    case ChiItem::III:
        return in.phi_v_lower && Surd(j) < *in.phi_v_lower;
    case ChiItem::IV:
        return in.regular_tree && in.d >= 2 && j < in.d;
    case ChiItem::None:
        break;
    }
    return false;
}

}  // namespace

GoodnessReport classify(int j, const GoodnessInputs& inputs) {
    if (j < 1 || j > inputs.min_degree)
        throw std::invalid_argument("threshold j=" + std::to_string(j) + " outside [1, " +
                                    std::to_string(inputs.min_degree) + "]");
    GoodnessReport rep;
    rep.j = j;
    rep.inputs = inputs;
    for (OmegaItem item : {OmegaItem::A, OmegaItem::B})
        if (holds(item, j, inputs)) rep.omega_items.push_back(item);
    for (ChiItem item : {ChiItem::I, ChiItem::II, ChiItem::III, ChiItem::IV})
        if (holds(item, j, inputs)) rep.chi_items.push_back(item);
    if (!rep.omega_items.empty()) rep.omega_item = rep.omega_items.front();
    if (!rep.chi_items.empty()) rep.chi_item = rep.chi_items.front();
    rep.chi_via_lower_bound = rep.chi_item == ChiItem::III;
    return rep;
}

bool recheck(const GoodnessReport& report) {
    for (OmegaItem item : report.omega_items)
        if (!holds(item, report.j, report.inputs)) return false;
    for (ChiItem item : report.chi_items)
        if (!holds(item, report.j, report.inputs)) return false;
    return true;
}

GoodnessInputs tree_inputs(int d) {
    if (d < 2) throw std::invalid_argument("tree degree must be at least 2");
    GoodnessInputs in;
    in.phi_e = Surd(d - 2);
    in.phi_v_lower = Surd(d - 2);
    in.max_degree = in.min_degree = d;
    in.jbar = d - 1;
    in.bipartite = true;
    in.regular_tree = true;
    in.d = d;
    return in;
}

GoodnessInputs hyperbolic_inputs(int d, int f, int jbar_radius) {
    GoodnessInputs in;
    in.phi_e = phi_e_exact(d, f);
    const bool triangle_free = f >= 4;
    if (d >= (triangle_free ? 5 : 7)) in.phi_v_lower = alpha_lower_exact(d, triangle_free);
    in.max_degree = in.min_degree = d;
    in.bipartite = f % 2 == 0;
    in.d = d;
    in.jbar = compute_jbar(build_hyperbolic(d, f, jbar_radius));
    return in;
}

bool in_nontrivial_range(int d, int f, int j) {
    return j >= 1 && j <= (f == 3 ? d - 3 : d - 2);
}

std::vector<CaseRow> case_table_from_inputs(int d, int f, const GoodnessInputs& inputs) {
    std::vector<CaseRow> rows;
    auto make = [&](int j, bool majority) {
        CaseRow row;
        row.d = d;
        row.f = f;
        row.j = j;
        row.majority = majority;
        row.in_range = in_nontrivial_range(d, f, j);
        row.report = classify(j, inputs);
        std::string note;
        if (!row.in_range) note = "finite zero clusters persist";
        if (row.in_range && !row.report.omega_good()) note = "omega open";
        if (!row.report.chi_good()) note += std::string(note.empty() ? "" : "; ") + "chi open";
        row.note = note;
        return row;
    };
    for (int j = 1; j <= d; ++j) rows.push_back(make(j, false));
    rows.push_back(make(d / 2 + 1, true));
    return rows;
}

std::vector<CaseRow> hyperbolic_case_table(int d, int f, int jbar_radius) {
    return case_table_from_inputs(d, f, hyperbolic_inputs(d, f, jbar_radius));
}

void write_case_table_csv(std::ostream& out, const std::vector<CaseRow>& rows, bool header) {
    if (header)
        out << "d,f,j,row,in_range_3_2,omega_item,chi_item,omega_all,chi_all,phi_e,phi_v_lower,"
               "jbar,bipartite,note\n";
    for (const auto& row : rows) {
        const auto& rep = row.report;
        std::string omega_all, chi_all;
        for (auto item : rep.omega_items) omega_all += (omega_all.empty() ? "" : "|") + to_string(item);
        for (auto item : rep.chi_items) chi_all += (chi_all.empty() ? "" : "|") + to_string(item);
        out << row.d << ',' << row.f << ',' << row.j << ',' << (row.majority ? "majority" : "threshold")
            << ',' << (row.in_range ? 1 : 0) << ',' << to_string(rep.omega_item) << ','
            << to_string(rep.chi_item) << (rep.chi_via_lower_bound ? " (lower bound)" : "") << ','
            << (omega_all.empty() ? "none" : omega_all) << ',' << (chi_all.empty() ? "none" : chi_all)
            << ',' << fixed(rep.inputs.phi_e.value(), 6) << ','
            << (rep.inputs.phi_v_lower ? fixed(rep.inputs.phi_v_lower->value(), 6) : std::string("na"))
            << ',' << rep.inputs.jbar << ',' << (rep.inputs.bipartite ? 1 : 0) << ',' << row.note
            << '\n';
    }
}

}  // namespace kcm
