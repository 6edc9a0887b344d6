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

#include <cmath>
#include <sstream>

#include "kcm/classify.hpp"
#include "kcm/surd.hpp"

using namespace kcm;

TEST_CASE("surd arithmetic") {
    const Surd s8 = Surd::sqrt(8);
    CHECK(s8.rational_part().numerator() == 0);
    CHECK(s8.surd_part().numerator() == 2);
    CHECK(s8.radicand() == 2);
    CHECK(s8.str() == "2*sqrt(2)");
    CHECK(Surd::sqrt(9).is_rational());
    CHECK(Surd::sqrt(Rational(1, 4)) == Surd(Rational(1, 2)));
    CHECK(Surd(3) > s8);
    CHECK(Surd(Rational(99, 70)) > Surd::sqrt(2));
    CHECK(Surd(Rational(140, 99)) < Surd::sqrt(2));
    CHECK((Surd::sqrt(2) * 3 - Surd::sqrt(18)).sign() == 0);
    CHECK((Surd(1) + Surd::sqrt(2)) * Rational(1, 2) < Surd(Rational(121, 100)));
    CHECK((Surd(1) + Surd::sqrt(2)) * Rational(1, 2) > Surd(Rational(120, 100)));
    CHECK_THROWS_AS(Surd::sqrt(2) + Surd::sqrt(3), std::domain_error);
    CHECK_THROWS_AS(Surd::sqrt(-1), std::domain_error);
    CHECK((Surd(5) - Surd::sqrt(24)).value() == doctest::Approx(5 - std::sqrt(24.0)));
}

TEST_CASE("goodness by family") {
    const auto t = tree_inputs(5);
    CHECK(t.phi_e == Surd(3));
    CHECK(t.regular_tree);

    SUBCASE("H(5,4)") {
        const auto rows = hyperbolic_case_table(5, 4);
        CHECK(rows.size() == 6);
        CHECK(rows[2].j == 3);
        CHECK(rows[2].report.omega_item == OmegaItem::B);
        CHECK(rows[3].note.find("finite zero clusters persist") != std::string::npos);
        CHECK_FALSE(rows[3].in_range);
        CHECK(rows.back().majority);
        CHECK(rows.back().j == 3);
    }
    SUBCASE("H(7,3)") {
        const auto rows = hyperbolic_case_table(7, 3);
        CHECK_FALSE(rows[3].report.omega_good());
        CHECK(rows[3].note.find("open") != std::string::npos);
        CHECK(rows[3].in_range);
    }
    SUBCASE("majority rows") {
        CHECK(hyperbolic_case_table(7, 6).back().report.chi_item == ChiItem::I);
        CHECK(hyperbolic_case_table(6, 6).back().report.chi_item == ChiItem::II);
        CHECK(hyperbolic_case_table(8, 4).back().report.chi_good());
    }
}

TEST_CASE("goodness is downward closed in j and rechecks") {
    for (auto [d, f] : {std::pair{5, 4}, {7, 3}, {8, 3}, {12, 3}, {8, 4}, {6, 5}, {7, 6}, {6, 6}, {4, 5}, {3, 7}}) {
        CAPTURE(d);
        CAPTURE(f);
        const auto rows = hyperbolic_case_table(d, f);
        bool omega = true, chi = true;
        for (const auto& r : rows) {
            CHECK(recheck(r.report));
            CHECK(r.in_range == in_nontrivial_range(d, f, r.j));
            if (r.majority) continue;
            if (!omega) CHECK_FALSE(r.report.omega_good());
            if (!chi) CHECK_FALSE(r.report.chi_good());
            omega = r.report.omega_good();
            chi = r.report.chi_good();
        }
    }
}

TEST_CASE("classify preconditions and csv") {
    const auto in = hyperbolic_inputs(5, 4);
    CHECK_THROWS_AS(classify(0, in), std::invalid_argument);
    CHECK_THROWS_AS(classify(6, in), std::invalid_argument);
    CHECK(in_nontrivial_range(7, 3, 4));
    CHECK_FALSE(in_nontrivial_range(7, 3, 5));
    CHECK(in_nontrivial_range(5, 4, 3));
    CHECK_FALSE(in_nontrivial_range(5, 4, 4));

    std::ostringstream out;
    write_case_table_csv(out, hyperbolic_case_table(5, 4));
    const auto text = out.str();
    CHECK(text.rfind("d,f,j,", 0) == 0);
    CHECK(text.find("5,4,3,threshold,1,b,") != std::string::npos);
}
