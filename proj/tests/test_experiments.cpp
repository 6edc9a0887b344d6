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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "kcm/experiments.hpp"
#include "kcm/textio.hpp"

using namespace kcm;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentSpec small(const std::string& kind, const std::string& graph) {
    ExperimentSpec s;
    s.kind = kind;
    s.graph = GraphSpec::parse(graph);
    s.trials = 50;
    s.T = 8;
    s.seed = 5;
    return s;
}

std::vector<std::string> column(const ResultTable& t, const std::string& name) {
    const auto it = std::find(t.columns.begin(), t.columns.end(), name);
    REQUIRE(it != t.columns.end());
    const auto k = static_cast<std::size_t>(it - t.columns.begin());
    std::vector<std::string> out;
    for (const auto& r : t.rows) out.push_back(r[k]);
    return out;
}

}  // namespace

TEST_CASE("graph spec strings") {
    const auto t = GraphSpec::parse("tree:5:8");
    CHECK(t.family == FamilyKind::Tree);
    CHECK(t.d == 5);
    CHECK(t.radius == 8);
    CHECK(t.str() == "tree:5:8");
    const auto h = GraphSpec::parse("hyp:5:4:3");
    CHECK(h.str() == "hyperbolic:5:4:3");
    CHECK(h.build().num_vertices() > 0);
    CHECK_THROWS_AS(GraphSpec::parse("torus:3"), std::invalid_argument);
    CHECK_THROWS_AS(GraphSpec::parse("tree:x"), std::invalid_argument);
    CHECK_THROWS_AS(GraphSpec::parse("hyperbolic:5"), std::invalid_argument);
}

TEST_CASE("nonergodicity degenerate rows") {
    auto s = small("nonergodicity", "tree:5:4");
    s.process = ProcessKind::NMVP;
    s.eps = {0.0};
    for (const auto& v : column(run_experiment(s), "p_hat")) CHECK(v == "0.000000");
    s.process = ProcessKind::CP;
    s.j = 4;
    s.eps = {1.0};
    const auto t = run_experiment(s);
    const auto p = column(t, "p_hat");
    CHECK(p[0] == "0.000000");
    for (std::size_t i = 1; i < p.size(); ++i) CHECK(p[i] == "1.000000");
    CHECK(t.summary["verdict"] == "not supported at this eps");
    s.process = ProcessKind::BP;
    CHECK_THROWS(run_experiment(s));
}

TEST_CASE("FA convergence with p = q has no discrepancies") {
    auto s = small("convergence_fa", "hyperbolic:5:4:3");
    s.j = 3;
    s.q = s.p = 0.9;
    s.sample_times = {0, 2, 4};
    s.T = 4;
    const auto t = run_experiment(s);
    for (const auto& v : column(t, "discrepancies")) CHECK(v == "0");

    s.p = 0.5;
    s.trials = 400;
    const auto u = run_experiment(s);
    // Initial deviation |mean - q| estimates |p - q| = 0.4.
    CHECK(std::stod(column(u, "deviation")[0]) == doctest::Approx(0.4).epsilon(0.2));
    CHECK(std::stod(column(u, "p_disc")[0]) > 0.2);
}

TEST_CASE("cluster tails with eps = 0 are empty") {
    auto s = small("cluster_tails", "tree:5:4");
    s.j = 4;
    s.eps = {0.0};
    const auto t = run_experiment(s);
    for (const auto& v : column(t, "survive")) CHECK(v == "0");
    for (const auto& v : column(t, "censored")) CHECK(v == "0");
    CHECK(t.summary["per_eps"][0]["fit_sufficient"] == false);
    CHECK(t.summary["gate"] == "ok");
}

TEST_CASE("stability threshold endpoints and proxy") {
    auto s = small("stability_threshold", "hyperbolic:5:4:4");
    s.process = ProcessKind::BP;
    s.j = 3;
    s.eps = {0.0, 1.0};
    s.bisect_steps = 3;
    const auto t = run_experiment(s);
    const auto eps = column(t, "eps");
    const auto p = column(t, "p_hat");
    CHECK(eps.front() == "0.000000");
    CHECK(p.front() == "1.000000");
    CHECK(eps.back() == "1.000000");
    CHECK(p.back() == "0.000000");
    CHECK(t.rows.size() == 5);
    CHECK(t.summary["proxy_lo"].get<double>() > 0);
    CHECK(t.summary["proxy_lo"].get<double>() < t.summary["proxy_hi"].get<double>());
}

TEST_CASE("bootstrap fill endpoints") {
    auto s = small("qc_bp", "tree:3:5");
    s.process = ProcessKind::BP;
    s.j = 2;
    s.q_grid = {0.0, 1.0};
    s.boundary = Boundary::Absent;
    const auto f = column(run_experiment(s), "fraction");
    CHECK(f == std::vector<std::string>{"0.000000", "1.000000"});
}

TEST_CASE("FA reversibility endpoints") {
    auto s = small("reversibility_fa", "tree:4:4");
    s.j = 2;
    s.q = 1.0;
    for (const auto& v : column(run_experiment(s), "mean")) CHECK(v == "1.000000");
    s.q = 0.0;
    s.boundary = Boundary::Zero;
    for (const auto& v : column(run_experiment(s), "mean")) CHECK(v == "0.000000");
}

TEST_CASE("outputs are reproducible byte for byte") {
    auto s = small("cluster_tails", "tree:5:5");
    s.j = 4;
    s.eps = {0.02, 0.05};
    s.trials = 200;
    s.T = 10;
    const auto dir = std::filesystem::temp_directory_path() / "kcm-repro-test";
    std::filesystem::remove_all(dir);
    const auto a = write_result(run_experiment(s), dir / "a");
    s.parallel = false;
    const auto b = write_result(run_experiment(s), dir / "b");
    CHECK(a.csv.filename() == b.csv.filename());
    CHECK(slurp(a.csv) == slurp(b.csv));
    CHECK(slurp(a.manifest) == slurp(b.manifest));
    CHECK(std::filesystem::exists(a.timing));

    const auto m = nlohmann::json::parse(slurp(a.manifest));
    CHECK(m["spec"]["trials"] == 200);
    CHECK(m["spec"]["seed"] == 5);
    CHECK(m["spec_hash"] == hex64(s.hash()));
    CHECK_FALSE(m.contains("wall_seconds"));

    s.seed = 6;
    CHECK(s.hash() != ExperimentSpec::from_json(m["spec"]).hash());
    s.seed = 5;
    CHECK(s.hash() == ExperimentSpec::from_json(m["spec"]).hash());
    std::filesystem::remove_all(dir);
}
