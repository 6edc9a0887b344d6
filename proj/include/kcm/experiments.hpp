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
#include "kcm/graph.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace kcm {

/// `tree:d:depth` or `hyperbolic:d:f:radius` (alias `hyp`).
struct GraphSpec {
    FamilyKind family = FamilyKind::Tree;
    int d = 3;
    int f = 0;
    int radius = 4;

    static GraphSpec parse(const std::string& text);
    std::string str() const;
    Graph build() const;
    /// Closed-form constants of the infinite graph behind the truncation.
    GoodnessInputs goodness_inputs() const;
};

struct ExperimentSpec {
    std::string kind;  ///< nonergodicity, convergence_fa, cluster_tails, stability_threshold, qc_bp, reversibility_fa
    GraphSpec graph;
    ProcessKind process = ProcessKind::CP;
    int j = 1;
    std::vector<double> eps{0.0};  ///< one value, or a grid
    double q = 1.0;
    double p = 1.0;
    std::vector<double> q_grid;
    Boundary boundary = Boundary::One;
    int T = 10;
    int trials = 100;
    std::uint64_t seed = 1;
    std::vector<double> sample_times;  ///< continuous-time experiments
    int seed_time = 0;                 ///< cluster tails: seed (root, seed_time); 0 means T/2
    int margin = 1;
    int ell_max = 10;
    int bisect_steps = 4;
    bool parallel = true;  ///< trial-parallel OpenMP loop

    nlohmann::ordered_json to_json() const;
    static ExperimentSpec from_json(const nlohmann::json& j);
    /// FNV-1a of the canonical JSON dump.
    std::uint64_t hash() const;
};

struct ResultTable {
    std::string experiment;
    nlohmann::ordered_json spec;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    nlohmann::ordered_json summary = nlohmann::ordered_json::object();
    std::vector<std::pair<double, double>> plot;  ///< optional (x, y) series
    double wall_seconds = 0;

    void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
    void write_csv(std::ostream& out) const;
    /// Deterministic manifest: spec, hash, version, columns, summary, file names.
    nlohmann::ordered_json manifest() const;
};

struct WrittenFiles {
    std::filesystem::path csv, manifest, timing, plot;
};

/// Writes <kind>-<hash>.csv, .json, .dat (if a plot series exists) and the
/// wall time into <kind>-<hash>.timing.json, kept apart so the others stay
/// byte-for-byte reproducible.
WrittenFiles write_result(const ResultTable& table, const std::filesystem::path& dir);

ResultTable exp_nonergodicity(const ExperimentSpec& spec);
ResultTable exp_convergence_fa(const ExperimentSpec& spec);
ResultTable exp_cluster_tails(const ExperimentSpec& spec);
ResultTable exp_stability_threshold(const ExperimentSpec& spec);
ResultTable exp_qc_bp(const ExperimentSpec& spec);
ResultTable exp_reversibility_fa(const ExperimentSpec& spec);

/// Dispatches on spec.kind; throws std::invalid_argument for unknown kinds.
ResultTable run_experiment(const ExperimentSpec& spec);

extern const char* const kVersion;

}  // namespace kcm
