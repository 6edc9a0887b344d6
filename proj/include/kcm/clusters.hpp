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

#include "kcm/dynamics.hpp"
#include "kcm/spacetime.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace kcm {

/// Neighbours of p in G x N (strong product) with times in [0, T].
std::vector<SpaceTimePoint> strong_neighbors(SpaceTimePoint p, const Graph& g, int T);

struct Cluster {
    static constexpr int kEmpty = std::numeric_limits<int>::min();  ///< diam of the empty set
    static constexpr int kUnknown = -1;  ///< censored cluster, diameter not computed

    std::vector<SpaceTimePoint> points;  ///< sorted
    bool censored = false;
    int diameter = kEmpty;
};

struct ClusterOptions {
    int spatial_margin = 0;  ///< censored when a member has layer >= R - margin
    bool stop_when_censored = true;
    std::optional<std::uint64_t> shuffle_seed;  ///< randomise frontier order (order-independence audit)
};

/// Zero cluster of `seed` in the strong product, ambient-metric diameter
/// max(d_G, |dt|). Censored when it touches layer >= R - margin or time 0 or T.
Cluster zero_cluster(const DiscreteTrajectory& traj, const Graph& g, SpaceTimePoint seed,
                     const ClusterOptions& opts = {});

struct TailRow {
    int ell = 0;
    std::int64_t n_trials = 0;
    std::int64_t n_survive = 0;   ///< uncensored with diameter >= ell
    std::int64_t n_censored = 0;  ///< censored, counted in the upper bound only
    double p_hat = 0;
    double ci_lo = 0;
    double ci_hi = 0;
    double p_upper = 0;  ///< (n_survive + n_censored) / n_trials
};

std::vector<TailRow> tail_table(const std::vector<Cluster>& clusters, int ell_max);
/// Same table from per-trial (censored, diameter) summaries.
std::vector<TailRow> tail_table(const std::vector<std::pair<bool, int>>& summaries, int ell_max);

struct DecayFit {
    bool sufficient = false;  ///< at least three ell values with nonzero counts
    double slope = 0;         ///< of log p_hat against ell + 1
    double intercept = 0;
    double r2 = 0;
    double c = 0;  ///< slope / log(eps), from p ~ eps^{c (ell + 1)}
    int points = 0;
    bool decays = false;  ///< c > 0
};

DecayFit fit_decay(const std::vector<TailRow>& table, double eps);

}  // namespace kcm
