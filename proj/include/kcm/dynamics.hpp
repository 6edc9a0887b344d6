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
#include "kcm/random_field.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace kcm {

/// One byte per vertex of the graph, frozen vertices included.
using Config = std::vector<std::uint8_t>;

/// What the frozen vertices at layer R look like to their free neighbours.
enum class Boundary { One, Zero, Absent };

std::string to_string(Boundary b);
Boundary parse_boundary(const std::string& s);

struct InitialLaw {
    enum class Kind { AllOne, AllZero, Bernoulli, Explicit };
    Kind kind = Kind::AllOne;
    double p = 1.0;
    Config config;  ///< Explicit only; values on frozen vertices are ignored

    static InitialLaw all_one() { return {Kind::AllOne, 1.0, {}}; }
    static InitialLaw all_zero() { return {Kind::AllZero, 0.0, {}}; }
    static InitialLaw bernoulli(double p) { return {Kind::Bernoulli, p, {}}; }
    static InitialLaw explicit_config(Config c) { return {Kind::Explicit, 0.0, std::move(c)}; }
};

/// Graph plus boundary policy: free vertices are those of layer <= R-1.
class Lattice {
public:
    Lattice(const Graph& g, Boundary boundary);

    const Graph& graph() const { return *g_; }
    Boundary boundary() const { return boundary_; }
    int num_vertices() const { return g_->num_vertices(); }
    bool is_free(VertexId v) const { return g_->is_interior(v); }
    const std::vector<VertexId>& free_vertices() const { return free_; }
    /// Neighbour count seen by the dynamics (frozen neighbours dropped under Absent).
    int degree(VertexId v) const { return degree_[v]; }
    std::uint8_t frozen_value() const { return boundary_ == Boundary::One ? 1 : 0; }

    /// Bernoulli draws use 1{init_uniform(x) < p}, which couples laws monotonically in p.
    Config initial(const InitialLaw& law, const RandomField& field) const;

private:
    const Graph* g_;
    Boundary boundary_;
    std::vector<VertexId> free_;
    std::vector<int> degree_;
};

struct DiscreteProcess {
    ProcessKind kind = ProcessKind::BP;
    int j = 1;
    double eps = 0.0;

    static DiscreteProcess bp(int j, double eps) { return {ProcessKind::BP, j, eps}; }
    static DiscreteProcess cp(int j, double eps) { return {ProcessKind::CP, j, eps}; }
    static DiscreteProcess nmvp(double eps) { return {ProcessKind::NMVP, 0, eps}; }
};

std::string to_string(ProcessKind kind);
ProcessKind parse_process(const std::string& s);

/// Frozen neighbours count with their frozen value (0 under Absent).
inline int count_one_neighbors(const Config& c, const Lattice& lat, VertexId x) {
    int n = 0;
    for (VertexId y : lat.graph().neighbors(x)) n += c[y];
    return n;
}

/// New value of free vertex x at time t given the time t-1 configuration.
inline std::uint8_t update_value(const Config& prev, const Lattice& lat, const RandomField& field,
                                 std::int64_t t, const DiscreteProcess& proc, VertexId x) {
    const Mark mark = classify_point(field.uniform_at(x, t), proc.eps, proc.kind);
    if (mark == Mark::Noise0) return 0;
    if (mark == Mark::Noise1) return 1;
    const int c = count_one_neighbors(prev, lat, x);
    switch (proc.kind) {
    case ProcessKind::BP:
        return static_cast<std::uint8_t>(prev[x] | (c >= proc.j));
    case ProcessKind::CP:
        return static_cast<std::uint8_t>(c >= proc.j);
    case ProcessKind::NMVP: {
        const int twice = 2 * c, deg = lat.degree(x);
        return twice > deg ? 1 : (twice < deg ? 0 : prev[x]);
    }
    }
    return 0;
}

/// Synchronous update of every free vertex; frozen entries are copied.
void step_discrete_serial(const Config& prev, Config& next, const Lattice& lat,
                          const RandomField& field, std::int64_t t, const DiscreteProcess& proc);
/// OpenMP kernel, bitwise identical to the serial one.
void step_discrete(const Config& prev, Config& next, const Lattice& lat, const RandomField& field,
                   std::int64_t t, const DiscreteProcess& proc);

struct DiscreteTrajectory {
    DiscreteProcess process;
    std::vector<Config> states;  ///< states[t] for t = 0..T

    int horizon() const { return static_cast<int>(states.size()) - 1; }
    std::uint8_t at(VertexId x, int t) const { return states[t][x]; }
};

/// Calls observe(t, config) for t = 0..T without storing the trajectory.
void simulate_discrete(const Lattice& lat, const DiscreteProcess& proc, Config init, int T,
                       const RandomField& field,
                       const std::function<void(int, const Config&)>& observe,
                       bool parallel = false);

DiscreteTrajectory run_discrete(const Lattice& lat, const DiscreteProcess& proc, const Config& init,
                                int T, const RandomField& field, bool parallel = false);

struct FaEvent {
    double time = 0;
    VertexId x = 0;
    std::uint8_t value = 0;  ///< state right after the ring
    bool constraint_ok = false;
    std::int64_t ring = 0;  ///< ring index k at x
};

struct ContinuousTrajectory {
    Config initial;
    double horizon = 0;
    std::vector<FaEvent> events;  ///< time order, ties by vertex id

    Config state_at(double t) const;
};

/// All rings on free vertices within [0, T], ordered by (time, vertex).
std::vector<FaEvent> merged_rings(const Lattice& lat, double T, const RandomField& field);

ContinuousTrajectory run_fa(const Lattice& lat, int j, double q, const Config& init, double T,
                            const RandomField& field);

struct FaCoupledRun {
    ContinuousTrajectory low;   ///< started from Ber(p)
    ContinuousTrajectory high;  ///< started from Ber(q)
    std::vector<double> sample_times;
    std::vector<std::vector<VertexId>> discrepancies;  ///< per sample time
};

/// Shared clocks and ring uniforms; both initial laws use the same init uniform.
FaCoupledRun run_fa_coupled(const Lattice& lat, int j, double q, double p, double T,
                            const RandomField& field, std::vector<double> sample_times);

struct DiscrepancyStep {
    VertexId x = 0;
    double time = 0;  ///< 0 for a discrepancy present initially
};

/// Walks back from a discrepancy at (x, t): each newly created discrepancy
/// must have a discrepant neighbour just before its ring. Returns the chain
/// ending at a time-0 discrepancy, or an empty vector if (x, t) is not
/// discrepant or the chain breaks.
std::vector<DiscrepancyStep> trace_discrepancy(const FaCoupledRun& run, const Lattice& lat,
                                               VertexId x, double t);

/// Checks the local rule behind trace_discrepancy at every ring of the run.
bool audit_discrepancy_provenance(const FaCoupledRun& run, const Lattice& lat);

struct CoupledCpNmvp {
    DiscreteTrajectory chi;    ///< consensus with threshold floor(d/2) + 1
    DiscreteTrajectory sigma;  ///< majority vote
    std::int64_t violations = 0;  ///< (x, t) with chi > sigma
};

CoupledCpNmvp run_coupled_cp_nmvp(const Lattice& lat, double eps, int T, const RandomField& field);

}  // namespace kcm
