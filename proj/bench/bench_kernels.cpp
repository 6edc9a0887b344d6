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

// Serial reference kernels against their OpenMP counterparts.

#include "kcm/dynamics.hpp"
#include "kcm/expansion.hpp"
#include "kcm/experiments.hpp"

#include <benchmark/benchmark.h>

using namespace kcm;

namespace {

void run_steps(benchmark::State& state, bool parallel) {
    const Graph g = build_hyperbolic(5, 4, static_cast<int>(state.range(0)));
    const Lattice lat(g, Boundary::One);
    const RandomField f(1);
    const auto proc = DiscreteProcess::cp(3, 0.05);
    Config a = lat.initial(InitialLaw::all_one(), f), b = a;
    std::int64_t t = 0;
    for (auto _ : state) {
        ++t;
        if (parallel)
            step_discrete(a, b, lat, f, t, proc);
        else
            step_discrete_serial(a, b, lat, f, t, proc);
        std::swap(a, b);
        benchmark::DoNotOptimize(a.data());
    }
    state.SetItemsProcessed(state.iterations() * g.num_vertices());
}

void BM_step_serial(benchmark::State& state) { run_steps(state, false); }
void BM_step_openmp(benchmark::State& state) { run_steps(state, true); }

void run_boundary(benchmark::State& state, bool parallel) {
    const Graph g = build_hyperbolic(7, 3, 5);
    const int m = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto r = parallel ? brute_force_boundary_ratio(g, m) : brute_force_boundary_ratio_serial(g, m);
        benchmark::DoNotOptimize(r);
    }
}

void BM_boundary_serial(benchmark::State& state) { run_boundary(state, false); }
void BM_boundary_openmp(benchmark::State& state) { run_boundary(state, true); }

void run_trials(benchmark::State& state, bool parallel) {
    ExperimentSpec s;
    s.kind = "nonergodicity";
    s.graph = GraphSpec::parse("tree:5:6");
    s.process = ProcessKind::CP;
    s.j = 4;
    s.eps = {0.02};
    s.T = 20;
    s.trials = static_cast<int>(state.range(0));
    s.parallel = parallel;
    for (auto _ : state) benchmark::DoNotOptimize(run_experiment(s));
    state.SetItemsProcessed(state.iterations() * s.trials);
}

void BM_trials_serial(benchmark::State& state) { run_trials(state, false); }
void BM_trials_openmp(benchmark::State& state) { run_trials(state, true); }

}  // namespace

BENCHMARK(BM_step_serial)->Arg(5)->Arg(7);
BENCHMARK(BM_step_openmp)->Arg(5)->Arg(7);
BENCHMARK(BM_boundary_serial)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_boundary_openmp)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_trials_serial)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_trials_openmp)->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
