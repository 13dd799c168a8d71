// Serial reference vs OpenMP ensemble kernels on the p-Laplace problem.
// Wall-clock timing; set OMP_NUM_THREADS to vary workers.

#include "monospde/coupling.hpp"
#include "monospde/ensemble.hpp"

#include <benchmark/benchmark.h>

using namespace monospde;

namespace {

const SdeProblem& problem() {
    static const SdeProblem p = [] {
        const auto s = build_space(16);
        auto drift = std::make_shared<const DriftModel>(DriftModel::p_laplace(s, 4, 2, 0));
        return SdeProblem::make(drift, NoiseModel(s, 0.5, 1.0), 4.0);
    }();
    return p;
}

EnsembleSpec spec_for(Execution exec, std::size_t paths) {
    EnsembleSpec spec;
    spec.n_paths = paths;
    spec.dt = 1e-3;
    spec.seed = 7;
    spec.exec = exec;
    return spec;
}

void final_states_bench(benchmark::State& state, Execution exec) {
    const auto& pr = problem();
    const Vector x0 = Vector::Constant(16, 0.5);
    const auto spec = spec_for(exec, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(final_states(pr, x0, 0.1, spec));
    state.counters["workers"] = exec == Execution::Serial ? 1 : worker_count();
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void coupled_bench(benchmark::State& state, Execution exec) {
    const auto& pr = problem();
    const Vector x = Vector::Constant(16, 0.1);
    const Vector y = -x;
    const auto params = make_params(pr, x, y, 0.1, 1e-3);
    const auto spec = spec_for(exec, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(coupled_ensemble(pr, params, x, y, spec));
    state.counters["workers"] = exec == Execution::Serial ? 1 : worker_count();
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK_CAPTURE(final_states_bench, serial, Execution::Serial)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(final_states_bench, parallel, Execution::Parallel)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(coupled_bench, serial, Execution::Serial)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(coupled_bench, parallel, Execution::Parallel)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
