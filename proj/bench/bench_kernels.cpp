// Serial reference vs OpenMP kernels. With a single core the parallel
// variants mostly measure scheduling overhead.

#include <benchmark/benchmark.h>

#include "carlton/baselines.hpp"
#include "carlton/evaluation.hpp"
#include "carlton/link_table.hpp"
#include "carlton/scenario.hpp"

using namespace carlton;

namespace {

struct World {
    Scenario scenario;
    PropagationParams params = PropagationParams::defaults();
    LinkTable table;
    std::vector<int> assignment;

    explicit World(int n)
        : scenario(generate_scenario(n, GenerationParams{}, std::uint64_t{42})),
          table(scenario, params),
          assignment(static_cast<std::size_t>(n)) {
        for (int i = 0; i < n; ++i) assignment[static_cast<std::size_t>(i)] = i % params.channel_count();
    }
};

void quality_vectors(benchmark::State& state, Exec exec) {
    World w(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(all_quality_vectors(w.table, w.assignment, 4.0, exec));
}

void centralized(benchmark::State& state, Exec exec) {
    World w(static_cast<int>(state.range(0)));
    CentralizedOptions opt;
    opt.mode = SearchMode::Exhaustive;
    opt.exec = exec;
    for (auto _ : state) benchmark::DoNotOptimize(centralized_optimum(w.table, 4.0, opt));
}

void grid(benchmark::State& state, Exec exec) {
    GridSpec spec;
    spec.networks_min = 2;
    spec.networks_max = 8;
    spec.games_per_n = 4;
    spec.exec = exec;
    const auto carriers = spec.propagation.carrier_mhz;
    std::vector<NamedPolicy> policies{
        {"ra", [] { return std::make_unique<RandomAgentPolicy>(); }, false},
        {"jar", [carriers] { return std::make_unique<JarPolicy>(carriers); }, false}};
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_grid(policies, spec));
}

} // namespace

BENCHMARK_CAPTURE(quality_vectors, serial, Exec::Serial)->Arg(5)->Arg(15);
BENCHMARK_CAPTURE(quality_vectors, parallel, Exec::Parallel)->Arg(5)->Arg(15);
BENCHMARK_CAPTURE(centralized, serial, Exec::Serial)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(centralized, parallel, Exec::Parallel)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(grid, serial, Exec::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(grid, parallel, Exec::Parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
