#include <benchmark/benchmark.h>

#include "vortexlab/index_estimator.hpp"
#include "vortexlab/linearized_operator.hpp"
#include "vortexlab/model_operators.hpp"

using namespace vortexlab;

namespace {

// Argument: R / h with h = 0.5.
void BM_AssembleDbarIndex(benchmark::State& state) {
    const Grid2D g(static_cast<double>(state.range(0)) / 2, 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(assemble_dbar_index(g, 4, 0.75, 1));
}
BENCHMARK(BM_AssembleDbarIndex)->Arg(16)->Arg(24)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_AssembleAugmentedIndex(benchmark::State& state) {
    const ToyModelConfig cfg;
    const Grid2D g(static_cast<double>(state.range(0)) / 2, 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(assemble_augmented_index(cfg, 1, g, 4, 0.75));
}
BENCHMARK(BM_AssembleAugmentedIndex)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_AssembleDwCartesian(benchmark::State& state) {
    const ToyModelConfig cfg;
    const EquivariantPair w = make_winding_pair(cfg, 1, Grid2D(8, 8.0 / static_cast<double>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(assemble_augmented(cfg, w));
    state.SetComplexityN(static_cast<int64_t>(w.grid.size()));
}
BENCHMARK(BM_AssembleDwCartesian)->Arg(16)->Arg(32)->Arg(64)->Complexity()->Unit(benchmark::kMillisecond);

void BM_MeasureIndexDbar(benchmark::State& state) {
    const OperatorMatrix op = assemble_dbar_index(Grid2D(static_cast<double>(state.range(0)), 0.5), 4, 0.75, 1);
    for (auto _ : state) benchmark::DoNotOptimize(measure_index(op));
    state.counters["cols"] = op.cols();
}
BENCHMARK(BM_MeasureIndexDbar)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_MeasureIndexAugmented(benchmark::State& state) {
    const ToyModelConfig cfg;
    const OperatorMatrix op = assemble_augmented_index(cfg, 1, Grid2D(static_cast<double>(state.range(0)), 0.5), 4, 0.75);
    for (auto _ : state) benchmark::DoNotOptimize(measure_index(op));
    state.counters["cols"] = op.cols();
}
BENCHMARK(BM_MeasureIndexAugmented)->Arg(8)->Unit(benchmark::kMillisecond)->Iterations(2);

}  // namespace

BENCHMARK_MAIN();
