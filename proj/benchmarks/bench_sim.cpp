#include <benchmark/benchmark.h>

#include "colornn/sim.hpp"
#include "colornn/syndrome.hpp"

using namespace colornn;

namespace {

void BM_Cycles(benchmark::State &state) {
    const auto L = build_layout(static_cast<int>(state.range(0)));
    const auto mode = state.range(1) ? ResetMode::kNoReset : ResetMode::kReset;
    ExperimentRunner runner(L, mode, Basis::kZ);
    const auto noise = NoiseParams::uniform(1e-3);
    constexpr int kCycles = 20;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        CounterRng rng(++seed, 0);
        benchmark::DoNotOptimize(runner.run(kCycles, noise, rng));
    }
    state.SetItemsProcessed(state.iterations() * kCycles);
    state.SetLabel("items = QEC cycles");
}
BENCHMARK(BM_Cycles)->ArgsProduct({{3, 5, 7}, {0, 1}});

void BM_Extract(benchmark::State &state) {
    const auto L = build_layout(static_cast<int>(state.range(0)));
    ExperimentRunner runner(L, ResetMode::kNoReset, Basis::kZ);
    SyndromeExtractor ex(L, ResetMode::kNoReset, Basis::kZ);
    CounterRng rng(1, 0);
    const auto raw = runner.run(100, NoiseParams::uniform(1e-3), rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ex.extract(raw));
    }
    state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_Extract)->Arg(3)->Arg(5)->Arg(7);

}  // namespace

BENCHMARK_MAIN();
