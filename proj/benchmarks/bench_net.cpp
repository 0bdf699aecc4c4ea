#include <benchmark/benchmark.h>

#include "colornn/decoder_net.hpp"
#include "colornn/sim.hpp"

using namespace colornn;

namespace {

Batch random_batch(const CodeLayout &L, int hidden, int cycles, int size) {
    CounterRng rng(5, 0);
    std::vector<SyndromeSequence> seqs(static_cast<std::size_t>(size));
    const auto nc = static_cast<std::size_t>(L.n_checks());
    for (auto &s : seqs) {
        s.cycles = cycles;
        for (int t = 0; t < cycles; ++t) {
            BitVector a(nc), b(nc);
            for (std::size_t i = 0; i < nc; ++i) {
                a.set(i, rng.bernoulli(0.05));
                b.set(i, rng.bernoulli(0.01));
            }
            s.delta_s.push_back(a);
            s.s_flag.push_back(b);
        }
        s.finals.push_back({cycles, BitVector(static_cast<std::size_t>(L.n_tiles())), rng.bernoulli(0.5)});
    }
    std::vector<const SyndromeSequence *> ptrs;
    for (const auto &s : seqs) {
        ptrs.push_back(&s);
    }
    return make_batch(ptrs, net_shape_for(L, hidden));
}

// Args: distance, hidden, cycles. Batch of 64 as in training.
void BM_ForwardBackward(benchmark::State &state) {
    const auto L = build_layout(static_cast<int>(state.range(0)));
    const int hidden = static_cast<int>(state.range(1));
    const auto batch = random_batch(L, hidden, static_cast<int>(state.range(2)), 64);
    DecoderNet net(net_shape_for(L, hidden));
    CounterRng init(1, 1), dropout(1, 3);
    net.initialize(init);
    VectorXd grad;
    for (auto _ : state) {
        benchmark::DoNotOptimize(net.forward_backward(batch, LossConfig{}, &dropout, grad));
    }
    state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_ForwardBackward)->Args({3, 32, 20})->Args({3, 32, 40})->Args({5, 64, 20})->Args({7, 128, 20});

void BM_Forward(benchmark::State &state) {
    const auto L = build_layout(static_cast<int>(state.range(0)));
    const int hidden = static_cast<int>(state.range(1));
    const auto batch = random_batch(L, hidden, 150, 128);
    DecoderNet net(net_shape_for(L, hidden));
    CounterRng init(1, 1);
    net.initialize(init);
    for (auto _ : state) {
        benchmark::DoNotOptimize(net.forward(batch));
    }
    state.SetItemsProcessed(state.iterations() * 128 * 150);
    state.SetLabel("items = sequence cycles");
}
BENCHMARK(BM_Forward)->Args({3, 32})->Args({5, 64});

}  // namespace

BENCHMARK_MAIN();
