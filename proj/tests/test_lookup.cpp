#include <gtest/gtest.h>

#include "colornn/lookup_decoder.hpp"
#include "print.hpp"

using namespace colornn;

TEST(LookupDecoder, EnumeratesEveryLocation) {
    const auto L = build_layout(3);
    ExperimentRunner runner(L, ResetMode::kReset, Basis::kZ);
    const auto faults = enumerate_single_faults(runner, 2);
    std::size_t expect = 0;
    auto count = [&](const CircuitSchedule &s, int times) {
        for (const auto &st : s.steps) {
            for (const auto &op : st.ops) {
                const std::size_t k = op.kind == OpKind::kMeasure ? 1 : op.kind == OpKind::kCphase ? 15 : 3;
                expect += k * static_cast<std::size_t>(times);
            }
        }
    };
    count(runner.init_schedule(), 1);
    count(runner.cycle_schedule(), 2);
    count(runner.readout_schedule(), 1);
    EXPECT_EQ(faults.size(), expect);
}

TEST(LookupDecoder, EmptySyndromeIsEven) {
    const auto L = build_layout(3);
    const LookupDecoder dec(L, 2);
    SyndromeSequence seq;
    seq.cycles = 2;
    seq.delta_s.assign(2, BitVector(6));
    seq.s_flag.assign(2, BitVector(6));
    seq.finals.push_back({2, BitVector(3), false});
    EXPECT_FALSE(dec.decode(seq));
}

class LookupSingleFaults : public ::testing::TestWithParam<ResetMode> {};

TEST_P(LookupSingleFaults, EverySingleFaultDecodes) {
    const auto L = build_layout(3);
    const auto mode = GetParam();
    const LookupDecoder dec(L, 2, mode);
    EXPECT_EQ(dec.ambiguous(), 0u);
    ExperimentRunner runner(L, mode, Basis::kZ);
    SyndromeExtractor ex(L, mode, Basis::kZ);
    const auto faults = enumerate_single_faults(runner, 2);
    EXPECT_EQ(dec.faults_enumerated(), faults.size());
    std::vector<ForcedFault> one(1);
    int failures = 0;
    for (std::size_t i = 0; i < faults.size(); ++i) {
        one[0] = faults[i];
        // A different seed than the table build: random outcomes must not matter.
        CounterRng rng(i, 1234);
        const auto seq = ex.extract(runner.run(2, NoiseParams::uniform(0.0), rng, &one));
        failures += dec.decode(seq) != seq.p_true();
    }
    EXPECT_EQ(failures, 0);
}

INSTANTIATE_TEST_SUITE_P(Modes, LookupSingleFaults, ::testing::Values(ResetMode::kReset, ResetMode::kNoReset));

TEST(LookupDecoder, RejectsOtherDistances) {
    EXPECT_THROW(LookupDecoder(build_layout(5), 2), std::invalid_argument);
    EXPECT_THROW(LookupDecoder(build_layout(3), 0), std::invalid_argument);
}

TEST(LookupDecoder, MonteCarloIsReproducible) {
    const auto L = build_layout(3);
    const LookupDecoder dec(L, 2);
    const auto a = run_lookup_monte_carlo(dec, L, 2e-3, 3000, 5);
    const auto b = run_lookup_monte_carlo(dec, L, 2e-3, 3000, 5);
    EXPECT_EQ(a.failures, b.failures);
    EXPECT_EQ(a.samples, 3000);
    EXPECT_GT(a.failures, 0);
    EXPECT_LT(a.failure_rate(), 0.2);
}
