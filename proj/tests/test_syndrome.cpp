#include <gtest/gtest.h>

#include "colornn/sim.hpp"
#include "colornn/syndrome.hpp"
#include "print.hpp"

using namespace colornn;

namespace {

struct Slot {
    int step;
    int qubit;
};

Slot measure_slot(const CircuitSchedule &s, MeasureRole role, int index) {
    for (const auto &m : s.measurements) {
        if (m.role == role && m.index == index) {
            return {m.step, m.qubit};
        }
    }
    throw std::logic_error("no such measurement");
}

SyndromeSequence run_forced(const ExperimentRunner &runner, const SyndromeExtractor &ex, int cycles,
                            const std::vector<ForcedFault> &forced, std::uint64_t seed = 0) {
    CounterRng rng(seed, 0);
    return ex.extract(runner.run(cycles, NoiseParams::uniform(0.0), rng, &forced));
}

void expect_all_zero(const SyndromeSequence &seq) {
    for (int t = 0; t < seq.cycles; ++t) {
        EXPECT_TRUE(seq.delta_s[static_cast<std::size_t>(t)].none()) << "delta_s at cycle " << t + 1;
        EXPECT_TRUE(seq.s_flag[static_cast<std::size_t>(t)].none()) << "s_flag at cycle " << t + 1;
    }
    for (const auto &f : seq.finals) {
        EXPECT_TRUE(f.delta_f.none());
        EXPECT_FALSE(f.p_true);
    }
}

ForcedFault random_fault(const ExperimentRunner &runner, int cycles, CounterRng &rng) {
    const int segment = static_cast<int>(rng.below(static_cast<std::uint64_t>(cycles + 2)));
    const auto &sched = segment == 0 ? runner.init_schedule()
                        : segment <= cycles ? runner.cycle_schedule()
                                            : runner.readout_schedule();
    ForcedFault f;
    f.segment = segment;
    if (!sched.measurements.empty() && rng.bernoulli(0.25)) {
        const auto &m = sched.measurements[rng.below(sched.measurements.size())];
        f.step = m.step;
        f.qubit = m.qubit;
        f.flip = true;
        return f;
    }
    const auto &step = sched.steps[rng.below(sched.steps.size())];
    const auto &op = step.ops[rng.below(step.ops.size())];
    f.step = step.index;
    f.qubit = op.q0;
    f.pauli = "XYZ"[rng.below(3)];
    if (op.q1 >= 0) {
        f.partner_pauli = "IXYZ"[rng.below(4)];
    }
    return f;
}

SyndromeSequence xor_of(const SyndromeSequence &a, const SyndromeSequence &b) {
    auto out = a;
    for (std::size_t t = 0; t < a.delta_s.size(); ++t) {
        out.delta_s[t] ^= b.delta_s[t];
        out.s_flag[t] ^= b.s_flag[t];
    }
    for (std::size_t k = 0; k < a.finals.size(); ++k) {
        out.finals[k].delta_f ^= b.finals[k].delta_f;
        out.finals[k].p_true = a.finals[k].p_true != b.finals[k].p_true;
    }
    return out;
}

}  // namespace

class NoiselessExtraction : public ::testing::TestWithParam<std::tuple<int, ResetMode, Basis>> {};

TEST_P(NoiselessExtraction, EverythingIsZero) {
    const auto [d, mode, basis] = GetParam();
    const auto L = build_layout(d);
    ExperimentRunner runner(L, mode, basis);
    SyndromeExtractor ex(L, mode, basis);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        CounterRng rng(seed, 0);
        const auto seq = ex.extract(runner.run(30, NoiseParams::uniform(0.0), rng, nullptr, {1, 7, 30}));
        ASSERT_EQ(seq.finals.size(), 3u);
        expect_all_zero(seq);
    }
}

INSTANTIATE_TEST_SUITE_P(All, NoiselessExtraction,
                         ::testing::Combine(::testing::Values(3, 5, 7),
                                            ::testing::Values(ResetMode::kReset, ResetMode::kNoReset),
                                            ::testing::Values(Basis::kZ, Basis::kX)));

TEST(Extraction, MeasurementFlipGivesIncrementPair) {
    const auto L = build_layout(3);
    ExperimentRunner runner(L, ResetMode::kReset, Basis::kZ);
    SyndromeExtractor ex(L, ResetMode::kReset, Basis::kZ);
    const int nt = L.n_tiles();
    for (int check = 0; check < 2 * nt; ++check) {
        const auto role = check < nt ? MeasureRole::kXCheck : MeasureRole::kZCheck;
        const auto slot = measure_slot(runner.cycle_schedule(), role, check % nt);
        const int t = 3;
        const auto seq = run_forced(runner, ex, 6, {{t, slot.step, slot.qubit, 'I', 'I', true}});
        for (int c = 1; c <= 6; ++c) {
            const auto &ds = seq.delta_s[static_cast<std::size_t>(c - 1)];
            for (int i = 0; i < 2 * nt; ++i) {
                EXPECT_EQ(ds[static_cast<std::size_t>(i)], i == check && (c == t || c == t + 1))
                    << "check " << check << " cycle " << c << " bit " << i;
            }
            EXPECT_TRUE(seq.s_flag[static_cast<std::size_t>(c - 1)].none());
        }
        EXPECT_TRUE(seq.delta_f().none());
        EXPECT_FALSE(seq.p_true());
    }
}

TEST(Extraction, LogicalOperatorMidRunFlipsParityOnly) {
    for (auto mode : {ResetMode::kReset, ResetMode::kNoReset}) {
        const auto L = build_layout(5);
        ExperimentRunner runner(L, mode, Basis::kZ);
        SyndromeExtractor ex(L, mode, Basis::kZ);
        std::vector<ForcedFault> forced;
        for (int q : L.logical_x.ones()) {
            forced.push_back({2, 0, q, 'X', 'I', false});
        }
        const auto seq = run_forced(runner, ex, 4, forced);
        for (const auto &ds : seq.delta_s) {
            EXPECT_TRUE(ds.none());
        }
        EXPECT_TRUE(seq.delta_f().none());
        EXPECT_TRUE(seq.p_true());
    }
}

TEST(Extraction, ReadoutFlipGivesTileIndicator) {
    const auto L = build_layout(3);
    ExperimentRunner runner(L, ResetMode::kReset, Basis::kZ);
    SyndromeExtractor ex(L, ResetMode::kReset, Basis::kZ);
    for (int q = 0; q < L.n_data; ++q) {
        const auto slot = measure_slot(runner.readout_schedule(), MeasureRole::kData, q);
        const auto seq = run_forced(runner, ex, 2, {{3, slot.step, q, 'I', 'I', true}});
        for (int t = 0; t < L.n_tiles(); ++t) {
            EXPECT_EQ(seq.delta_f()[static_cast<std::size_t>(t)],
                      L.z_stabilizers[static_cast<std::size_t>(t)].get(static_cast<std::size_t>(q)));
        }
    }
}

TEST(Extraction, FlagLeftExcitedIsCompensated) {
    const auto L = build_layout(5);
    ExperimentRunner runner(L, ResetMode::kNoReset, Basis::kZ);
    SyndromeExtractor ex(L, ResetMode::kNoReset, Basis::kZ);
    const int nt = L.n_tiles();
    for (int k = 0; k < 2 * nt; ++k) {
        const auto role = k < nt ? MeasureRole::kXFlag : MeasureRole::kZFlag;
        const auto slot = measure_slot(runner.cycle_schedule(), role, k % nt);
        // X just before the flag readout: it reads 1 and stays excited.
        const auto seq = run_forced(runner, ex, 6, {{2, slot.step - 1, slot.qubit, 'X', 'I', false}});
        for (int c = 1; c <= 6; ++c) {
            EXPECT_TRUE(seq.delta_s[static_cast<std::size_t>(c - 1)].none()) << "flag " << k << " cycle " << c;
            const auto &sf = seq.s_flag[static_cast<std::size_t>(c - 1)];
            for (int i = 0; i < 2 * nt; ++i) {
                EXPECT_EQ(sf[static_cast<std::size_t>(i)], c == 2 && i == k) << "flag " << k << " cycle " << c;
            }
        }
        EXPECT_TRUE(seq.delta_f().none());
        EXPECT_FALSE(seq.p_true());
    }
}

class Linearity : public ::testing::TestWithParam<std::tuple<int, ResetMode>> {};

TEST_P(Linearity, IncrementsOfUnionAreXor) {
    const auto [d, mode] = GetParam();
    const auto L = build_layout(d);
    ExperimentRunner runner(L, mode, Basis::kZ);
    SyndromeExtractor ex(L, mode, Basis::kZ);
    CounterRng rng(static_cast<std::uint64_t>(d), 77);
    const int cycles = 4;
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<ForcedFault> f1, f2;
        for (int k = 0; k < 1 + static_cast<int>(rng.below(3)); ++k) {
            f1.push_back(random_fault(runner, cycles, rng));
        }
        for (int k = 0; k < 1 + static_cast<int>(rng.below(3)); ++k) {
            f2.push_back(random_fault(runner, cycles, rng));
        }
        auto both = f1;
        both.insert(both.end(), f2.begin(), f2.end());
        const auto a = run_forced(runner, ex, cycles, f1, trial);
        const auto b = run_forced(runner, ex, cycles, f2, trial);
        const auto ab = run_forced(runner, ex, cycles, both, trial);
        EXPECT_EQ(ab, xor_of(a, b)) << "trial " << trial;
    }
}

INSTANTIATE_TEST_SUITE_P(All, Linearity,
                         ::testing::Combine(::testing::Values(3, 5),
                                            ::testing::Values(ResetMode::kReset, ResetMode::kNoReset)));

TEST(Compensation, RejectsResetSchedule) {
    const auto L = build_layout(3);
    EXPECT_THROW(build_compensation_matrices(L, build_cycle_schedule(L, ResetMode::kReset)), std::invalid_argument);
}

TEST(Compensation, ZeroStateHasZeroResponse) {
    const auto L = build_layout(3);
    const auto c = build_compensation_matrices(L, build_cycle_schedule(L, ResetMode::kNoReset));
    const BitVector zero(static_cast<std::size_t>(6 * L.n_tiles()));
    EXPECT_TRUE(CompensationMatrices::apply(c.m_m, zero).none());
    EXPECT_TRUE(CompensationMatrices::apply(c.m_f, zero).none());
    EXPECT_TRUE(CompensationMatrices::apply(c.m_s, zero).none());
}

TEST(Compensation, ExcitedFlagReappears) {
    const auto L = build_layout(3);
    const int nc = L.n_checks(), nt = L.n_tiles();
    const auto c = build_compensation_matrices(L, build_cycle_schedule(L, ResetMode::kNoReset));
    for (int j = 0; j < nt; ++j) {
        // The Z-block readout is what the flag carries; its X-block readout
        // of the next cycle sees it first.
        BitVector d(static_cast<std::size_t>(3 * nc));
        d.set(static_cast<std::size_t>(nc + nt + j));
        EXPECT_TRUE(CompensationMatrices::apply(c.m_f, d)[static_cast<std::size_t>(j)]);
        // X-block readouts are overwritten within the cycle.
        BitVector x_only(static_cast<std::size_t>(3 * nc));
        x_only.set(static_cast<std::size_t>(nc + j));
        EXPECT_TRUE(CompensationMatrices::apply(c.m_f, x_only).none());
        EXPECT_TRUE(CompensationMatrices::apply(c.m_m, x_only).none());
        // ...and feed the Z block of the same cycle instead.
        BitVector x(static_cast<std::size_t>(2 * nc));
        x.set(static_cast<std::size_t>(nc + j));
        EXPECT_TRUE(CompensationMatrices::apply(c.k_f, x).any());
        BitVector z_only(static_cast<std::size_t>(2 * nc));
        z_only.set(static_cast<std::size_t>(nc + nt + j));
        EXPECT_TRUE(CompensationMatrices::apply(c.k_f, z_only).none());
    }
}

TEST(Compensation, RowsAreLocal) {
    for (int d : {3, 5, 7}) {
        const auto L = build_layout(d);
        const auto c = build_compensation_matrices(L, build_cycle_schedule(L, ResetMode::kNoReset));
        EXPECT_EQ(static_cast<int>(c.m_f.size()), L.n_checks());
        EXPECT_LE(c.max_row_support(), L.max_tile_weight() + 2) << "d=" << d;
    }
}

TEST(FinalParity, GaugeIndependent) {
    const auto L = build_layout(5);
    const auto pe = pure_error_basis(L);
    CounterRng rng(12, 0);
    const BitVector s(static_cast<std::size_t>(L.n_checks()));
    for (int trial = 0; trial < 50; ++trial) {
        BitVector bits(static_cast<std::size_t>(L.n_data));
        for (int q = 0; q < L.n_data; ++q) {
            bits.set(static_cast<std::size_t>(q), rng.bernoulli(0.5));
        }
        const auto base = compute_final_increment_and_parity(L, pe, Basis::kZ, bits, s);
        for (const auto &x : L.x_stabilizers) {
            const auto g = compute_final_increment_and_parity(L, pe, Basis::kZ, bits ^ x, s);
            EXPECT_EQ(g.delta_f, base.delta_f);
            EXPECT_EQ(g.p_true, base.p_true);
        }
        const auto flipped = compute_final_increment_and_parity(L, pe, Basis::kZ, bits ^ L.logical_x, s);
        EXPECT_EQ(flipped.delta_f, base.delta_f);
        EXPECT_NE(flipped.p_true, base.p_true);
    }
}
