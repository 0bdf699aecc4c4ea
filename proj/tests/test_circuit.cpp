#include <gtest/gtest.h>

#include <set>

#include "colornn/circuit.hpp"
#include "print.hpp"

using namespace colornn;

namespace {

int count_kind(const CircuitSchedule &s, OpKind k) {
    int n = 0;
    for (const auto &st : s.steps) {
        for (const auto &op : st.ops) {
            n += op.kind == k;
        }
    }
    return n;
}

}  // namespace

class CycleTest : public ::testing::TestWithParam<std::tuple<int, ResetMode>> {};

TEST_P(CycleTest, EveryQubitOncePerStep) {
    const auto [d, mode] = GetParam();
    const auto L = build_layout(d);
    const auto s = build_cycle_schedule(L, mode);
    ASSERT_EQ(static_cast<int>(s.steps.size()), kStepsPerCycle);
    for (const auto &st : s.steps) {
        std::vector<int> seen(static_cast<std::size_t>(L.total_qubits), 0);
        for (const auto &op : st.ops) {
            ++seen[static_cast<std::size_t>(op.q0)];
            if (op.q1 >= 0) {
                ++seen[static_cast<std::size_t>(op.q1)];
            }
        }
        for (int c : seen) {
            EXPECT_EQ(c, 1);
        }
    }
}

TEST_P(CycleTest, ValidatorAcceptsBuiltSchedule) {
    const auto [d, mode] = GetParam();
    const auto L = build_layout(d);
    const auto report = validate_schedule(L, build_cycle_schedule(L, mode));
    EXPECT_TRUE(report.ok()) << (report.violations.empty() ? "" : report.violations.front());
}

TEST_P(CycleTest, HookErrorsAreFlagged) {
    const auto [d, mode] = GetParam();
    const auto L = build_layout(d);
    const auto effects = analyze_ancilla_faults(L, build_cycle_schedule(L, mode));
    ASSERT_FALSE(effects.empty());
    for (const auto &e : effects) {
        // Modulo the tile's own stabilizer nothing exceeds half its weight.
        EXPECT_LE(2 * e.reduced_weight, static_cast<int>(L.tiles[static_cast<std::size_t>(e.tile)].support.size()));
        if (e.reduced_weight >= 2) {
            EXPECT_TRUE(e.flagged) << "qubit " << e.qubit << " step " << e.step << " " << e.pauli;
        }
    }
}

TEST_P(CycleTest, MeasurementsCoverEveryCheckAndFlag) {
    const auto [d, mode] = GetParam();
    const auto L = build_layout(d);
    const auto s = build_cycle_schedule(L, mode);
    std::set<std::pair<int, int>> roles;
    for (const auto &m : s.measurements) {
        roles.insert({static_cast<int>(m.role), m.index});
    }
    EXPECT_EQ(static_cast<int>(roles.size()), 4 * L.n_tiles());
    EXPECT_EQ(static_cast<int>(s.measurements.size()), 4 * L.n_tiles());
}

INSTANTIATE_TEST_SUITE_P(All, CycleTest,
                         ::testing::Combine(::testing::Values(3, 5, 7),
                                            ::testing::Values(ResetMode::kReset, ResetMode::kNoReset)));

TEST(Cycle, EntanglingGateCountsPerTile) {
    const auto L = build_layout(3);
    const auto s = build_cycle_schedule(L, ResetMode::kReset);
    for (int block = 0; block < 2; ++block) {
        for (const auto &tile : L.tiles) {
            int data_cz = 0, af_cz = 0;
            for (int k = 0; k < kStepsPerBlock; ++k) {
                for (const auto &op : s.steps[static_cast<std::size_t>(block * kStepsPerBlock + k)].ops) {
                    if (op.kind != OpKind::kCphase) {
                        continue;
                    }
                    const bool mine = op.q0 == tile.ancilla || op.q0 == tile.flag;
                    if (!mine) {
                        continue;
                    }
                    if (op.q1 == tile.ancilla || op.q1 == tile.flag) {
                        ++af_cz;
                    } else {
                        ++data_cz;
                    }
                }
            }
            EXPECT_EQ(data_cz, static_cast<int>(tile.support.size()));
            EXPECT_EQ(af_cz, 2);
        }
    }
}

TEST(Cycle, NoResetDropsOnlyResets) {
    const auto L = build_layout(3);
    const auto r = build_cycle_schedule(L, ResetMode::kReset);
    const auto n = build_cycle_schedule(L, ResetMode::kNoReset);
    EXPECT_EQ(count_kind(r, OpKind::kReset), 2 * 2 * L.n_tiles());
    EXPECT_EQ(count_kind(n, OpKind::kReset), 0);
    for (OpKind k : {OpKind::kHadamard, OpKind::kCphase, OpKind::kMeasure}) {
        EXPECT_EQ(count_kind(r, k), count_kind(n, k));
    }
    for (std::size_t i = 0; i < r.steps.size(); ++i) {
        std::vector<Operation> a, b;
        for (const auto &op : r.steps[i].ops) {
            if (op.kind != OpKind::kReset && op.kind != OpKind::kIdle) a.push_back(op);
        }
        for (const auto &op : n.steps[i].ops) {
            if (op.kind != OpKind::kIdle) b.push_back(op);
        }
        EXPECT_EQ(a, b);
    }
}

TEST(Cycle, BlocksDifferOnlyByDataHadamards) {
    const auto L = build_layout(5);
    const auto s = build_cycle_schedule(L, ResetMode::kReset);
    for (int k = 0; k < kStepsPerBlock; ++k) {
        std::vector<Operation> xb, zb;
        for (const auto &op : s.steps[static_cast<std::size_t>(k)].ops) {
            const bool data_h = op.kind == OpKind::kHadamard && op.q0 < L.n_data;
            if (!data_h && op.kind != OpKind::kIdle) xb.push_back(op);
        }
        for (const auto &op : s.steps[static_cast<std::size_t>(kStepsPerBlock + k)].ops) {
            if (op.kind != OpKind::kIdle) zb.push_back(op);
        }
        EXPECT_EQ(xb, zb) << "step " << k;
    }
}

TEST(Validator, ReportsMissingFlagCouplings) {
    const auto L = build_layout(3);
    auto s = build_cycle_schedule(L, ResetMode::kReset);
    for (auto &st : s.steps) {
        std::vector<Operation> ops;
        for (const auto &op : st.ops) {
            if (op.kind == OpKind::kCphase && op.q0 >= L.n_data && op.q1 >= L.n_data) {
                ops.push_back({OpKind::kIdle, op.q0, -1});
                ops.push_back({OpKind::kIdle, op.q1, -1});
            } else {
                ops.push_back(op);
            }
        }
        st.ops = ops;
    }
    EXPECT_FALSE(validate_schedule(L, s).ok());
}

TEST(Validator, ReportsWrongStepCount) {
    const auto L = build_layout(3);
    auto s = build_cycle_schedule(L, ResetMode::kReset);
    s.steps.pop_back();
    EXPECT_FALSE(validate_schedule(L, s).ok());
}

TEST(Readout, ZBasis) {
    const auto L = build_layout(3);
    const auto s = build_final_readout(L, Basis::kZ);
    EXPECT_EQ(count_kind(s, OpKind::kMeasure), 7);
    EXPECT_EQ(count_kind(s, OpKind::kHadamard), 0);
}

TEST(Readout, XBasis) {
    const auto L = build_layout(3);
    const auto s = build_final_readout(L, Basis::kX);
    EXPECT_EQ(count_kind(s, OpKind::kMeasure), 7);
    EXPECT_EQ(count_kind(s, OpKind::kHadamard), 7);
    EXPECT_EQ(s.steps.size(), 2u);
}

TEST(Schedule, DumpListsSteps) {
    const auto L = build_layout(3);
    const auto text = dump_schedule(build_cycle_schedule(L, ResetMode::kReset));
    EXPECT_NE(text.find("CZ"), std::string::npos);
    EXPECT_NE(text.find("MEASURE"), std::string::npos);
}
