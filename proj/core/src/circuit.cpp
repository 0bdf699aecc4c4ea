#include "colornn/circuit.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace colornn {

const char *op_name(OpKind kind) {
    switch (kind) {
        case OpKind::kIdle: return "IDLE";
        case OpKind::kPrep: return "PREP";
        case OpKind::kHadamard: return "H";
        case OpKind::kCphase: return "CZ";
        case OpKind::kMeasure: return "MEASURE";
        case OpKind::kReset: return "RESET";
    }
    return "?";
}

namespace {

// Collects operations for one step and fills idles for untouched qubits.
class StepBuilder {
public:
    StepBuilder(int index, int num_qubits) : index_(index), busy_(static_cast<std::size_t>(num_qubits), false) {}

    void add(OpKind kind, int q0, int q1 = -1) {
        claim(q0);
        if (q1 >= 0) {
            claim(q1);
        }
        ops_.push_back({kind, q0, q1});
    }

    GateStep finish() {
        for (std::size_t q = 0; q < busy_.size(); ++q) {
            if (!busy_[q]) {
                ops_.push_back({OpKind::kIdle, static_cast<int>(q), -1});
            }
        }
        return GateStep{index_, std::move(ops_)};
    }

private:
    void claim(int q) {
        if (q < 0 || static_cast<std::size_t>(q) >= busy_.size()) {
            throw std::logic_error("schedule construction: qubit index out of range");
        }
        if (busy_[static_cast<std::size_t>(q)]) {
            throw std::logic_error(fmt::format("schedule construction: qubit {} used twice in step {}", q, index_));
        }
        busy_[static_cast<std::size_t>(q)] = true;
    }

    int index_;
    std::vector<bool> busy_;
    std::vector<Operation> ops_;
};

struct CornerSlot {
    int local_step;
    bool on_flag;
    int direction;
};

// Ancilla takes directions 0,2,4,1; flag takes 3,5. Each honeycomb vertex is
// seen from its three tiles at directions of one parity class, and those get
// distinct steps, so no data qubit is used twice in a step.
constexpr CornerSlot kCornerSlots[] = {
    {3, false, 0}, {4, false, 2}, {5, false, 4}, {6, false, 1}, {4, true, 3}, {5, true, 5},
};

void append_block(std::vector<GateStep> &steps, std::vector<MeasurementSlot> &measurements,
                  const CodeLayout &layout, ResetMode reset_mode, bool x_block, int offset) {
    const int nq = layout.total_qubits;
    for (int s = 0; s < kStepsPerBlock; ++s) {
        StepBuilder b(offset + s, nq);
        for (int t = 0; t < layout.n_tiles(); ++t) {
            const auto &tile = layout.tiles[static_cast<std::size_t>(t)];
            const int a = tile.ancilla;
            const int f = tile.flag;
            switch (s) {
                case 0:
                    if (reset_mode == ResetMode::kReset) {
                        b.add(OpKind::kReset, a);
                        b.add(OpKind::kReset, f);
                    }
                    break;
                case 1:
                case 8:
                    b.add(OpKind::kHadamard, a);
                    b.add(OpKind::kHadamard, f);
                    break;
                case 2:
                case 7:
                    b.add(OpKind::kCphase, a, f);
                    break;
                case 3:
                case 6:
                    b.add(OpKind::kHadamard, f);
                    break;
                case 9:
                    b.add(OpKind::kMeasure, a);
                    b.add(OpKind::kMeasure, f);
                    measurements.push_back({offset + s, a, x_block ? MeasureRole::kXCheck : MeasureRole::kZCheck, t});
                    measurements.push_back({offset + s, f, x_block ? MeasureRole::kXFlag : MeasureRole::kZFlag, t});
                    break;
                default:
                    break;
            }
            for (const auto &slot : kCornerSlots) {
                if (slot.local_step != s) {
                    continue;
                }
                const int q = tile.corner[static_cast<std::size_t>(slot.direction)];
                if (q >= 0) {
                    b.add(OpKind::kCphase, slot.on_flag ? f : a, q);
                }
            }
        }
        if (x_block && (s == 1 || s == 7)) {
            for (int q = 0; q < layout.n_data; ++q) {
                b.add(OpKind::kHadamard, q);
            }
        }
        steps.push_back(b.finish());
    }
}

}  // namespace

CircuitSchedule build_cycle_schedule(const CodeLayout &layout, ResetMode reset_mode) {
    CircuitSchedule sched;
    sched.kind = ScheduleKind::kCycle;
    sched.reset_mode = reset_mode;
    sched.num_qubits = layout.total_qubits;
    append_block(sched.steps, sched.measurements, layout, reset_mode, true, 0);
    append_block(sched.steps, sched.measurements, layout, reset_mode, false, kStepsPerBlock);
    if (static_cast<int>(sched.steps.size()) != kStepsPerCycle) {
        throw std::logic_error("build_cycle_schedule: gate packing does not fit 20 steps");
    }
    return sched;
}

CircuitSchedule build_final_readout(const CodeLayout &layout, Basis basis) {
    CircuitSchedule sched;
    sched.kind = ScheduleKind::kFinalReadout;
    sched.basis = basis;
    sched.num_qubits = layout.total_qubits;
    int step = 0;
    if (basis == Basis::kX) {
        StepBuilder b(step++, layout.total_qubits);
        for (int q = 0; q < layout.n_data; ++q) {
            b.add(OpKind::kHadamard, q);
        }
        sched.steps.push_back(b.finish());
    }
    StepBuilder b(step, layout.total_qubits);
    for (int q = 0; q < layout.n_data; ++q) {
        b.add(OpKind::kMeasure, q);
        sched.measurements.push_back({step, q, MeasureRole::kData, q});
    }
    sched.steps.push_back(b.finish());
    return sched;
}

CircuitSchedule build_init_schedule(const CodeLayout &layout) {
    CircuitSchedule sched;
    sched.kind = ScheduleKind::kInit;
    sched.num_qubits = layout.total_qubits;
    StepBuilder b(0, layout.total_qubits);
    for (int q = 0; q < layout.total_qubits; ++q) {
        b.add(OpKind::kPrep, q);
    }
    sched.steps.push_back(b.finish());
    return sched;
}

namespace {

// Heisenberg-picture Pauli frame used for fault propagation.
struct Frame {
    BitVector x;
    BitVector z;

    explicit Frame(int n) : x(static_cast<std::size_t>(n)), z(static_cast<std::size_t>(n)) {}

    // Returns true when an operation is a measurement whose outcome this frame flips.
    bool apply(const Operation &op) {
        const auto a = static_cast<std::size_t>(op.q0);
        switch (op.kind) {
            case OpKind::kIdle:
                return false;
            case OpKind::kHadamard: {
                const bool xa = x.get(a);
                x.set(a, z.get(a));
                z.set(a, xa);
                return false;
            }
            case OpKind::kCphase: {
                const auto b = static_cast<std::size_t>(op.q1);
                if (x.get(a)) {
                    z.flip(b);
                }
                if (x.get(b)) {
                    z.flip(a);
                }
                return false;
            }
            case OpKind::kMeasure:
                return x.get(a);
            case OpKind::kReset:
            case OpKind::kPrep:
                x.set(a, false);
                z.set(a, false);
                return false;
        }
        return false;
    }
};

int reduced_weight(const CodeLayout &layout, const PauliOperator &err, int tile) {
    const auto &xs = layout.x_stabilizers[static_cast<std::size_t>(tile)];
    const auto &zs = layout.z_stabilizers[static_cast<std::size_t>(tile)];
    int best = static_cast<int>(err.weight());
    for (int m = 1; m < 4; ++m) {
        PauliOperator p = err;
        if (m & 1) {
            p.x ^= xs;
        }
        if (m & 2) {
            p.z ^= zs;
        }
        best = std::min(best, static_cast<int>(p.weight()));
    }
    return best;
}

}  // namespace

std::vector<AncillaFaultEffect> analyze_ancilla_faults(const CodeLayout &layout, const CircuitSchedule &schedule) {
    std::vector<int> tile_of(static_cast<std::size_t>(layout.total_qubits), -1);
    std::vector<bool> is_flag(static_cast<std::size_t>(layout.total_qubits), false);
    for (int t = 0; t < layout.n_tiles(); ++t) {
        const auto &tile = layout.tiles[static_cast<std::size_t>(t)];
        tile_of[static_cast<std::size_t>(tile.ancilla)] = t;
        tile_of[static_cast<std::size_t>(tile.flag)] = t;
        is_flag[static_cast<std::size_t>(tile.flag)] = true;
    }
    const auto n_data = static_cast<std::size_t>(layout.n_data);

    std::vector<AncillaFaultEffect> out;
    for (std::size_t s = 0; s < schedule.steps.size(); ++s) {
        for (int q = layout.n_data; q < layout.total_qubits; ++q) {
            const int tile = tile_of[static_cast<std::size_t>(q)];
            for (char pauli : {'X', 'Y', 'Z'}) {
                Frame frame(layout.total_qubits);
                if (pauli != 'Z') {
                    frame.x.set(static_cast<std::size_t>(q));
                }
                if (pauli != 'X') {
                    frame.z.set(static_cast<std::size_t>(q));
                }
                bool flagged = false;
                for (std::size_t s2 = s + 1; s2 < schedule.steps.size(); ++s2) {
                    for (const auto &op : schedule.steps[s2].ops) {
                        const bool flipped = frame.apply(op);
                        if (flipped && op.kind == OpKind::kMeasure && tile_of[static_cast<std::size_t>(op.q0)] == tile &&
                            is_flag[static_cast<std::size_t>(op.q0)]) {
                            flagged = true;
                        }
                        if (op.kind == OpKind::kMeasure && tile_of[static_cast<std::size_t>(op.q0)] >= 0) {
                            // The post-measurement state is the recorded outcome, which the
                            // syndrome extraction compensates without reset.
                            frame.x.set(static_cast<std::size_t>(op.q0), false);
                            frame.z.set(static_cast<std::size_t>(op.q0), false);
                        }
                    }
                }
                AncillaFaultEffect eff;
                eff.qubit = q;
                eff.tile = tile;
                eff.step = static_cast<int>(s);
                eff.pauli = pauli;
                eff.data_error = PauliOperator(frame.x.slice(0, n_data), frame.z.slice(0, n_data));
                eff.reduced_weight = reduced_weight(layout, eff.data_error, tile);
                eff.flagged = flagged;
                out.push_back(std::move(eff));
            }
        }
    }
    return out;
}

ScheduleReport validate_schedule(const CodeLayout &layout, const CircuitSchedule &schedule) {
    ScheduleReport report;
    auto &v = report.violations;
    const int nq = layout.total_qubits;

    if (schedule.kind == ScheduleKind::kCycle && static_cast<int>(schedule.steps.size()) != kStepsPerCycle) {
        v.push_back(fmt::format("cycle has {} steps, expected {}", schedule.steps.size(), kStepsPerCycle));
    }

    std::vector<int> tile_of(static_cast<std::size_t>(nq), -1);
    for (int t = 0; t < layout.n_tiles(); ++t) {
        const auto &tile = layout.tiles[static_cast<std::size_t>(t)];
        tile_of[static_cast<std::size_t>(tile.ancilla)] = t;
        tile_of[static_cast<std::size_t>(tile.flag)] = t;
    }
    auto in_tile = [&](int q, int t) {
        if (q < layout.n_data) {
            const auto &sup = layout.tiles[static_cast<std::size_t>(t)].support;
            return std::binary_search(sup.begin(), sup.end(), q);
        }
        return tile_of[static_cast<std::size_t>(q)] == t;
    };

    for (std::size_t s = 0; s < schedule.steps.size(); ++s) {
        std::vector<int> uses(static_cast<std::size_t>(nq), 0);
        for (const auto &op : schedule.steps[s].ops) {
            for (int q : {op.q0, op.q1}) {
                if (q == -1) {
                    continue;
                }
                if (q < 0 || q >= nq) {
                    v.push_back(fmt::format("step {}: qubit {} out of range", s, q));
                    continue;
                }
                ++uses[static_cast<std::size_t>(q)];
            }
            if (op.kind == OpKind::kCphase) {
                const bool a_anc = op.q0 >= layout.n_data;
                const bool b_anc = op.q1 >= layout.n_data;
                bool edge = false;
                if (a_anc && b_anc) {
                    edge = tile_of[static_cast<std::size_t>(op.q0)] == tile_of[static_cast<std::size_t>(op.q1)];
                } else if (a_anc != b_anc) {
                    const int anc = a_anc ? op.q0 : op.q1;
                    const int dat = a_anc ? op.q1 : op.q0;
                    edge = in_tile(dat, tile_of[static_cast<std::size_t>(anc)]);
                }
                if (!edge) {
                    v.push_back(fmt::format("step {}: CZ({}, {}) is not a layout edge", s, op.q0, op.q1));
                }
            }
            if (op.kind == OpKind::kReset && schedule.reset_mode == ResetMode::kNoReset) {
                v.push_back(fmt::format("step {}: RESET on qubit {} in no-reset mode", s, op.q0));
            }
        }
        for (int q = 0; q < nq; ++q) {
            const int u = uses[static_cast<std::size_t>(q)];
            if (u != 1) {
                v.push_back(fmt::format("step {}: qubit {} appears in {} operations", s, q, u));
            }
        }
    }

    if (schedule.kind != ScheduleKind::kCycle) {
        return report;
    }

    // A measured ancilla must see a RESET before its next non-idle operation,
    // including wrap-around into the next cycle.
    if (schedule.reset_mode == ResetMode::kReset) {
        for (int q = layout.n_data; q < nq; ++q) {
            std::vector<OpKind> timeline;
            for (const auto &step : schedule.steps) {
                for (const auto &op : step.ops) {
                    if ((op.q0 == q || op.q1 == q) && op.kind != OpKind::kIdle) {
                        timeline.push_back(op.kind);
                    }
                }
            }
            const std::size_t n = timeline.size();
            for (std::size_t i = 0; i < n; ++i) {
                if (timeline[i] != OpKind::kMeasure) {
                    continue;
                }
                const OpKind next = timeline[(i + 1) % n];
                if (next != OpKind::kReset) {
                    v.push_back(fmt::format("qubit {} is reused after measurement without RESET", q));
                }
            }
        }
    }

    for (const auto &eff : analyze_ancilla_faults(layout, schedule)) {
        if (eff.reduced_weight >= 2 && !eff.flagged) {
            v.push_back(fmt::format("hook: {} on qubit {} after step {} spreads to {} unflagged (weight {})",
                                    eff.pauli, eff.qubit, eff.step, eff.data_error.to_string(), eff.reduced_weight));
        }
    }
    return report;
}

std::string dump_schedule(const CircuitSchedule &schedule) {
    std::ostringstream os;
    for (const auto &step : schedule.steps) {
        for (const auto &op : step.ops) {
            os << step.index << ' ' << op_name(op.kind) << ' ' << op.q0;
            if (op.q1 >= 0) {
                os << ' ' << op.q1;
            }
            os << '\n';
        }
    }
    return os.str();
}

}  // namespace colornn
