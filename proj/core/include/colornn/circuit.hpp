#pragma once

#include <string>
#include <vector>

#include "colornn/code.hpp"

namespace colornn {

enum class OpKind : std::uint8_t { kIdle, kPrep, kHadamard, kCphase, kMeasure, kReset };

struct Operation {
    OpKind kind = OpKind::kIdle;
    int q0 = -1;
    int q1 = -1;  // second qubit of a CPHASE, -1 otherwise
    bool operator==(const Operation &) const = default;
};

struct GateStep {
    int index = 0;
    std::vector<Operation> ops;
};

enum class ScheduleKind { kInit, kCycle, kFinalReadout };
enum class ResetMode { kReset, kNoReset };
enum class Basis { kX, kZ };

/// What a measurement outcome means. X-block results come first in every
/// per-cycle record, matching the syndrome bit order of CodeLayout.
enum class MeasureRole { kXCheck, kXFlag, kZCheck, kZFlag, kData };

struct MeasurementSlot {
    int step = 0;
    int qubit = 0;
    MeasureRole role = MeasureRole::kData;
    int index = 0;  // tile for check/flag roles, data qubit for kData
};

struct CircuitSchedule {
    std::vector<GateStep> steps;
    int n0_steps_per_cycle = 20;
    ScheduleKind kind = ScheduleKind::kCycle;
    ResetMode reset_mode = ResetMode::kReset;
    Basis basis = Basis::kZ;
    int num_qubits = 0;
    /// In execution order.
    std::vector<MeasurementSlot> measurements;
};

inline constexpr int kStepsPerCycle = 20;
inline constexpr int kStepsPerBlock = 10;

/// One error-correction cycle: X-check block then Z-check block, 10 steps each.
///
/// Per block, with a the ancilla and f the flag of every tile:
///   0 RESET a,f         5 CZ(a,dir4) CZ(f,dir5)
///   1 H a,f (+H data)   6 H f, CZ(a,dir1)
///   2 CZ(a,f)           7 CZ(a,f) (+H data)
///   3 H f, CZ(a,dir0)   8 H a,f
///   4 CZ(a,dir2) CZ(f,dir3)   9 MEASURE a,f
/// The ancilla/flag pair holds a Bell state while touching the data, so an
/// X or Y fault on either qubit during that window flips the flag outcome.
/// Data Hadamards appear only in the X block. NO_RESET replaces step 0 with idles.
CircuitSchedule build_cycle_schedule(const CodeLayout &layout, ResetMode reset_mode);

/// Transversal data readout; basis X adds a Hadamard layer first.
CircuitSchedule build_final_readout(const CodeLayout &layout, Basis basis);

/// Single step preparing every qubit.
CircuitSchedule build_init_schedule(const CodeLayout &layout);

/// Propagated effect of one Pauli fault on an ancilla or flag qubit.
struct AncillaFaultEffect {
    int qubit = 0;
    int tile = 0;
    int step = 0;        // fault occurs right after this step's operation
    char pauli = 'X';
    PauliOperator data_error;  // at the end of the cycle
    int reduced_weight = 0;    // min weight modulo the tile's own stabilizers
    bool flagged = false;      // a flag outcome of the same tile flipped in this cycle
};

/// Enumerates every single X/Y/Z fault on every ancilla and flag qubit after
/// every step of a cycle schedule and propagates it to the end of the cycle.
std::vector<AncillaFaultEffect> analyze_ancilla_faults(const CodeLayout &layout, const CircuitSchedule &schedule);

struct ScheduleReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/// Structural and hook-containment audit. An unflagged ancilla fault whose
/// data error has reduced weight >= 2 is a violation.
ScheduleReport validate_schedule(const CodeLayout &layout, const CircuitSchedule &schedule);

/// One line per operation: "<step> <OP> <q0> [q1]".
std::string dump_schedule(const CircuitSchedule &schedule);

const char *op_name(OpKind kind);

}  // namespace colornn
