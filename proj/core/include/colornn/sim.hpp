#pragma once

#include <cstdint>
#include <vector>

#include "colornn/circuit.hpp"
#include "colornn/code.hpp"
#include "colornn/noise.hpp"
#include "colornn/tableau.hpp"

namespace colornn {

/// Which schedule instance a fault belongs to: 0 = initial preparation,
/// 1..T = cycles, T+1 = final readout.
struct LoggedFault {
    int segment = 0;
    Fault fault;
    bool operator==(const LoggedFault &) const = default;
};

/// A fault placed by hand. `qubit` selects the operation in `step`; for a
/// CPHASE `pauli` lands on `qubit` and `partner_pauli` on the other qubit.
struct ForcedFault {
    int segment = 0;
    int step = 0;
    int qubit = 0;
    char pauli = 'I';
    char partner_pauli = 'I';
    bool flip = false;
};

struct Readout {
    int cycle = 0;
    BitVector data_bits;
    bool operator==(const Readout &) const = default;
};

struct RawRun {
    int cycles = 0;
    /// Per cycle, X-check results then Z-check results (2 * n_tiles bits).
    std::vector<BitVector> ancilla_bits;
    /// Per cycle, X-block flags then Z-block flags (2 * n_tiles bits).
    std::vector<BitVector> flag_bits;
    /// Readouts in increasing cycle order; the last one is at `cycles`.
    std::vector<Readout> readouts;
    std::vector<LoggedFault> fault_log;
    std::uint64_t seed = 0;

    const BitVector &final_data_bits() const { return readouts.back().data_bits; }
    bool operator==(const RawRun &) const = default;
};

/// |0_L> on the data qubits with + signs on every tile check and on
/// logical Z; ancilla and flag qubits in |0>.
Tableau prepare_logical_zero(const CodeLayout &layout);

/// |+_L>: + signs on every tile check and on logical X.
Tableau prepare_logical_plus(const CodeLayout &layout);

/// Applies one schedule operation. Returns the outcome for MEASURE.
bool apply_gate(Tableau &tableau, const Operation &op, CounterRng *rng);

/// Reusable experiment driver holding the schedules for one layout.
class ExperimentRunner {
public:
    ExperimentRunner(const CodeLayout &layout, ResetMode reset_mode, Basis final_basis);

    /// Preparation (with preparation faults), `cycles` noisy cycles and a
    /// noisy final readout. `readout_cycles` (ascending, each <= cycles)
    /// adds branched readouts taken from copies of the state after those
    /// cycles; the readout at `cycles` is always present.
    RawRun run(int cycles, const NoiseParams &noise, CounterRng &rng, const std::vector<ForcedFault> *forced = nullptr,
               const std::vector<int> &readout_cycles = {}) const;

    const CodeLayout &layout() const { return layout_; }
    const CircuitSchedule &init_schedule() const { return init_; }
    const CircuitSchedule &cycle_schedule() const { return cycle_; }
    const CircuitSchedule &readout_schedule() const { return readout_; }
    ResetMode reset_mode() const { return cycle_.reset_mode; }
    Basis final_basis() const { return readout_.basis; }

private:
    void execute(Tableau &tab, const CircuitSchedule &sched, int segment, const std::vector<Fault> &faults,
                 CounterRng &rng, std::vector<bool> &outcomes, std::vector<LoggedFault> *log) const;
    std::vector<Fault> faults_for(const CircuitSchedule &sched, int segment, const NoiseParams &noise, CounterRng &rng,
                                  const std::vector<ForcedFault> *forced) const;
    BitVector readout(const Tableau &tab, int segment, const NoiseParams &noise, CounterRng &rng,
                      const std::vector<ForcedFault> *forced, std::vector<LoggedFault> *log) const;

    CodeLayout layout_;
    CircuitSchedule init_;
    CircuitSchedule cycle_;
    CircuitSchedule readout_;
    Tableau initial_state_;  // |0_L> for Z readout, |+_L> for X readout
};

/// One-shot convenience wrapper; the sample stream is CounterRng(seed, 0).
RawRun run_experiment(const CodeLayout &layout, int cycles, const NoiseParams &noise, std::uint64_t seed,
                      ResetMode reset_mode, Basis final_basis = Basis::kZ);

}  // namespace colornn
