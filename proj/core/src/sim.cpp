#include "colornn/sim.hpp"

#include <algorithm>
#include <stdexcept>

#include "colornn/gf2.hpp"

namespace colornn {

namespace {

PauliOperator extend_x(const BitVector &support, int n_total) {
    PauliOperator p(static_cast<std::size_t>(n_total));
    for (auto q : support.ones()) {
        p.x.set(q);
    }
    return p;
}

PauliOperator extend_z(const BitVector &support, int n_total) {
    PauliOperator p(static_cast<std::size_t>(n_total));
    for (auto q : support.ones()) {
        p.z.set(q);
    }
    return p;
}

void require_independent(const CodeLayout &layout) {
    if (gf2::rank(layout.x_stabilizers) != layout.n_tiles() ||
        gf2::rank(layout.z_stabilizers) != layout.n_tiles()) {
        throw std::runtime_error("prepare_logical_state: dependent stabilizer generators");
    }
}

bool touches(const Operation &op, int q) { return op.q0 == q || op.q1 == q; }

}  // namespace

Tableau prepare_logical_zero(const CodeLayout &layout) {
    require_independent(layout);
    Tableau tab(layout.total_qubits);
    // |0...0> already fixes every Z check and logical Z at +1.
    for (const auto &xs : layout.x_stabilizers) {
        tab.measure_pauli(extend_x(xs, layout.total_qubits), nullptr, false);
    }
    return tab;
}

Tableau prepare_logical_plus(const CodeLayout &layout) {
    require_independent(layout);
    Tableau tab(layout.total_qubits);
    for (int q = 0; q < layout.n_data; ++q) {
        tab.hadamard(q);
    }
    for (const auto &zs : layout.z_stabilizers) {
        tab.measure_pauli(extend_z(zs, layout.total_qubits), nullptr, false);
    }
    return tab;
}

bool apply_gate(Tableau &tableau, const Operation &op, CounterRng *rng) {
    const int n = tableau.num_qubits();
    if (op.q0 < 0 || op.q0 >= n || (op.kind == OpKind::kCphase && (op.q1 < 0 || op.q1 >= n))) {
        throw std::invalid_argument("apply_gate: qubit out of range");
    }
    switch (op.kind) {
        case OpKind::kIdle: return false;
        case OpKind::kPrep:
        case OpKind::kReset: tableau.reset(op.q0, rng); return false;
        case OpKind::kHadamard: tableau.hadamard(op.q0); return false;
        case OpKind::kCphase: tableau.cphase(op.q0, op.q1); return false;
        case OpKind::kMeasure: return tableau.measure_z(op.q0, rng).outcome;
    }
    throw std::invalid_argument("apply_gate: unknown operation");
}

ExperimentRunner::ExperimentRunner(const CodeLayout &layout, ResetMode reset_mode, Basis final_basis)
    : layout_(layout),
      init_(build_init_schedule(layout)),
      cycle_(build_cycle_schedule(layout, reset_mode)),
      readout_(build_final_readout(layout, final_basis)),
      initial_state_(final_basis == Basis::kX ? prepare_logical_plus(layout) : prepare_logical_zero(layout)) {}

std::vector<Fault> ExperimentRunner::faults_for(const CircuitSchedule &sched, int segment, const NoiseParams &noise,
                                                CounterRng &rng, const std::vector<ForcedFault> *forced) const {
    auto faults = inject_errors(sched, noise, rng);
    if (forced == nullptr) {
        return faults;
    }
    for (const auto &ff : *forced) {
        if (ff.segment != segment) {
            continue;
        }
        if (ff.step < 0 || ff.step >= static_cast<int>(sched.steps.size())) {
            throw std::out_of_range("forced fault: step out of range");
        }
        const auto &ops = sched.steps[static_cast<std::size_t>(ff.step)].ops;
        auto it = std::find_if(ops.begin(), ops.end(), [&](const Operation &op) { return touches(op, ff.qubit); });
        if (it == ops.end()) {
            throw std::out_of_range("forced fault: qubit not in step");
        }
        Fault f;
        f.step = ff.step;
        f.op = static_cast<int>(it - ops.begin());
        f.flip = ff.flip;
        if (it->q0 == ff.qubit) {
            f.pauli0 = ff.pauli;
            f.pauli1 = ff.partner_pauli;
        } else {
            f.pauli0 = ff.partner_pauli;
            f.pauli1 = ff.pauli;
        }
        faults.push_back(f);
    }
    std::stable_sort(faults.begin(), faults.end(),
                     [](const Fault &a, const Fault &b) { return a.step != b.step ? a.step < b.step : a.op < b.op; });
    return faults;
}

void ExperimentRunner::execute(Tableau &tab, const CircuitSchedule &sched, int segment, const std::vector<Fault> &faults,
                               CounterRng &rng, std::vector<bool> &outcomes, std::vector<LoggedFault> *log) const {
    outcomes.clear();
    const bool ideal_prep = sched.kind == ScheduleKind::kInit;
    std::vector<int> meas_index;
    std::size_t next = 0;
    for (std::size_t s = 0; s < sched.steps.size(); ++s) {
        const auto &ops = sched.steps[s].ops;
        meas_index.assign(ops.size(), -1);
        for (std::size_t i = 0; i < ops.size(); ++i) {
            if (ideal_prep) {
                continue;  // the prepared code state stands in for the PREP layer
            }
            const bool bit = apply_gate(tab, ops[i], &rng);
            if (ops[i].kind == OpKind::kMeasure) {
                meas_index[i] = static_cast<int>(outcomes.size());
                outcomes.push_back(bit);
            }
        }
        for (; next < faults.size() && faults[next].step == static_cast<int>(s); ++next) {
            const auto &f = faults[next];
            const auto &op = ops[static_cast<std::size_t>(f.op)];
            if (f.flip && meas_index[static_cast<std::size_t>(f.op)] >= 0) {
                outcomes[static_cast<std::size_t>(meas_index[static_cast<std::size_t>(f.op)])].flip();
            }
            tab.apply_pauli(op.q0, f.pauli0);
            if (op.q1 >= 0) {
                tab.apply_pauli(op.q1, f.pauli1);
            }
            if (log != nullptr) {
                log->push_back({segment, f});
            }
        }
    }
}

BitVector ExperimentRunner::readout(const Tableau &tab, int segment, const NoiseParams &noise, CounterRng &rng,
                                    const std::vector<ForcedFault> *forced, std::vector<LoggedFault> *log) const {
    Tableau work = tab;
    std::vector<bool> outcomes;
    execute(work, readout_, segment, faults_for(readout_, segment, noise, rng, forced), rng, outcomes, log);
    BitVector bits(static_cast<std::size_t>(layout_.n_data));
    for (std::size_t k = 0; k < readout_.measurements.size(); ++k) {
        bits.set(static_cast<std::size_t>(readout_.measurements[k].index), outcomes[k]);
    }
    return bits;
}

RawRun ExperimentRunner::run(int cycles, const NoiseParams &noise, CounterRng &rng,
                             const std::vector<ForcedFault> *forced, const std::vector<int> &readout_cycles) const {
    if (cycles < 1) {
        throw std::invalid_argument("run: need at least one cycle");
    }
    for (std::size_t i = 0; i < readout_cycles.size(); ++i) {
        if (readout_cycles[i] < 1 || readout_cycles[i] > cycles || (i > 0 && readout_cycles[i] <= readout_cycles[i - 1])) {
            throw std::invalid_argument("run: readout cycles must be ascending within [1, cycles]");
        }
    }
    const int nt = layout_.n_tiles();
    RawRun out;
    out.cycles = cycles;
    out.ancilla_bits.reserve(static_cast<std::size_t>(cycles));
    out.flag_bits.reserve(static_cast<std::size_t>(cycles));

    Tableau tab = initial_state_;
    std::vector<bool> outcomes;
    execute(tab, init_, 0, faults_for(init_, 0, noise, rng, forced), rng, outcomes, &out.fault_log);

    std::size_t next_branch = 0;
    for (int t = 1; t <= cycles; ++t) {
        execute(tab, cycle_, t, faults_for(cycle_, t, noise, rng, forced), rng, outcomes, &out.fault_log);
        BitVector anc(static_cast<std::size_t>(2 * nt));
        BitVector flg(static_cast<std::size_t>(2 * nt));
        for (std::size_t k = 0; k < cycle_.measurements.size(); ++k) {
            const auto &slot = cycle_.measurements[k];
            switch (slot.role) {
                case MeasureRole::kXCheck: anc.set(static_cast<std::size_t>(slot.index), outcomes[k]); break;
                case MeasureRole::kZCheck: anc.set(static_cast<std::size_t>(nt + slot.index), outcomes[k]); break;
                case MeasureRole::kXFlag: flg.set(static_cast<std::size_t>(slot.index), outcomes[k]); break;
                case MeasureRole::kZFlag: flg.set(static_cast<std::size_t>(nt + slot.index), outcomes[k]); break;
                case MeasureRole::kData: break;
            }
        }
        out.ancilla_bits.push_back(std::move(anc));
        out.flag_bits.push_back(std::move(flg));
        while (next_branch < readout_cycles.size() && readout_cycles[next_branch] == t) {
            if (t < cycles) {
                CounterRng branch(rng(), static_cast<std::uint64_t>(t));
                out.readouts.push_back({t, readout(tab, cycles + 1 + t, noise, branch, nullptr, nullptr)});
            }
            ++next_branch;
        }
    }
    out.readouts.push_back({cycles, readout(tab, cycles + 1, noise, rng, forced, &out.fault_log)});
    return out;
}

RawRun run_experiment(const CodeLayout &layout, int cycles, const NoiseParams &noise, std::uint64_t seed,
                      ResetMode reset_mode, Basis final_basis) {
    ExperimentRunner runner(layout, reset_mode, final_basis);
    CounterRng rng(seed, 0);
    auto raw = runner.run(cycles, noise, rng);
    raw.seed = seed;
    return raw;
}

}  // namespace colornn
