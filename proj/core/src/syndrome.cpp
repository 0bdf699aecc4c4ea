#include "colornn/syndrome.hpp"

#include <algorithm>
#include <stdexcept>

namespace colornn {

namespace {

PauliOperator widen(const PauliOperator &p, int n_total) {
    PauliOperator out(static_cast<std::size_t>(n_total));
    for (auto q : p.x.ones()) {
        out.x.set(static_cast<std::size_t>(q));
    }
    for (auto q : p.z.ones()) {
        out.z.set(static_cast<std::size_t>(q));
    }
    return out;
}

std::size_t slot_bit(const MeasurementSlot &slot, int nt) {
    const bool z_block = slot.role == MeasureRole::kZCheck || slot.role == MeasureRole::kZFlag;
    return static_cast<std::size_t>(z_block ? nt + slot.index : slot.index);
}

bool is_flag(MeasureRole r) { return r == MeasureRole::kXFlag || r == MeasureRole::kZFlag; }

struct CycleResponse {
    BitVector m;
    BitVector m_flag;
    BitVector s_after;
};

// Qubits measured again later in the cycle are returned to |0> after their
// early readout; that carry is accounted for separately. `excite_after`
// flips the measured qubit right after that measurement slot.
CycleResponse run_noiseless_cycle(Tableau tab, const CodeLayout &layout, const CircuitSchedule &schedule,
                                  const std::vector<PauliOperator> &generators, const std::vector<int> &last_slot,
                                  int excite_after = -1) {
    const int nt = layout.n_tiles();
    CycleResponse r{BitVector(static_cast<std::size_t>(2 * nt)), BitVector(static_cast<std::size_t>(2 * nt)),
                    BitVector(static_cast<std::size_t>(2 * nt))};
    std::size_t k = 0;
    for (const auto &step : schedule.steps) {
        for (const auto &op : step.ops) {
            if (op.kind != OpKind::kMeasure) {
                apply_gate(tab, op, nullptr);
                continue;
            }
            const auto res = tab.measure_z(op.q0, nullptr);
            if (!res.deterministic) {
                throw std::logic_error("build_compensation_matrices: cycle outcome not determined by d(t-1)");
            }
            const auto &slot = schedule.measurements[k];
            (is_flag(slot.role) ? r.m_flag : r.m).set(slot_bit(slot, nt), res.outcome);
            if (last_slot[static_cast<std::size_t>(op.q0)] != static_cast<int>(k) && res.outcome) {
                tab.pauli_x(op.q0);
            }
            if (static_cast<int>(k) == excite_after) {
                tab.pauli_x(op.q0);
            }
            ++k;
        }
    }
    for (std::size_t i = 0; i < generators.size(); ++i) {
        const auto v = tab.peek_pauli(generators[i]);
        if (!v) {
            throw std::logic_error("build_compensation_matrices: stabilizer lost during cycle");
        }
        r.s_after.set(i, *v);
    }
    return r;
}

}  // namespace

BitVector CompensationMatrices::apply(const std::vector<BitVector> &rows, const BitVector &d) {
    BitVector out(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.set(i, rows[i].dot(d));
    }
    return out;
}

int CompensationMatrices::max_row_support() const {
    std::size_t best = 0;
    for (const auto *m : {&m_m, &m_f, &m_s, &k_m, &k_f, &k_s}) {
        for (const auto &row : *m) {
            best = std::max(best, row.popcount());
        }
    }
    return static_cast<int>(best);
}

CompensationMatrices build_compensation_matrices(const CodeLayout &layout, const CircuitSchedule &schedule) {
    if (schedule.kind != ScheduleKind::kCycle || schedule.reset_mode != ResetMode::kNoReset) {
        throw std::invalid_argument("build_compensation_matrices: expected a NO_RESET cycle schedule");
    }
    const int nt = layout.n_tiles();
    const auto nc = static_cast<std::size_t>(2 * nt);
    const auto pure = pure_error_basis(layout);
    std::vector<PauliOperator> generators;
    for (int i = 0; i < layout.n_checks(); ++i) {
        generators.push_back(widen(layout.generator(i), layout.total_qubits));
    }
    const Tableau zero = prepare_logical_zero(layout);

    // Which measurement slot leaves its qubit in the state carried into the next cycle.
    std::vector<int> last_slot_of_qubit(static_cast<std::size_t>(layout.total_qubits), -1);
    for (std::size_t k = 0; k < schedule.measurements.size(); ++k) {
        last_slot_of_qubit[static_cast<std::size_t>(schedule.measurements[k].qubit)] = static_cast<int>(k);
    }

    CompensationMatrices out;
    out.n_tiles = nt;
    out.m_m.assign(nc, BitVector(3 * nc));
    out.m_f.assign(nc, BitVector(3 * nc));
    out.m_s.assign(nc, BitVector(3 * nc));
    out.k_m.assign(nc, BitVector(2 * nc));
    out.k_f.assign(nc, BitVector(2 * nc));
    out.k_s.assign(nc, BitVector(2 * nc));

    const auto base = run_noiseless_cycle(zero, layout, schedule, generators, last_slot_of_qubit);
    if (base.m.any() || base.m_flag.any() || base.s_after.any()) {
        throw std::logic_error("build_compensation_matrices: nonzero response to d = 0");
    }

    auto store = [&](std::size_t col, const CycleResponse &r, const BitVector *s_in) {
        BitVector ds = r.s_after;
        if (s_in != nullptr) {
            ds ^= *s_in;
        }
        for (std::size_t i = 0; i < nc; ++i) {
            out.m_m[i].set(col, r.m.get(i));
            out.m_f[i].set(col, r.m_flag.get(i));
            out.m_s[i].set(col, ds.get(i));
        }
    };

    for (std::size_t k = 0; k < schedule.measurements.size(); ++k) {
        const auto &slot = schedule.measurements[k];
        if (last_slot_of_qubit[static_cast<std::size_t>(slot.qubit)] != static_cast<int>(k)) {
            // Measured again later in this cycle: the post-measurement state
            // reaches the later block of the same cycle.
            const auto r = run_noiseless_cycle(zero, layout, schedule, generators, last_slot_of_qubit, static_cast<int>(k));
            const std::size_t col = slot_bit(slot, nt) + (is_flag(slot.role) ? nc : 0);
            for (std::size_t i = 0; i < nc; ++i) {
                out.k_m[i].set(col, r.m.get(i));
                out.k_f[i].set(col, r.m_flag.get(i));
                out.k_s[i].set(col, r.s_after.get(i));
            }
            continue;
        }
        Tableau tab = zero;
        tab.pauli_x(slot.qubit);
        const std::size_t col = slot_bit(slot, nt) + (is_flag(slot.role) ? nc : 0);
        store(col, run_noiseless_cycle(std::move(tab), layout, schedule, generators, last_slot_of_qubit), nullptr);
    }
    for (std::size_t i = 0; i < nc; ++i) {
        Tableau tab = zero;
        const auto &p = pure[i];
        for (auto q : p.x.ones()) {
            tab.pauli_x(q);
        }
        for (auto q : p.z.ones()) {
            tab.pauli_z(q);
        }
        BitVector e(nc);
        e.set(i);
        store(2 * nc + i, run_noiseless_cycle(std::move(tab), layout, schedule, generators, last_slot_of_qubit), &e);
    }
    return out;
}

FinalSample compute_final_increment_and_parity(const CodeLayout &layout, const std::vector<PauliOperator> &pure_errors,
                                               Basis basis, const BitVector &data_bits, const BitVector &s) {
    const int nt = layout.n_tiles();
    const bool z = basis == Basis::kZ;
    const auto &checks = z ? layout.z_stabilizers : layout.x_stabilizers;
    const std::size_t offset = z ? static_cast<std::size_t>(nt) : 0;
    FinalSample out;
    out.delta_f = BitVector(static_cast<std::size_t>(nt));
    BitVector corrected = data_bits;
    for (int i = 0; i < nt; ++i) {
        const bool parity = checks[static_cast<std::size_t>(i)].dot(data_bits);
        out.delta_f.set(static_cast<std::size_t>(i), parity != s.get(offset + static_cast<std::size_t>(i)));
        if (parity) {
            const auto &pe = pure_errors[offset + static_cast<std::size_t>(i)];
            corrected ^= z ? pe.x : pe.z;
        }
    }
    out.p_true = (z ? layout.logical_z : layout.logical_x).dot(corrected);
    return out;
}

SyndromeExtractor::SyndromeExtractor(const CodeLayout &layout, ResetMode reset_mode, Basis basis)
    : layout_(layout), reset_mode_(reset_mode), basis_(basis), pure_errors_(pure_error_basis(layout)) {
    if (reset_mode == ResetMode::kNoReset) {
        comp_ = build_compensation_matrices(layout, build_cycle_schedule(layout, reset_mode));
    }
}

SyndromeSequence SyndromeExtractor::extract(const RawRun &raw) const {
    const auto nc = static_cast<std::size_t>(layout_.n_checks());
    if (static_cast<int>(raw.ancilla_bits.size()) != raw.cycles || static_cast<int>(raw.flag_bits.size()) != raw.cycles ||
        raw.readouts.empty()) {
        throw std::invalid_argument("extract_syndrome_records: malformed run");
    }
    SyndromeSequence seq;
    seq.cycles = raw.cycles;
    seq.delta_s.reserve(static_cast<std::size_t>(raw.cycles));
    seq.s_flag.reserve(static_cast<std::size_t>(raw.cycles));

    BitVector m_prev(nc), s(nc), d(3 * nc);
    std::size_t next_readout = 0;
    for (int t = 1; t <= raw.cycles; ++t) {
        const auto &m = raw.ancilla_bits[static_cast<std::size_t>(t - 1)];
        const auto &mf = raw.flag_bits[static_cast<std::size_t>(t - 1)];
        if (m.size() != nc || mf.size() != nc) {
            throw std::invalid_argument("extract_syndrome_records: dimension mismatch");
        }
        if (reset_mode_ == ResetMode::kReset) {
            // m(0) = 0: the prepared state fixes every check at +1.
            seq.delta_s.push_back(m ^ m_prev);
            seq.s_flag.push_back(mf);
            s = m;
            m_prev = m;
        } else {
            auto x = m;
            x.append(mf);
            auto ds = m ^ CompensationMatrices::apply(comp_.m_m, d) ^ CompensationMatrices::apply(comp_.k_m, x);
            seq.s_flag.push_back(mf ^ CompensationMatrices::apply(comp_.m_f, d) ^
                                 CompensationMatrices::apply(comp_.k_f, x));
            s ^= ds;
            s ^= CompensationMatrices::apply(comp_.m_s, d);
            s ^= CompensationMatrices::apply(comp_.k_s, x);
            seq.delta_s.push_back(std::move(ds));
            d = m;
            d.append(mf);
            d.append(s);
        }
        while (next_readout < raw.readouts.size() && raw.readouts[next_readout].cycle == t) {
            auto fs = compute_final_increment_and_parity(layout_, pure_errors_, basis_,
                                                         raw.readouts[next_readout].data_bits, s);
            fs.cycle = t;
            seq.finals.push_back(std::move(fs));
            ++next_readout;
        }
    }
    if (next_readout != raw.readouts.size()) {
        throw std::invalid_argument("extract_syndrome_records: readouts out of order");
    }
    return seq;
}

SyndromeSequence extract_syndrome_records(const RawRun &raw, const CodeLayout &layout, ResetMode reset_mode,
                                          Basis basis) {
    return SyndromeExtractor(layout, reset_mode, basis).extract(raw);
}

}  // namespace colornn
