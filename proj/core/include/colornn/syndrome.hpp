#pragma once

#include <vector>

#include "colornn/circuit.hpp"
#include "colornn/code.hpp"
#include "colornn/sim.hpp"

namespace colornn {

/// Final increment and true parity for one readout.
struct FinalSample {
    int cycle = 0;
    BitVector delta_f;  // over the readout-basis tiles
    bool p_true = false;
    bool operator==(const FinalSample &) const = default;
};

/// Decoder input for one run. `finals` holds one entry per readout in
/// increasing cycle order; the last is at `cycles`.
struct SyndromeSequence {
    int cycles = 0;
    std::vector<BitVector> delta_s;  // per cycle, 2 * n_tiles bits (X checks then Z checks)
    std::vector<BitVector> s_flag;   // per cycle, 2 * n_tiles bits
    std::vector<FinalSample> finals;

    const BitVector &delta_f() const { return finals.back().delta_f; }
    bool p_true() const { return finals.back().p_true; }
    bool operator==(const SyndromeSequence &) const = default;
};

/// Linear maps acting on d(t) = (m(t), m_flag(t), s(t)), each block 2 * n_tiles
/// long. Rows are stored as bit vectors of length 6 * n_tiles. Each ancilla
/// and flag is measured twice per cycle, so the X-block outcomes of cycle t
/// also feed the Z block of the same cycle; the K maps act on
/// x(t) = (m(t), m_flag(t)) and only have X-block columns.
///
/// In NO_RESET mode
///   delta_s(t) = m(t) + M_m d(t-1) + K_m x(t)
///   s_flag(t)  = m_flag(t) + M_f d(t-1) + K_f x(t)
///   s(t)       = s(t-1) + delta_s(t) + M_s d(t-1) + K_s x(t)
/// M_m absorbs the s(t-1) term of the increment together with the ancilla
/// compensation vector.
struct CompensationMatrices {
    int n_tiles = 0;
    std::vector<BitVector> m_m;
    std::vector<BitVector> m_f;
    std::vector<BitVector> m_s;
    std::vector<BitVector> k_m;  // rows of length 4 * n_tiles
    std::vector<BitVector> k_f;
    std::vector<BitVector> k_s;

    static BitVector apply(const std::vector<BitVector> &rows, const BitVector &d);
    /// Largest number of nonzero entries in any row of the six matrices.
    int max_row_support() const;
};

/// Propagates each basis vector of d(t-1), and each excited X-block
/// post-measurement state, through one noiseless NO_RESET cycle. Throws
/// std::logic_error if some outcome is not determined by d(t-1).
CompensationMatrices build_compensation_matrices(const CodeLayout &layout, const CircuitSchedule &schedule);

/// (delta_f, p_true) for readout `data_bits` given the tracked syndrome
/// estimate `s` (2 * n_tiles bits). The parity is that of the logical in the
/// readout basis after applying the pure-error correction of the measured
/// final syndrome.
FinalSample compute_final_increment_and_parity(const CodeLayout &layout, const std::vector<PauliOperator> &pure_errors,
                                               Basis basis, const BitVector &data_bits, const BitVector &s);

/// Streaming converter from raw measurement records to decoder input.
class SyndromeExtractor {
public:
    SyndromeExtractor(const CodeLayout &layout, ResetMode reset_mode, Basis basis);

    SyndromeSequence extract(const RawRun &raw) const;

    const CompensationMatrices &compensation() const { return comp_; }
    const std::vector<PauliOperator> &pure_errors() const { return pure_errors_; }

private:
    CodeLayout layout_;
    ResetMode reset_mode_;
    Basis basis_;
    std::vector<PauliOperator> pure_errors_;
    CompensationMatrices comp_;
};

SyndromeSequence extract_syndrome_records(const RawRun &raw, const CodeLayout &layout, ResetMode reset_mode,
                                          Basis basis = Basis::kZ);

}  // namespace colornn
