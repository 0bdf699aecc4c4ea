#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "colornn/sim.hpp"
#include "colornn/syndrome.hpp"

namespace colornn {

/// Every single circuit fault of a T-cycle experiment: Pauli faults after
/// every preparation, idle, Hadamard, reset and CPHASE (all 15 two-qubit
/// Paulis), and a flip of every measurement.
std::vector<ForcedFault> enumerate_single_faults(const ExperimentRunner &runner, int cycles);

/// Concatenation of every delta_s, s_flag and the final delta_f.
BitVector signature_of(const SyndromeSequence &seq);

/// Table decoder for a fixed number of cycles, built from the exhaustive
/// single-fault list. Each signature maps to the majority parity of the
/// faults producing it; unseen signatures fall back to parity 0, i.e. the
/// pure-error correction alone.
class LookupDecoder {
public:
    LookupDecoder(const CodeLayout &layout, int cycles, ResetMode reset_mode = ResetMode::kReset,
                  Basis basis = Basis::kZ);

    bool decode(const SyndromeSequence &seq) const;

    int cycles() const { return cycles_; }
    ResetMode reset_mode() const { return reset_mode_; }
    Basis basis() const { return basis_; }
    std::size_t table_size() const { return table_.size(); }
    std::size_t faults_enumerated() const { return n_faults_; }
    /// Signatures reached by faults of both parities.
    std::size_t ambiguous() const { return ambiguous_; }

private:
    struct Votes {
        std::uint32_t even = 0;
        std::uint32_t odd = 0;
    };
    int cycles_;
    ResetMode reset_mode_;
    Basis basis_;
    std::unordered_map<BitVector, Votes, BitVectorHash> table_;
    std::size_t n_faults_ = 0;
    std::size_t ambiguous_ = 0;
};

/// Outcome of `reference_decoder_d3`-style Monte Carlo.
struct LookupMonteCarlo {
    std::int64_t samples = 0;
    std::int64_t failures = 0;
    double failure_rate() const { return samples > 0 ? static_cast<double>(failures) / samples : 0.0; }
};

LookupMonteCarlo run_lookup_monte_carlo(const LookupDecoder &decoder, const CodeLayout &layout, double p_error,
                                        std::int64_t samples, std::uint64_t seed);

}  // namespace colornn
