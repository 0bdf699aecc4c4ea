#pragma once

#include <string>
#include <vector>

#include "colornn/circuit.hpp"
#include "colornn/rng.hpp"

namespace colornn {

/// Circuit-level Pauli noise with one probability per step, identified with
/// the physical error rate.
struct NoiseParams {
    double p_error = 0.0;
    bool prep = true;         // PREP and RESET
    bool idle = true;
    bool rotation = true;     // Hadamard
    bool cphase = true;
    bool measurement = true;  // classical flip of the recorded outcome

    static NoiseParams uniform(double p) {
        NoiseParams n;
        n.p_error = p;
        return n;
    }
    void validate() const;
};

/// A fault attached to one operation of a schedule. Paulis act after the
/// operation; for CPHASE `pauli0` hits op.q0 and `pauli1` op.q1.
struct Fault {
    int step = 0;
    int op = 0;
    char pauli0 = 'I';
    char pauli1 = 'I';
    bool flip = false;  // measurement outcome flip
    bool operator==(const Fault &) const = default;
};

/// Samples independent faults for every operation of `schedule`:
/// single-qubit locations get X/Y/Z with p/3 each, CPHASE one of the 15
/// nontrivial two-qubit Paulis with p/15 each, MEASURE a flip with p.
std::vector<Fault> inject_errors(const CircuitSchedule &schedule, const NoiseParams &noise, CounterRng &rng);

/// The 15 nontrivial two-qubit Paulis, index 1..15 -> ("IXYZ"[k/4], "IXYZ"[k%4]).
inline constexpr char kPauliChars[] = {'I', 'X', 'Y', 'Z'};

}  // namespace colornn
