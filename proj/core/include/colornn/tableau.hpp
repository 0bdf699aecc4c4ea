#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "colornn/code.hpp"
#include "colornn/rng.hpp"

namespace colornn {

struct MeasureResult {
    bool outcome = false;        // 1 means eigenvalue -1
    bool deterministic = false;
};

/// Stabilizer tableau with destabilizers (Aaronson–Gottesman), bit-packed rows.
///
/// Rows 0..n-1 are destabilizers, n..2n-1 stabilizers, row 2n is scratch.
class Tableau {
public:
    explicit Tableau(int n);  // |0...0>

    int num_qubits() const { return n_; }

    void hadamard(int q);
    void cphase(int a, int b);
    void pauli_x(int q);
    void pauli_z(int q);
    void pauli_y(int q) {
        pauli_x(q);
        pauli_z(q);
    }
    /// Applies 'I', 'X', 'Y' or 'Z'.
    void apply_pauli(int q, char p);

    /// Z-basis measurement. Random outcomes come from `rng`, or equal
    /// `forced` when given.
    MeasureResult measure_z(int q, CounterRng *rng, std::optional<bool> forced = std::nullopt);
    /// Measures and flips to |0>.
    void reset(int q, CounterRng *rng);

    /// Measurement of an arbitrary Pauli product over all qubits.
    MeasureResult measure_pauli(const PauliOperator &p, CounterRng *rng, std::optional<bool> forced = std::nullopt);

    /// Outcome of measuring p if it is determined by the state, else nullopt.
    std::optional<bool> peek_pauli(const PauliOperator &p) const;

    /// Rows pairwise commute except destabilizer i with stabilizer i.
    bool is_valid() const;

    PauliOperator stabilizer(int i) const;
    bool stabilizer_sign(int i) const { return signs_[static_cast<std::size_t>(n_ + i)]; }

    bool operator==(const Tableau &) const = default;

private:
    std::uint64_t *xrow(int r) { return xs_.data() + static_cast<std::size_t>(r) * words_; }
    std::uint64_t *zrow(int r) { return zs_.data() + static_cast<std::size_t>(r) * words_; }
    const std::uint64_t *xrow(int r) const { return xs_.data() + static_cast<std::size_t>(r) * words_; }
    const std::uint64_t *zrow(int r) const { return zs_.data() + static_cast<std::size_t>(r) * words_; }
    bool xbit(int r, int q) const { return (xrow(r)[q >> 6] >> (q & 63)) & 1u; }

    bool row_anticommutes(int r, const PauliOperator &p) const;
    bool rows_anticommute(int r1, int r2) const;
    void rowsum(int h, int i);  // row h := row i * row h
    void set_row(int r, const PauliOperator &p, bool sign);
    void clear_row(int r);

    int n_;
    std::size_t words_;
    std::vector<std::uint64_t> xs_;
    std::vector<std::uint64_t> zs_;
    std::vector<std::uint8_t> signs_;
};

}  // namespace colornn
