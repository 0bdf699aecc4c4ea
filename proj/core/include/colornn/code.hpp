#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "colornn/bits.hpp"

namespace colornn {

/// Position on the triangular lattice that hosts both data qubits and tile
/// centres. Row 0 is the top vertex of the triangle; 0 <= col <= row.
struct LatticeCoord {
    int row = 0;
    int col = 0;
    bool operator==(const LatticeCoord &) const = default;
};

/// Hexagon corner directions around a tile centre, clockwise starting east.
/// Corners at even directions and odd directions belong to the two
/// bipartite classes of the honeycomb.
inline constexpr std::array<LatticeCoord, 6> kHexDirections{{
    {0, +1},   // 0: east
    {+1, +1},  // 1: south-east
    {+1, 0},   // 2: south-west
    {0, -1},   // 3: west
    {-1, -1},  // 4: north-west
    {-1, 0},   // 5: north-east
}};

struct Tile {
    LatticeCoord center;
    int color = 0;  // 0..2; stored for documentation only
    std::vector<int> support;              // data qubit indices, ascending
    std::array<int, 6> corner{-1, -1, -1, -1, -1, -1};  // data qubit per direction, -1 if cut by the boundary
    int ancilla = -1;
    int flag = -1;
    bool operator==(const Tile &) const = default;
};

/// Binary symplectic Pauli operator (phase dropped). Y sets both bits.
struct PauliOperator {
    BitVector x;
    BitVector z;

    PauliOperator() = default;
    explicit PauliOperator(std::size_t n) : x(n), z(n) {}
    PauliOperator(BitVector xs, BitVector zs);

    std::size_t num_qubits() const { return x.size(); }
    std::size_t weight() const { return (x | z).popcount(); }
    bool is_identity() const { return x.none() && z.none(); }

    /// 1 when the operators anticommute.
    bool symplectic_product(const PauliOperator &other) const;
    PauliOperator &operator*=(const PauliOperator &other);
    friend PauliOperator operator*(PauliOperator a, const PauliOperator &b) { return a *= b; }
    bool operator==(const PauliOperator &) const = default;

    /// "IXYZ..." rendering.
    std::string to_string() const;
    static PauliOperator from_string(std::string_view s);
};

/// Distance-d triangular 6,6,6 color code with one ancilla and one flag per tile.
///
/// Data qubits are numbered row by row from the top vertex. Tile t owns
/// ancilla n_data + 2t and flag n_data + 2t + 1. Syndrome bit i < n_tiles is
/// the X check of tile i, bit n_tiles + i its Z check.
struct CodeLayout {
    int distance = 0;
    int n_data = 0;
    int total_qubits = 0;
    std::vector<LatticeCoord> data_coords;
    std::vector<Tile> tiles;
    std::vector<BitVector> x_stabilizers;  // supports over data qubits, one per tile
    std::vector<BitVector> z_stabilizers;
    BitVector logical_x;  // bottom side of the triangle
    BitVector logical_z;

    int n_tiles() const { return static_cast<int>(tiles.size()); }
    int n_checks() const { return 2 * n_tiles(); }
    int max_tile_weight() const;

    /// Stabilizer generator i (X checks first, then Z checks) as a Pauli over data qubits.
    PauliOperator generator(int i) const;
    PauliOperator logical_x_op() const;
    PauliOperator logical_z_op() const;

    bool operator==(const CodeLayout &) const = default;
};

/// Builds the layout for odd d >= 3. Throws std::invalid_argument otherwise.
CodeLayout build_layout(int d);

/// P_i with symplectic product delta_ij against generator j, indexed like
/// CodeLayout::generator. Each P_i is a minimum-weight member of its coset
/// (lexicographically smallest among ties), so the basis is canonical.
std::vector<PauliOperator> pure_error_basis(const CodeLayout &layout);

/// Product of pure errors selected by the set bits of `syndrome` (length n_checks).
PauliOperator pure_error_for(const std::vector<PauliOperator> &basis, const BitVector &syndrome);

/// Syndrome (length n_checks) of a data-qubit Pauli.
BitVector syndrome_of(const CodeLayout &layout, const PauliOperator &error);

enum class DistanceSearch {
    kFullPauli,       // every X/Y/Z assignment on every support
    kCssRestricted,   // X-only and Z-only errors
};

/// Minimum weight of a logical operator, or nullopt if none exists with
/// weight <= max_weight.
std::optional<int> code_distance_bruteforce(const CodeLayout &layout, int max_weight,
                                            DistanceSearch mode = DistanceSearch::kFullPauli);

/// Deterministic JSON document describing the layout.
std::string layout_to_json(const CodeLayout &layout);

}  // namespace colornn
