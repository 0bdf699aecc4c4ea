#pragma once

#include <optional>
#include <vector>

#include "colornn/bits.hpp"

namespace colornn::gf2 {

/// Rank of a set of row vectors.
int rank(std::vector<BitVector> rows);

/// Finds x with rows[i].dot(x) == rhs[i] for all i. Free variables are zero.
/// Returns nullopt when the system is inconsistent.
std::optional<BitVector> solve(const std::vector<BitVector> &rows, const BitVector &rhs, std::size_t n_unknowns);

/// Basis of {x : rows[i].dot(x) == 0 for all i}.
std::vector<BitVector> null_space(const std::vector<BitVector> &rows, std::size_t n_unknowns);

}  // namespace colornn::gf2
