#include "colornn/gf2.hpp"

#include <stdexcept>

namespace colornn::gf2 {

namespace {

// Row-reduces an augmented system in place. Returns pivot column per reduced row.
std::vector<std::size_t> reduce(std::vector<BitVector> &rows, std::vector<bool> &aug, std::size_t n) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t col = 0; col < n && r < rows.size(); ++col) {
        std::size_t sel = r;
        while (sel < rows.size() && !rows[sel].get(col)) {
            ++sel;
        }
        if (sel == rows.size()) {
            continue;
        }
        std::swap(rows[sel], rows[r]);
        std::swap(aug[sel], aug[r]);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i != r && rows[i].get(col)) {
                rows[i] ^= rows[r];
                aug[i] = aug[i] != aug[r];
            }
        }
        pivots.push_back(col);
        ++r;
    }
    return pivots;
}

}  // namespace

int rank(std::vector<BitVector> rows) {
    if (rows.empty()) {
        return 0;
    }
    std::vector<bool> aug(rows.size(), false);
    return static_cast<int>(reduce(rows, aug, rows.front().size()).size());
}

std::optional<BitVector> solve(const std::vector<BitVector> &rows, const BitVector &rhs, std::size_t n_unknowns) {
    if (rhs.size() != rows.size()) {
        throw std::invalid_argument("gf2::solve: rhs length must equal number of equations");
    }
    std::vector<BitVector> m = rows;
    std::vector<bool> aug(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (m[i].size() != n_unknowns) {
            throw std::invalid_argument("gf2::solve: row width mismatch");
        }
        aug[i] = rhs.get(i);
    }
    const auto pivots = reduce(m, aug, n_unknowns);
    for (std::size_t i = pivots.size(); i < m.size(); ++i) {
        if (aug[i]) {
            return std::nullopt;
        }
    }
    BitVector x(n_unknowns);
    for (std::size_t i = 0; i < pivots.size(); ++i) {
        x.set(pivots[i], aug[i]);
    }
    return x;
}

std::vector<BitVector> null_space(const std::vector<BitVector> &rows, std::size_t n_unknowns) {
    std::vector<BitVector> m = rows;
    std::vector<bool> aug(rows.size(), false);
    const auto pivots = reduce(m, aug, n_unknowns);
    std::vector<bool> is_pivot(n_unknowns, false);
    for (auto p : pivots) {
        is_pivot[p] = true;
    }
    std::vector<BitVector> basis;
    for (std::size_t free = 0; free < n_unknowns; ++free) {
        if (is_pivot[free]) {
            continue;
        }
        BitVector v(n_unknowns);
        v.set(free);
        for (std::size_t i = 0; i < pivots.size(); ++i) {
            if (m[i].get(free)) {
                v.set(pivots[i]);
            }
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace colornn::gf2
