#include "colornn/code.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <stdexcept>

#include <json.hpp>

#include "colornn/gf2.hpp"

namespace colornn {

PauliOperator::PauliOperator(BitVector xs, BitVector zs) : x(std::move(xs)), z(std::move(zs)) {
    if (x.size() != z.size()) {
        throw std::invalid_argument("PauliOperator: x and z parts differ in length");
    }
}

bool PauliOperator::symplectic_product(const PauliOperator &other) const {
    return x.dot(other.z) != z.dot(other.x);
}

PauliOperator &PauliOperator::operator*=(const PauliOperator &other) {
    x ^= other.x;
    z ^= other.z;
    return *this;
}

std::string PauliOperator::to_string() const {
    std::string s(num_qubits(), 'I');
    for (std::size_t q = 0; q < s.size(); ++q) {
        const bool xb = x.get(q);
        const bool zb = z.get(q);
        s[q] = xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
    }
    return s;
}

PauliOperator PauliOperator::from_string(std::string_view s) {
    PauliOperator p(s.size());
    for (std::size_t q = 0; q < s.size(); ++q) {
        switch (s[q]) {
            case 'I': case '_': break;
            case 'X': p.x.set(q); break;
            case 'Z': p.z.set(q); break;
            case 'Y': p.x.set(q); p.z.set(q); break;
            default: throw std::invalid_argument("PauliOperator::from_string: bad character");
        }
    }
    return p;
}

int CodeLayout::max_tile_weight() const {
    int w = 0;
    for (const auto &t : tiles) {
        w = std::max(w, static_cast<int>(t.support.size()));
    }
    return w;
}

PauliOperator CodeLayout::generator(int i) const {
    const int nt = n_tiles();
    if (i < 0 || i >= 2 * nt) {
        throw std::out_of_range("CodeLayout::generator index");
    }
    PauliOperator p(static_cast<std::size_t>(n_data));
    if (i < nt) {
        p.x = x_stabilizers[static_cast<std::size_t>(i)];
    } else {
        p.z = z_stabilizers[static_cast<std::size_t>(i - nt)];
    }
    return p;
}

PauliOperator CodeLayout::logical_x_op() const {
    return PauliOperator(logical_x, BitVector(static_cast<std::size_t>(n_data)));
}

PauliOperator CodeLayout::logical_z_op() const {
    return PauliOperator(BitVector(static_cast<std::size_t>(n_data)), logical_z);
}

CodeLayout build_layout(int d) {
    if (d < 3 || d % 2 == 0) {
        throw std::invalid_argument("build_layout: distance must be an odd integer >= 3");
    }
    const int rows = 3 * (d - 1) / 2 + 1;
    auto is_tile = [](int r, int c) { return (r + c) % 3 == 1; };

    CodeLayout layout;
    layout.distance = d;

    std::vector<std::vector<int>> data_index(static_cast<std::size_t>(rows));
    std::vector<LatticeCoord> tile_centres;
    for (int r = 0; r < rows; ++r) {
        data_index[static_cast<std::size_t>(r)].assign(static_cast<std::size_t>(r + 1), -1);
        for (int c = 0; c <= r; ++c) {
            if (is_tile(r, c)) {
                tile_centres.push_back({r, c});
            } else {
                data_index[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
                    static_cast<int>(layout.data_coords.size());
                layout.data_coords.push_back({r, c});
            }
        }
    }
    layout.n_data = static_cast<int>(layout.data_coords.size());
    const auto n = static_cast<std::size_t>(layout.n_data);

    for (std::size_t t = 0; t < tile_centres.size(); ++t) {
        Tile tile;
        tile.center = tile_centres[t];
        tile.color = tile.center.row % 3;
        for (int k = 0; k < 6; ++k) {
            const int r = tile.center.row + kHexDirections[static_cast<std::size_t>(k)].row;
            const int c = tile.center.col + kHexDirections[static_cast<std::size_t>(k)].col;
            if (r < 0 || r >= rows || c < 0 || c > r) {
                continue;
            }
            const int q = data_index[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            tile.corner[static_cast<std::size_t>(k)] = q;
            tile.support.push_back(q);
        }
        std::sort(tile.support.begin(), tile.support.end());
        if (tile.support.size() != 4 && tile.support.size() != 6) {
            throw std::logic_error("build_layout: tile with unexpected weight");
        }
        tile.ancilla = layout.n_data + 2 * static_cast<int>(t);
        tile.flag = tile.ancilla + 1;
        layout.x_stabilizers.push_back(BitVector::from_indices(n, tile.support));
        layout.z_stabilizers.push_back(BitVector::from_indices(n, tile.support));
        layout.tiles.push_back(std::move(tile));
    }
    layout.total_qubits = layout.n_data + 2 * layout.n_tiles();

    std::vector<int> bottom;
    for (int c = 0; c < rows; ++c) {
        const int q = data_index[static_cast<std::size_t>(rows - 1)][static_cast<std::size_t>(c)];
        if (q >= 0) {
            bottom.push_back(q);
        }
    }
    layout.logical_x = BitVector::from_indices(n, bottom);
    layout.logical_z = layout.logical_x;
    return layout;
}

namespace {

bool lex_less(const BitVector &a, const BitVector &b) {
    const auto oa = a.ones();
    const auto ob = b.ones();
    return std::lexicographical_compare(oa.begin(), oa.end(), ob.begin(), ob.end());
}

// Minimum-weight element of solution + span(kernel).
BitVector min_weight_coset_member(BitVector solution, const std::vector<BitVector> &kernel) {
    constexpr std::size_t kExhaustiveLimit = 22;
    BitVector best = solution;
    if (kernel.size() <= kExhaustiveLimit) {
        BitVector cur = solution;
        const std::uint64_t count = std::uint64_t{1} << kernel.size();
        for (std::uint64_t k = 1; k < count; ++k) {
            cur ^= kernel[static_cast<std::size_t>(std::countr_zero(k))];
            const auto wc = cur.popcount();
            const auto wb = best.popcount();
            if (wc < wb || (wc == wb && lex_less(cur, best))) {
                best = cur;
            }
        }
        return best;
    }
    bool improved = true;
    while (improved) {
        improved = false;
        for (const auto &k : kernel) {
            BitVector cand = best ^ k;
            if (cand.popcount() < best.popcount()) {
                best = std::move(cand);
                improved = true;
            }
        }
    }
    return best;
}

}  // namespace

std::vector<PauliOperator> pure_error_basis(const CodeLayout &layout) {
    const auto n = static_cast<std::size_t>(layout.n_data);
    const auto nt = static_cast<std::size_t>(layout.n_tiles());
    std::vector<PauliOperator> basis;
    basis.reserve(2 * nt);

    // Z-type errors flip X checks; X-type errors flip Z checks.
    for (int pass = 0; pass < 2; ++pass) {
        const auto &checks = pass == 0 ? layout.x_stabilizers : layout.z_stabilizers;
        const auto kernel = gf2::null_space(checks, n);
        for (std::size_t i = 0; i < nt; ++i) {
            BitVector rhs(nt);
            rhs.set(i);
            auto sol = gf2::solve(checks, rhs, n);
            if (!sol) {
                throw std::runtime_error("pure_error_basis: singular check matrix (malformed layout)");
            }
            BitVector support = min_weight_coset_member(std::move(*sol), kernel);
            PauliOperator p(n);
            if (pass == 0) {
                p.z = std::move(support);
            } else {
                p.x = std::move(support);
            }
            basis.push_back(std::move(p));
        }
    }
    return basis;
}

PauliOperator pure_error_for(const std::vector<PauliOperator> &basis, const BitVector &syndrome) {
    if (basis.empty()) {
        throw std::invalid_argument("pure_error_for: empty basis");
    }
    if (syndrome.size() != basis.size()) {
        throw std::invalid_argument("pure_error_for: syndrome length mismatch");
    }
    PauliOperator out(basis.front().num_qubits());
    for (int i : syndrome.ones()) {
        out *= basis[static_cast<std::size_t>(i)];
    }
    return out;
}

BitVector syndrome_of(const CodeLayout &layout, const PauliOperator &error) {
    const auto nt = static_cast<std::size_t>(layout.n_tiles());
    BitVector s(2 * nt);
    for (std::size_t t = 0; t < nt; ++t) {
        s.set(t, layout.x_stabilizers[t].dot(error.z));
        s.set(nt + t, layout.z_stabilizers[t].dot(error.x));
    }
    return s;
}

namespace {

bool is_logical(const CodeLayout &layout, const PauliOperator &p) {
    const auto nt = static_cast<std::size_t>(layout.n_tiles());
    for (std::size_t t = 0; t < nt; ++t) {
        if (layout.x_stabilizers[t].dot(p.z) || layout.z_stabilizers[t].dot(p.x)) {
            return false;
        }
    }
    // In the normalizer; nontrivial iff it anticommutes with a logical.
    return layout.logical_x.dot(p.z) || layout.logical_z.dot(p.x);
}

// Calls f(support) for every k-subset of {0..n-1}; stops early if f returns true.
bool for_each_subset(int n, int k, const std::function<bool(const std::vector<int> &)> &f) {
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        idx[static_cast<std::size_t>(i)] = i;
    }
    while (true) {
        if (f(idx)) {
            return true;
        }
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) {
            --i;
        }
        if (i < 0) {
            return false;
        }
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) {
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
}

}  // namespace

std::optional<int> code_distance_bruteforce(const CodeLayout &layout, int max_weight, DistanceSearch mode) {
    const int n = layout.n_data;
    const auto nq = static_cast<std::size_t>(n);
    for (int w = 1; w <= std::min(max_weight, n); ++w) {
        const bool found = for_each_subset(n, w, [&](const std::vector<int> &support) {
            if (mode == DistanceSearch::kCssRestricted) {
                PauliOperator px(BitVector::from_indices(nq, support), BitVector(nq));
                PauliOperator pz(BitVector(nq), BitVector::from_indices(nq, support));
                return is_logical(layout, px) || is_logical(layout, pz);
            }
            std::uint64_t combos = 1;
            for (int i = 0; i < w; ++i) {
                combos *= 3;
            }
            for (std::uint64_t c = 0; c < combos; ++c) {
                PauliOperator p(nq);
                std::uint64_t rest = c;
                for (int q : support) {
                    const auto kind = rest % 3;
                    rest /= 3;
                    if (kind != 1) {
                        p.x.set(static_cast<std::size_t>(q));  // X or Y
                    }
                    if (kind != 0) {
                        p.z.set(static_cast<std::size_t>(q));  // Y or Z
                    }
                }
                if (is_logical(layout, p)) {
                    return true;
                }
            }
            return false;
        });
        if (found) {
            return w;
        }
    }
    return std::nullopt;
}

std::string layout_to_json(const CodeLayout &layout) {
    nlohmann::ordered_json j;
    j["family"] = "color_666_triangular";
    j["distance"] = layout.distance;
    j["n_data"] = layout.n_data;
    j["n_tiles"] = layout.n_tiles();
    j["total_qubits"] = layout.total_qubits;
    auto data = nlohmann::ordered_json::array();
    for (std::size_t q = 0; q < layout.data_coords.size(); ++q) {
        data.push_back({{"index", q}, {"row", layout.data_coords[q].row}, {"col", layout.data_coords[q].col}});
    }
    j["data_qubits"] = std::move(data);
    auto tiles = nlohmann::ordered_json::array();
    for (std::size_t t = 0; t < layout.tiles.size(); ++t) {
        const auto &tile = layout.tiles[t];
        tiles.push_back({{"index", t},
                         {"row", tile.center.row},
                         {"col", tile.center.col},
                         {"color", tile.color},
                         {"support", tile.support},
                         {"corners", tile.corner},
                         {"ancilla", tile.ancilla},
                         {"flag", tile.flag}});
    }
    j["tiles"] = std::move(tiles);
    j["logical_x"] = layout.logical_x.ones();
    j["logical_z"] = layout.logical_z.ones();
    return j.dump(2);
}

}  // namespace colornn
