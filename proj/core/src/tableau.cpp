#include "colornn/tableau.hpp"

#include <bit>
#include <stdexcept>

namespace colornn {

Tableau::Tableau(int n)
    : n_(n),
      words_(static_cast<std::size_t>((n + 63) / 64)),
      xs_(static_cast<std::size_t>(2 * n + 1) * words_, 0),
      zs_(static_cast<std::size_t>(2 * n + 1) * words_, 0),
      signs_(static_cast<std::size_t>(2 * n + 1), 0) {
    if (n <= 0) {
        throw std::invalid_argument("Tableau: need at least one qubit");
    }
    for (int q = 0; q < n; ++q) {
        xrow(q)[q >> 6] |= std::uint64_t{1} << (q & 63);
        zrow(n + q)[q >> 6] |= std::uint64_t{1} << (q & 63);
    }
}

void Tableau::hadamard(int q) {
    const std::size_t w = static_cast<std::size_t>(q) >> 6;
    const int b = q & 63;
    for (int r = 0; r < 2 * n_; ++r) {
        std::uint64_t &x = xrow(r)[w];
        std::uint64_t &z = zrow(r)[w];
        const std::uint64_t xb = (x >> b) & 1u;
        const std::uint64_t zb = (z >> b) & 1u;
        signs_[static_cast<std::size_t>(r)] ^= static_cast<std::uint8_t>(xb & zb);
        if (xb != zb) {
            x ^= std::uint64_t{1} << b;
            z ^= std::uint64_t{1} << b;
        }
    }
}

void Tableau::cphase(int a, int b) {
    if (a == b) {
        throw std::invalid_argument("Tableau::cphase: qubits must differ");
    }
    const std::size_t wa = static_cast<std::size_t>(a) >> 6;
    const std::size_t wb = static_cast<std::size_t>(b) >> 6;
    const int ba = a & 63;
    const int bb = b & 63;
    for (int r = 0; r < 2 * n_; ++r) {
        std::uint64_t *x = xrow(r);
        std::uint64_t *z = zrow(r);
        const std::uint64_t xa = (x[wa] >> ba) & 1u;
        const std::uint64_t xb = (x[wb] >> bb) & 1u;
        const std::uint64_t za = (z[wa] >> ba) & 1u;
        const std::uint64_t zb = (z[wb] >> bb) & 1u;
        signs_[static_cast<std::size_t>(r)] ^= static_cast<std::uint8_t>(xa & xb & (za ^ zb));
        z[wa] ^= xb << ba;
        z[wb] ^= xa << bb;
    }
}

void Tableau::pauli_x(int q) {
    const std::size_t w = static_cast<std::size_t>(q) >> 6;
    const int b = q & 63;
    for (int r = 0; r < 2 * n_; ++r) {
        signs_[static_cast<std::size_t>(r)] ^= static_cast<std::uint8_t>((zrow(r)[w] >> b) & 1u);
    }
}

void Tableau::pauli_z(int q) {
    const std::size_t w = static_cast<std::size_t>(q) >> 6;
    const int b = q & 63;
    for (int r = 0; r < 2 * n_; ++r) {
        signs_[static_cast<std::size_t>(r)] ^= static_cast<std::uint8_t>((xrow(r)[w] >> b) & 1u);
    }
}

void Tableau::apply_pauli(int q, char p) {
    switch (p) {
        case 'I': break;
        case 'X': pauli_x(q); break;
        case 'Y': pauli_y(q); break;
        case 'Z': pauli_z(q); break;
        default: throw std::invalid_argument("Tableau::apply_pauli: expected I, X, Y or Z");
    }
}

namespace {

// Row (xh, zh, sh) := row i · row h, tracking the phase exponent of i.
void multiply_into(std::uint64_t *xh, std::uint64_t *zh, std::uint8_t &sh, const std::uint64_t *xi,
                   const std::uint64_t *zi, std::uint8_t si, std::size_t words) {
    int plus = 0;
    int minus = 0;
    for (std::size_t w = 0; w < words; ++w) {
        const std::uint64_t x1 = xi[w], z1 = zi[w], x2 = xh[w], z2 = zh[w];
        const std::uint64_t y1 = x1 & z1, xo = x1 & ~z1, zo = ~x1 & z1;
        const std::uint64_t p = (y1 & ~x2 & z2) | (xo & x2 & z2) | (zo & x2 & ~z2);
        const std::uint64_t m = (y1 & x2 & ~z2) | (xo & ~x2 & z2) | (zo & x2 & z2);
        plus += std::popcount(p);
        minus += std::popcount(m);
        xh[w] = x1 ^ x2;
        zh[w] = z1 ^ z2;
    }
    const int total = 2 * sh + 2 * si + plus - minus;
    sh = static_cast<std::uint8_t>(((total % 4) + 4) % 4 == 2);
}

}  // namespace

void Tableau::rowsum(int h, int i) {
    multiply_into(xrow(h), zrow(h), signs_[static_cast<std::size_t>(h)], xrow(i), zrow(i),
                  signs_[static_cast<std::size_t>(i)], words_);
}

void Tableau::clear_row(int r) {
    for (std::size_t w = 0; w < words_; ++w) {
        xrow(r)[w] = 0;
        zrow(r)[w] = 0;
    }
    signs_[static_cast<std::size_t>(r)] = 0;
}

void Tableau::set_row(int r, const PauliOperator &p, bool sign) {
    const auto xw = p.x.words();
    const auto zw = p.z.words();
    for (std::size_t w = 0; w < words_; ++w) {
        xrow(r)[w] = xw[w];
        zrow(r)[w] = zw[w];
    }
    signs_[static_cast<std::size_t>(r)] = sign;
}

bool Tableau::row_anticommutes(int r, const PauliOperator &p) const {
    const auto xw = p.x.words();
    const auto zw = p.z.words();
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < words_; ++w) {
        acc ^= (xrow(r)[w] & zw[w]) ^ (zrow(r)[w] & xw[w]);
    }
    return std::popcount(acc) & 1;
}

bool Tableau::rows_anticommute(int r1, int r2) const {
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < words_; ++w) {
        acc ^= (xrow(r1)[w] & zrow(r2)[w]) ^ (zrow(r1)[w] & xrow(r2)[w]);
    }
    return std::popcount(acc) & 1;
}

MeasureResult Tableau::measure_z(int q, CounterRng *rng, std::optional<bool> forced) {
    if (q < 0 || q >= n_) {
        throw std::out_of_range("Tableau::measure_z: qubit out of range");
    }
    int p = -1;
    for (int r = n_; r < 2 * n_; ++r) {
        if (xbit(r, q)) {
            p = r;
            break;
        }
    }
    if (p >= 0) {
        for (int r = 0; r < 2 * n_; ++r) {
            if (r != p && xbit(r, q)) {
                rowsum(r, p);
            }
        }
        for (std::size_t w = 0; w < words_; ++w) {
            xrow(p - n_)[w] = xrow(p)[w];
            zrow(p - n_)[w] = zrow(p)[w];
        }
        signs_[static_cast<std::size_t>(p - n_)] = signs_[static_cast<std::size_t>(p)];
        clear_row(p);
        zrow(p)[q >> 6] |= std::uint64_t{1} << (q & 63);
        bool outcome = false;
        if (forced) {
            outcome = *forced;
        } else if (rng != nullptr) {
            outcome = ((*rng)() >> 63) != 0;
        }
        signs_[static_cast<std::size_t>(p)] = outcome;
        return {outcome, false};
    }
    const int scratch = 2 * n_;
    clear_row(scratch);
    for (int r = 0; r < n_; ++r) {
        if (xbit(r, q)) {
            rowsum(scratch, r + n_);
        }
    }
    return {signs_[static_cast<std::size_t>(scratch)] != 0, true};
}

void Tableau::reset(int q, CounterRng *rng) {
    if (measure_z(q, rng).outcome) {
        pauli_x(q);
    }
}

MeasureResult Tableau::measure_pauli(const PauliOperator &pauli, CounterRng *rng, std::optional<bool> forced) {
    if (static_cast<int>(pauli.num_qubits()) != n_) {
        throw std::invalid_argument("Tableau::measure_pauli: operator size mismatch");
    }
    int p = -1;
    for (int r = n_; r < 2 * n_; ++r) {
        if (row_anticommutes(r, pauli)) {
            p = r;
            break;
        }
    }
    if (p >= 0) {
        for (int r = 0; r < 2 * n_; ++r) {
            if (r != p && row_anticommutes(r, pauli)) {
                rowsum(r, p);
            }
        }
        for (std::size_t w = 0; w < words_; ++w) {
            xrow(p - n_)[w] = xrow(p)[w];
            zrow(p - n_)[w] = zrow(p)[w];
        }
        signs_[static_cast<std::size_t>(p - n_)] = signs_[static_cast<std::size_t>(p)];
        bool outcome = false;
        if (forced) {
            outcome = *forced;
        } else if (rng != nullptr) {
            outcome = ((*rng)() >> 63) != 0;
        }
        // Y factors: the symplectic row stores x=z=1 as Y itself, so no extra phase.
        set_row(p, pauli, outcome);
        return {outcome, false};
    }
    auto peek = peek_pauli(pauli);
    return {*peek, true};
}

std::optional<bool> Tableau::peek_pauli(const PauliOperator &pauli) const {
    if (static_cast<int>(pauli.num_qubits()) != n_) {
        throw std::invalid_argument("Tableau::peek_pauli: operator size mismatch");
    }
    for (int r = n_; r < 2 * n_; ++r) {
        if (row_anticommutes(r, pauli)) {
            return std::nullopt;
        }
    }
    std::vector<std::uint64_t> x(words_, 0), z(words_, 0);
    std::uint8_t sign = 0;
    for (int r = 0; r < n_; ++r) {
        if (row_anticommutes(r, pauli)) {
            multiply_into(x.data(), z.data(), sign, xrow(r + n_), zrow(r + n_), signs_[static_cast<std::size_t>(r + n_)],
                          words_);
        }
    }
    return sign != 0;
}

bool Tableau::is_valid() const {
    for (int i = 0; i < 2 * n_; ++i) {
        for (int j = i + 1; j < 2 * n_; ++j) {
            const bool expect = (j == i + n_);
            if (rows_anticommute(i, j) != expect) {
                return false;
            }
        }
    }
    return true;
}

PauliOperator Tableau::stabilizer(int i) const {
    const auto nq = static_cast<std::size_t>(n_);
    PauliOperator p(nq);
    for (int q = 0; q < n_; ++q) {
        p.x.set(static_cast<std::size_t>(q), xbit(n_ + i, q));
        p.z.set(static_cast<std::size_t>(q), (zrow(n_ + i)[q >> 6] >> (q & 63)) & 1u);
    }
    return p;
}

}  // namespace colornn
