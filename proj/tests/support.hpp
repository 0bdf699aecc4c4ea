#pragma once

#include <complex>
#include <vector>

#include "colornn/code.hpp"
#include "colornn/rng.hpp"

namespace colornn::testing {

/// Dense state vector on up to ~12 qubits. Qubit q is bit q of the index.
class StateVector {
public:
    explicit StateVector(int n) : n_(n), amp_(std::size_t{1} << n) { amp_[0] = 1.0; }

    int num_qubits() const { return n_; }

    void hadamard(int q) {
        const double s = 1.0 / std::sqrt(2.0);
        const std::size_t m = std::size_t{1} << q;
        for (std::size_t i = 0; i < amp_.size(); ++i) {
            if ((i & m) == 0) {
                const auto a = amp_[i], b = amp_[i | m];
                amp_[i] = s * (a + b);
                amp_[i | m] = s * (a - b);
            }
        }
    }
    void cphase(int a, int b) {
        const std::size_t m = (std::size_t{1} << a) | (std::size_t{1} << b);
        for (std::size_t i = 0; i < amp_.size(); ++i) {
            if ((i & m) == m) {
                amp_[i] = -amp_[i];
            }
        }
    }
    void pauli_x(int q) {
        const std::size_t m = std::size_t{1} << q;
        for (std::size_t i = 0; i < amp_.size(); ++i) {
            if ((i & m) == 0) {
                std::swap(amp_[i], amp_[i | m]);
            }
        }
    }
    void pauli_z(int q) {
        const std::size_t m = std::size_t{1} << q;
        for (std::size_t i = 0; i < amp_.size(); ++i) {
            if (i & m) {
                amp_[i] = -amp_[i];
            }
        }
    }
    /// Probability of reading 1 on qubit q.
    double prob_one(int q) const {
        const std::size_t m = std::size_t{1} << q;
        double p = 0.0;
        for (std::size_t i = 0; i < amp_.size(); ++i) {
            if (i & m) {
                p += std::norm(amp_[i]);
            }
        }
        return p;
    }
    void project(int q, bool outcome) {
        const std::size_t m = std::size_t{1} << q;
        double norm = 0.0;
        for (std::size_t i = 0; i < amp_.size(); ++i) {
            if (((i & m) != 0) != outcome) {
                amp_[i] = 0.0;
            } else {
                norm += std::norm(amp_[i]);
            }
        }
        for (auto &a : amp_) {
            a /= std::sqrt(norm);
        }
    }
    /// psi := (psi + P psi) / |...|, the projection onto P's +1 eigenspace.
    void project_plus(const PauliOperator &p) {
        std::vector<std::complex<double>> out = amp_;
        for (std::size_t i = 0; i < amp_.size(); ++i) {
            const auto [j, phase] = act(p, i);
            out[j] += phase * amp_[i];
        }
        double norm = 0.0;
        for (const auto &a : out) {
            norm += std::norm(a);
        }
        for (auto &a : out) {
            a /= std::sqrt(norm);
        }
        amp_ = std::move(out);
    }
    /// <psi| P |psi> for a Hermitian Pauli (Y = iXZ).
    double expectation(const PauliOperator &p) const {
        std::complex<double> acc = 0.0;
        for (std::size_t i = 0; i < amp_.size(); ++i) {
            const auto [j, phase] = act(p, i);
            acc += std::conj(amp_[j]) * phase * amp_[i];
        }
        return acc.real();
    }

private:
    /// P|i> = phase |j>.
    std::pair<std::size_t, std::complex<double>> act(const PauliOperator &p, std::size_t i) const {
        std::size_t j = i;
        std::complex<double> phase = 1.0;
        for (int q = 0; q < n_; ++q) {
            const bool x = p.x[static_cast<std::size_t>(q)], z = p.z[static_cast<std::size_t>(q)];
            // Z acts first, then X; Y = i X Z.
            if (z && ((i >> q) & 1u)) {
                phase = -phase;
            }
            if (x) {
                j ^= std::size_t{1} << q;
            }
            if (x && z) {
                phase *= std::complex<double>(0.0, 1.0);
            }
        }
        return {j, phase};
    }

    int n_;
    std::vector<std::complex<double>> amp_;
};

inline PauliOperator random_pauli(int n, CounterRng &rng) {
    PauliOperator p(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) {
        const auto k = rng.below(4);
        p.x.set(static_cast<std::size_t>(q), k == 1 || k == 2);
        p.z.set(static_cast<std::size_t>(q), k == 2 || k == 3);
    }
    return p;
}

}  // namespace colornn::testing
