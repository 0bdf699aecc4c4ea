#include "colornn/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace colornn {

void NoiseParams::validate() const {
    if (!(p_error >= 0.0 && p_error <= 1.0) || std::isnan(p_error)) {
        throw std::invalid_argument("NoiseParams: p_error must lie in [0, 1]");
    }
}

std::vector<Fault> inject_errors(const CircuitSchedule &schedule, const NoiseParams &noise, CounterRng &rng) {
    noise.validate();
    std::vector<Fault> faults;
    if (noise.p_error == 0.0) {
        return faults;
    }
    const double p = noise.p_error;
    for (std::size_t s = 0; s < schedule.steps.size(); ++s) {
        const auto &ops = schedule.steps[s].ops;
        for (std::size_t i = 0; i < ops.size(); ++i) {
            const auto &op = ops[i];
            bool enabled = false;
            switch (op.kind) {
                case OpKind::kPrep:
                case OpKind::kReset: enabled = noise.prep; break;
                case OpKind::kIdle: enabled = noise.idle; break;
                case OpKind::kHadamard: enabled = noise.rotation; break;
                case OpKind::kCphase: enabled = noise.cphase; break;
                case OpKind::kMeasure: enabled = noise.measurement; break;
            }
            if (!enabled || !rng.bernoulli(p)) {
                continue;
            }
            Fault f;
            f.step = static_cast<int>(s);
            f.op = static_cast<int>(i);
            if (op.kind == OpKind::kMeasure) {
                f.flip = true;
            } else if (op.kind == OpKind::kCphase) {
                const auto k = 1 + rng.below(15);
                f.pauli0 = kPauliChars[k / 4];
                f.pauli1 = kPauliChars[k % 4];
            } else {
                f.pauli0 = kPauliChars[1 + rng.below(3)];
            }
            faults.push_back(f);
        }
    }
    return faults;
}

}  // namespace colornn
