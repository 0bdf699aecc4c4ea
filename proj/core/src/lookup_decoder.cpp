#include "colornn/lookup_decoder.hpp"

#include <stdexcept>

#include "colornn/noise.hpp"

namespace colornn {

namespace {

void faults_for_schedule(const CircuitSchedule &sched, int segment, std::vector<ForcedFault> &out) {
    for (const auto &step : sched.steps) {
        for (const auto &op : step.ops) {
            ForcedFault f;
            f.segment = segment;
            f.step = step.index;
            f.qubit = op.q0;
            if (op.kind == OpKind::kMeasure) {
                f.flip = true;
                out.push_back(f);
            } else if (op.kind == OpKind::kCphase) {
                for (int k = 1; k < 16; ++k) {
                    f.pauli = kPauliChars[k / 4];
                    f.partner_pauli = kPauliChars[k % 4];
                    out.push_back(f);
                }
            } else {
                for (int k = 1; k < 4; ++k) {
                    f.pauli = kPauliChars[k];
                    out.push_back(f);
                }
            }
        }
    }
}

}  // namespace

std::vector<ForcedFault> enumerate_single_faults(const ExperimentRunner &runner, int cycles) {
    std::vector<ForcedFault> out;
    faults_for_schedule(runner.init_schedule(), 0, out);
    for (int t = 1; t <= cycles; ++t) {
        faults_for_schedule(runner.cycle_schedule(), t, out);
    }
    faults_for_schedule(runner.readout_schedule(), cycles + 1, out);
    return out;
}

BitVector signature_of(const SyndromeSequence &seq) {
    BitVector sig;
    for (int t = 0; t < seq.cycles; ++t) {
        sig.append(seq.delta_s[static_cast<std::size_t>(t)]);
        sig.append(seq.s_flag[static_cast<std::size_t>(t)]);
    }
    sig.append(seq.delta_f());
    return sig;
}

LookupDecoder::LookupDecoder(const CodeLayout &layout, int cycles, ResetMode reset_mode, Basis basis)
    : cycles_(cycles), reset_mode_(reset_mode), basis_(basis) {
    if (layout.distance != 3) {
        throw std::invalid_argument("LookupDecoder: distance 3 only");
    }
    if (cycles < 1) {
        throw std::invalid_argument("LookupDecoder: need at least one cycle");
    }
    ExperimentRunner runner(layout, reset_mode, basis);
    SyndromeExtractor extractor(layout, reset_mode, basis);
    const auto faults = enumerate_single_faults(runner, cycles);
    const NoiseParams quiet = NoiseParams::uniform(0.0);
    std::vector<ForcedFault> one(1);
    for (std::size_t i = 0; i < faults.size(); ++i) {
        one[0] = faults[i];
        CounterRng rng(0x5eed, i);
        const auto seq = extractor.extract(runner.run(cycles, quiet, rng, &one));
        auto &v = table_[signature_of(seq)];
        (seq.p_true() ? v.odd : v.even) += 1;
    }
    n_faults_ = faults.size();
    for (const auto &[sig, v] : table_) {
        ambiguous_ += (v.even > 0 && v.odd > 0) ? 1 : 0;
    }
}

bool LookupDecoder::decode(const SyndromeSequence &seq) const {
    if (seq.cycles != cycles_) {
        throw std::invalid_argument("LookupDecoder::decode: sequence length differs from table");
    }
    const auto it = table_.find(signature_of(seq));
    if (it == table_.end()) {
        return false;
    }
    return it->second.odd > it->second.even;
}

LookupMonteCarlo run_lookup_monte_carlo(const LookupDecoder &decoder, const CodeLayout &layout, double p_error,
                                        std::int64_t samples, std::uint64_t seed) {
    ExperimentRunner runner(layout, decoder.reset_mode(), decoder.basis());
    SyndromeExtractor extractor(layout, decoder.reset_mode(), decoder.basis());
    const auto noise = NoiseParams::uniform(p_error);
    LookupMonteCarlo mc;
    for (std::int64_t i = 0; i < samples; ++i) {
        CounterRng rng(seed, static_cast<std::uint64_t>(i));
        const auto seq = extractor.extract(runner.run(decoder.cycles(), noise, rng));
        mc.failures += decoder.decode(seq) != seq.p_true() ? 1 : 0;
        ++mc.samples;
    }
    return mc;
}

}  // namespace colornn
