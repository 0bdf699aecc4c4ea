#include "colornn/generate.hpp"

#include <stdexcept>

#include "colornn/fit.hpp"

namespace colornn {

namespace {

void check(const GenerateConfig &cfg) {
    if (cfg.t_min < 1 || cfg.t_max < cfg.t_min) {
        throw std::invalid_argument("generate: need 1 <= t_min <= t_max");
    }
    NoiseParams::uniform(cfg.p_error).validate();
}

template <typename Sink>
void generate_into(const GenerateConfig &cfg, const DatasetHeader &header, Sink &&sink) {
    const auto layout = build_layout(cfg.distance);
    ExperimentRunner runner(layout, cfg.reset_mode, cfg.basis);
    SyndromeExtractor extractor(layout, cfg.reset_mode, cfg.basis);
    const auto noise = NoiseParams::uniform(cfg.p_error);
    const auto span = static_cast<std::uint64_t>(cfg.t_max - cfg.t_min + 1);
    for (std::uint64_t i = 0; i < cfg.count; ++i) {
        CounterRng rng(cfg.seed, i);
        if (cfg.mode == DatasetMode::kTrain) {
            const int cycles = cfg.t_min + static_cast<int>(rng.below(span));
            sink(extractor.extract(runner.run(cycles, noise, rng)));
        } else {
            sink(extractor.extract(runner.run(cfg.t_max, noise, rng, nullptr, header.readout_cycles)));
        }
    }
}

}  // namespace

DatasetHeader header_for(const GenerateConfig &cfg) {
    check(cfg);
    const auto layout = build_layout(cfg.distance);
    DatasetHeader h;
    h.distance = cfg.distance;
    h.n_tiles = layout.n_tiles();
    h.p_error = cfg.p_error;
    h.reset_mode = cfg.reset_mode;
    h.basis = cfg.basis;
    h.mode = cfg.mode;
    h.seed = cfg.seed;
    h.count = cfg.count;
    h.t_min = cfg.mode == DatasetMode::kTrain ? cfg.t_min : cfg.t_max;
    h.t_max = cfg.t_max;
    if (cfg.mode == DatasetMode::kTest) {
        h.readout_cycles = cfg.readout_cycles.empty() ? thinned_grid(cfg.t_max, cfg.max_points) : cfg.readout_cycles;
        if (h.readout_cycles.back() != cfg.t_max) {
            h.readout_cycles.push_back(cfg.t_max);
        }
    }
    h.layout_json = layout_to_json(layout);
    return h;
}

Dataset generate_dataset(const GenerateConfig &cfg) {
    Dataset ds;
    ds.header = header_for(cfg);
    ds.records.reserve(cfg.count);
    generate_into(cfg, ds.header, [&](SyndromeSequence &&s) { ds.records.push_back(std::move(s)); });
    return ds;
}

void generate_to_file(const GenerateConfig &cfg, const std::string &path) {
    const auto header = header_for(cfg);
    DatasetWriter w(path, header);
    generate_into(cfg, header, [&](SyndromeSequence &&s) { w.write(s); });
    w.close();
}

}  // namespace colornn
