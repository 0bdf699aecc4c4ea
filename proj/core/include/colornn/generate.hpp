#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "colornn/dataset.hpp"

namespace colornn {

struct GenerateConfig {
    int distance = 3;
    double p_error = 1e-3;
    std::uint64_t count = 1000;
    int t_min = 1;
    int t_max = 40;
    DatasetMode mode = DatasetMode::kTrain;
    ResetMode reset_mode = ResetMode::kReset;
    Basis basis = Basis::kZ;
    std::uint64_t seed = 1;
    /// Test mode: readout cycles; empty means the thinned grid up to t_max.
    std::vector<int> readout_cycles;
    int max_points = 50;
};

/// Header describing what `generate` would produce for `cfg`.
DatasetHeader header_for(const GenerateConfig &cfg);

/// Record i draws from CounterRng(seed, i). Train records have T uniform in
/// [t_min, t_max] with a single readout at T; test records all have
/// T = t_max with readouts branched at every grid cycle.
Dataset generate_dataset(const GenerateConfig &cfg);
void generate_to_file(const GenerateConfig &cfg, const std::string &path);

}  // namespace colornn
