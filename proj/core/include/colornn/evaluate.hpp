#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>

#include "colornn/dataset.hpp"
#include "colornn/decoder_net.hpp"
#include "colornn/fit.hpp"

namespace colornn {

/// Reads a dataset file straight into packed form.
PackedSequences load_packed(const std::string &path, int hidden, DatasetHeader *header = nullptr);
PackedSequences pack(const Dataset &dataset, int hidden);

/// Fidelity per readout cycle of the lower head: the prediction is odd iff
/// p_lower >= 1/2. Error bars are bootstrap standard deviations over samples.
FidelitySeries evaluate_network(const DecoderNet &net, const PackedSequences &data, int chunk = 128,
                                std::uint64_t seed = 1);

/// Same, for an arbitrary per-readout predictor.
using ParityPredictor = std::function<bool(const SyndromeSequence &, std::size_t readout)>;
FidelitySeries evaluate_predictor(const Dataset &data, const ParityPredictor &predict, std::uint64_t seed = 1);

/// Keeps points on the thinned grid t_n = n dT with fewer than `max_points` points.
FidelitySeries thin_series(const FidelitySeries &series, int max_points = 50);

void write_fidelity_csv(const FidelitySeries &series, std::ostream &out);
FidelitySeries read_fidelity_csv(std::istream &in);

}  // namespace colornn
