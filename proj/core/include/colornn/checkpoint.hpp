#pragma once

#include <cstdint>
#include <string>

#include "colornn/adam.hpp"
#include "colornn/decoder_net.hpp"

namespace colornn {

/// Everything needed to resume training bit-exactly.
struct Checkpoint {
    NetShape shape;
    Eigen::VectorXd params;
    AdamOptions adam;
    Eigen::VectorXd adam_m;
    Eigen::VectorXd adam_v;
    std::int64_t adam_steps = 0;
    std::uint64_t sampler_key = 0;
    std::uint64_t sampler_counter = 0;
    std::uint64_t dropout_key = 0;
    std::uint64_t dropout_counter = 0;
    int epoch = 0;
    double best_epsilon = 0.0;
    std::string meta_json;  // free-form run description

    bool operator==(const Checkpoint &) const = default;
};

inline constexpr std::uint16_t kCheckpointVersion = 1;

/// Little-endian: "CCNK" | u16 version | body | u32 CRC-32 of body.
void save_checkpoint(const Checkpoint &ckpt, const std::string &path);
/// Throws std::runtime_error on version mismatch, truncation or bad checksum.
Checkpoint load_checkpoint(const std::string &path);

DecoderNet net_from_checkpoint(const Checkpoint &ckpt);

}  // namespace colornn
