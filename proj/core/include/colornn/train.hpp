#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "colornn/adam.hpp"
#include "colornn/checkpoint.hpp"
#include "colornn/decoder_net.hpp"

namespace colornn {

struct TrainConfig {
    int distance = 3;
    int hidden = 32;
    double p_train = 1e-3;
    int batch_size = 64;
    int batches_per_epoch = 3000;
    int max_epochs = 1000;
    double learning_rate = 1e-3;
    double c_reg = 1e-5;
    double keep_prob = 0.8;
    std::uint64_t seed = 1;
    /// Stop after this many epochs without a new best (0 disables).
    int patience = 0;
    /// Wall-clock budget in minutes (0 disables).
    double time_limit_minutes = 0.0;

    // Dataset parameters, used by the tool when it generates data itself.
    std::uint64_t train_sequences = 200000;
    int t_min = 1;
    int t_max = 40;
    double p_validation = 1e-4;
    std::uint64_t validation_sequences = 1000;
    int validation_max_cycles = 1000;
    int validation_points = 30;
    double p_test = 1e-3;
    std::uint64_t test_sequences = 10000;
    int test_max_cycles = 300;

    void validate() const;
};

class TrainingDiverged : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EpochLog {
    int epoch = 0;
    double mean_loss = 0.0;
    double validation_epsilon = 0.0;  // per step; +inf when the fit failed
    bool improved = false;
    double seconds = 0.0;
};

struct TrainSummary {
    int epochs_run = 0;
    int best_epoch = 0;
    double best_epsilon = std::numeric_limits<double>::infinity();
    std::vector<EpochLog> log;
};

/// Buckets the training set by length and draws each mini-batch from one
/// bucket chosen with probability proportional to its size.
class BatchSampler {
public:
    BatchSampler(const PackedSequences &data, int batch_size, CounterRng rng);
    std::vector<std::size_t> next();
    const CounterRng &rng() const { return rng_; }

private:
    const PackedSequences &data_;
    int batch_size_;
    CounterRng rng_;
    std::vector<std::vector<std::size_t>> buckets_;
    std::vector<std::size_t> bucket_of_;
};

/// Validation per step with t0 fixed to zero; +inf if the series is undecodable.
double validation_epsilon(const DecoderNet &net, const PackedSequences &validation);

/// Epoch loop with validation-based model selection. The best network is
/// written to `checkpoint_path` whenever validation improves; the state
/// after the final epoch goes to `checkpoint_path + ".last"`.
TrainSummary train(const TrainConfig &cfg, const PackedSequences &train_set, const PackedSequences &validation,
                   const std::string &checkpoint_path, const std::function<void(const EpochLog &)> &on_epoch = {},
                   const Checkpoint *resume = nullptr);

/// key = value lines; '#' starts a comment, [section] lines are ignored.
TrainConfig parse_train_config(const std::string &text);
TrainConfig load_train_config(const std::string &path);
std::string train_config_to_json(const TrainConfig &cfg);

}  // namespace colornn
