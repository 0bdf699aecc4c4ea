#include "colornn/train.hpp"

#include <chrono>
#include <cmath>
#include <map>

#include "colornn/evaluate.hpp"
#include "colornn/fit.hpp"

namespace colornn {

BatchSampler::BatchSampler(const PackedSequences &data, int batch_size, CounterRng rng)
    : data_(data), batch_size_(batch_size), rng_(rng) {
    if (data.size() == 0) {
        throw std::invalid_argument("BatchSampler: empty training set");
    }
    std::map<int, std::size_t> index;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto [it, fresh] = index.try_emplace(data.cycles(i), buckets_.size());
        if (fresh) {
            buckets_.emplace_back();
        }
        buckets_[it->second].push_back(i);
        bucket_of_.push_back(it->second);
    }
}

std::vector<std::size_t> BatchSampler::next() {
    const auto &bucket = buckets_[bucket_of_[rng_.below(data_.size())]];
    std::vector<std::size_t> idx(static_cast<std::size_t>(batch_size_));
    for (auto &i : idx) {
        i = bucket[rng_.below(bucket.size())];
    }
    return idx;
}

double validation_epsilon(const DecoderNet &net, const PackedSequences &validation) {
    try {
        return fit_fidelity(evaluate_network(net, validation), true).epsilon_L;
    } catch (const FitError &) {
        return std::numeric_limits<double>::infinity();
    }
}

TrainSummary train(const TrainConfig &cfg, const PackedSequences &train_set, const PackedSequences &validation,
                   const std::string &checkpoint_path, const std::function<void(const EpochLog &)> &on_epoch,
                   const Checkpoint *resume) {
    cfg.validate();
    const NetShape shape{train_set.shape().input_bits, cfg.hidden, train_set.shape().final_bits};
    DecoderNet net(shape);
    Adam adam(net.num_params(), AdamOptions{cfg.learning_rate});
    CounterRng sampler_rng(cfg.seed, 2);
    CounterRng dropout(cfg.seed, 3);
    TrainSummary summary;
    int first_epoch = 1;
    if (resume != nullptr) {
        if (!(resume->shape == shape)) {
            throw std::invalid_argument("train: checkpoint shape does not match the configuration");
        }
        net.params() = resume->params;
        adam = Adam::restore(resume->adam, resume->adam_m, resume->adam_v, resume->adam_steps);
        sampler_rng = CounterRng::from_state(resume->sampler_key, resume->sampler_counter);
        dropout = CounterRng::from_state(resume->dropout_key, resume->dropout_counter);
        first_epoch = resume->epoch + 1;
        summary.best_epsilon = resume->best_epsilon;
        summary.best_epoch = resume->epoch;
    } else {
        CounterRng init_rng(cfg.seed, 1);
        net.initialize(init_rng);
    }
    BatchSampler sampler(train_set, cfg.batch_size, sampler_rng);
    const LossConfig loss_cfg{cfg.c_reg, cfg.keep_prob};
    const auto meta = train_config_to_json(cfg);
    const auto start = std::chrono::steady_clock::now();

    auto snapshot = [&](int epoch, double best) {
        Checkpoint c;
        c.shape = shape;
        c.params = net.params();
        c.adam = adam.options();
        c.adam_m = adam.first_moment();
        c.adam_v = adam.second_moment();
        c.adam_steps = adam.steps();
        c.sampler_key = sampler.rng().key();
        c.sampler_counter = sampler.rng().counter();
        c.dropout_key = dropout.key();
        c.dropout_counter = dropout.counter();
        c.epoch = epoch;
        c.best_epsilon = best;
        c.meta_json = meta;
        return c;
    };

    int since_best = 0;
    VectorXd grad;
    for (int epoch = first_epoch; epoch <= cfg.max_epochs; ++epoch) {
        const auto t0 = std::chrono::steady_clock::now();
        double loss_sum = 0.0;
        for (int b = 0; b < cfg.batches_per_epoch; ++b) {
            const auto batch = train_set.batch(sampler.next());
            const double loss = net.forward_backward(batch, loss_cfg, &dropout, grad);
            if (!std::isfinite(loss) || !grad.allFinite()) {
                throw TrainingDiverged("training diverged at epoch " + std::to_string(epoch) + ", batch " +
                                       std::to_string(b) + " (loss " + std::to_string(loss) + ")");
            }
            adam.step(net.params(), grad);
            loss_sum += loss;
        }
        EpochLog log;
        log.epoch = epoch;
        log.mean_loss = loss_sum / cfg.batches_per_epoch;
        log.validation_epsilon = validation_epsilon(net, validation);
        log.improved = log.validation_epsilon < summary.best_epsilon;
        if (log.improved) {
            summary.best_epsilon = log.validation_epsilon;
            summary.best_epoch = epoch;
            save_checkpoint(snapshot(epoch, summary.best_epsilon), checkpoint_path);
            since_best = 0;
        } else {
            ++since_best;
        }
        log.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        summary.log.push_back(log);
        summary.epochs_run = epoch;
        if (on_epoch) {
            on_epoch(log);
        }
        save_checkpoint(snapshot(epoch, summary.best_epsilon), checkpoint_path + ".last");
        const double minutes = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / 60.0;
        if ((cfg.patience > 0 && since_best >= cfg.patience) ||
            (cfg.time_limit_minutes > 0.0 && minutes >= cfg.time_limit_minutes)) {
            break;
        }
    }
    return summary;
}

}  // namespace colornn
