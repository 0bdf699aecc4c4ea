#pragma once

#include <cstdint>
#include <vector>

#include "colornn/lstm.hpp"
#include "colornn/rng.hpp"
#include "colornn/syndrome.hpp"

namespace colornn {

struct NetShape {
    int input_bits = 12;  // delta_s || s_flag per cycle
    int hidden = 32;      // LSTM width N, also the head hidden width
    int final_bits = 3;   // |delta_f|
    bool operator==(const NetShape &) const = default;
};

NetShape net_shape_for(const CodeLayout &layout, int hidden);

/// Equal-length sequences packed column-wise. Readouts share their cycles
/// across the batch.
struct Batch {
    int cycles = 0;
    int size = 0;
    std::vector<MatrixXd> x;        // cycles entries, input_bits x size
    std::vector<int> readout_cycles;  // ascending, 1-based
    std::vector<MatrixXd> delta_f;  // per readout, final_bits x size
    MatrixXd p_true;                // readouts x size
};

/// Packs sequences of equal length. With `all_readouts` false only the
/// final readout of each sequence is kept.
Batch make_batch(const std::vector<const SyndromeSequence *> &seqs, const NetShape &shape, bool all_readouts = false);

/// Compact in-memory store of many sequences, one packed word run per cycle.
class PackedSequences {
public:
    explicit PackedSequences(const NetShape &shape);

    void add(const SyndromeSequence &seq);
    std::size_t size() const { return entries_.size(); }
    int cycles(std::size_t i) const { return entries_[i].cycles; }
    const std::vector<int> &final_cycles(std::size_t i) const { return entries_[i].final_cycles; }
    bool p_true(std::size_t i, std::size_t readout) const;
    const NetShape &shape() const { return shape_; }

    /// Same contract as make_batch on the selected entries.
    Batch batch(const std::vector<std::size_t> &idx, bool all_readouts = false) const;

private:
    struct Entry {
        int cycles = 0;
        std::size_t x_offset = 0;
        std::size_t f_offset = 0;
        std::vector<int> final_cycles;
    };
    NetShape shape_;
    std::size_t x_words_;
    std::size_t f_words_;
    std::vector<Entry> entries_;
    std::vector<std::uint64_t> x_;
    std::vector<std::uint64_t> f_;
    std::vector<std::uint8_t> p_;
};

struct HeadOutputs {
    MatrixXd p_upper;  // readouts x batch
    MatrixXd p_lower;
};

struct LossConfig {
    double c_reg = 1e-5;
    double keep_prob = 0.8;
};

inline constexpr double kProbClip = 1e-7;

/// H(p1, p2) with p2 clipped to [kProbClip, 1 - kProbClip].
double cross_entropy(double p_true, double p);

/// Mean over the batch of H(pt, p_lower) + H(pt, p_upper) / 2, plus
/// c_reg * head_weight_sqnorm.
double decoder_loss(const VectorXd &p_upper, const VectorXd &p_lower, const VectorXd &p_true, double head_weight_sqnorm,
                    double c_reg);

/// Two LSTM layers followed by two evaluation heads. All parameters live in
/// one contiguous vector:
///   layer1 | layer2 | upper head | lower head
/// with each head laid out as
///   hidden weights (N x in) | hidden bias (N) | output weights (N) | output bias (1)
/// The upper head reads ReL(h_T); the lower head reads [ReL(h_T) || delta_f].
class DecoderNet {
public:
    explicit DecoderNet(const NetShape &shape);

    const NetShape &shape() const { return shape_; }
    Eigen::Index num_params() const { return params_.size(); }
    VectorXd &params() { return params_; }
    const VectorXd &params() const { return params_; }

    /// Weights uniform in [-1/sqrt(N), 1/sqrt(N)], biases 0, forget bias 1.
    void initialize(CounterRng &rng);

    /// Dropout-free probabilities at every readout of the batch.
    HeadOutputs forward(const Batch &batch) const;

    /// Training pass on a batch whose single readout is at the last cycle.
    /// Fills `grad` (resized) with the gradient of the returned loss. Dropout
    /// masks come from `dropout`; pass nullptr to disable dropout.
    double forward_backward(const Batch &batch, const LossConfig &cfg, CounterRng *dropout, VectorXd &grad,
                            HeadOutputs *outputs = nullptr) const;

    /// Sum of squares of the head weights (biases excluded).
    double head_weight_sqnorm() const;
    /// Adds the gradient of c * head_weight_sqnorm to `grad`.
    void add_regularizer_grad(double c, VectorXd &grad) const;

    /// Parameter groups as (name, offset, length), for diagnostics and tests.
    struct Group {
        const char *name;
        Eigen::Index offset;
        Eigen::Index length;
        bool regularized;
    };
    const std::vector<Group> &groups() const { return groups_; }

private:
    struct HeadLayout {
        int in = 0;
        Eigen::Index w_hidden = 0, b_hidden = 0, w_out = 0, b_out = 0;
    };

    LstmParams layer(int k) const;
    LstmGrads layer_grad(int k, VectorXd &grad) const;

    NetShape shape_;
    LstmShape l1_, l2_;
    Eigen::Index off_l1_ = 0, off_l2_ = 0;
    HeadLayout upper_, lower_;
    VectorXd params_;
    std::vector<Group> groups_;
};

/// (p_upper, p_lower) for a single sequence at its final readout.
std::pair<double, double> decoder_forward(const DecoderNet &net, const SyndromeSequence &seq);

}  // namespace colornn
