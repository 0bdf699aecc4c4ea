#include <gtest/gtest.h>

#include <cmath>

#include "colornn/decoder_net.hpp"
#include "gradcheck.hpp"

using namespace colornn;
using colornn::testing::random_sequences;

namespace {

std::vector<const SyndromeSequence *> ptrs(const std::vector<SyndromeSequence> &v) {
    std::vector<const SyndromeSequence *> out;
    for (const auto &s : v) {
        out.push_back(&s);
    }
    return out;
}

}  // namespace

TEST(DecoderNet, ParameterLayout) {
    const NetShape shape{12, 8, 3};
    DecoderNet net(shape);
    const Eigen::Index lstm1 = 4 * 8 * (12 + 8 + 1);
    const Eigen::Index lstm2 = 4 * 8 * (8 + 8 + 1);
    const Eigen::Index upper = 8 * 8 + 8 + 8 + 1;
    const Eigen::Index lower = 8 * 11 + 8 + 8 + 1;
    EXPECT_EQ(net.num_params(), lstm1 + lstm2 + upper + lower);
    Eigen::Index expect = 0;
    for (const auto &g : net.groups()) {
        EXPECT_EQ(g.offset, expect);
        expect += g.length;
    }
    EXPECT_EQ(expect, net.num_params());
}

TEST(DecoderNet, ZeroParametersGiveOneHalf) {
    const auto L = build_layout(3);
    CounterRng rng(1, 0);
    const auto seqs = random_sequences(L, 4, 3, rng);
    DecoderNet net(net_shape_for(L, 8));
    const auto out = net.forward(make_batch(ptrs(seqs), net.shape()));
    EXPECT_TRUE((out.p_upper.array() == 0.5).all());
    EXPECT_TRUE((out.p_lower.array() == 0.5).all());
}

TEST(DecoderNet, EvaluationIsDeterministic) {
    const auto L = build_layout(3);
    CounterRng rng(2, 0);
    const auto seqs = random_sequences(L, 6, 5, rng);
    DecoderNet net(net_shape_for(L, 8));
    CounterRng init(2, 1);
    net.initialize(init);
    const auto batch = make_batch(ptrs(seqs), net.shape());
    const auto a = net.forward(batch);
    const auto b = net.forward(batch);
    EXPECT_EQ(a.p_lower, b.p_lower);
    EXPECT_EQ(a.p_upper, b.p_upper);
    const auto [pu, pl] = decoder_forward(net, seqs[2]);
    EXPECT_NEAR(pu, a.p_upper(0, 2), 1e-14);
    EXPECT_NEAR(pl, a.p_lower(0, 2), 1e-14);
}

TEST(DecoderNet, UpperHeadIgnoresFinalIncrement) {
    const auto L = build_layout(3);
    CounterRng rng(3, 0);
    auto seqs = random_sequences(L, 6, 4, rng);
    DecoderNet net(net_shape_for(L, 8));
    CounterRng init(3, 1);
    net.initialize(init);
    const auto a = net.forward(make_batch(ptrs(seqs), net.shape()));
    for (auto &s : seqs) {
        for (std::size_t i = 0; i < s.finals.back().delta_f.size(); ++i) {
            s.finals.back().delta_f.flip(i);
        }
    }
    const auto b = net.forward(make_batch(ptrs(seqs), net.shape()));
    EXPECT_EQ(a.p_upper, b.p_upper);
    EXPECT_NE(a.p_lower, b.p_lower);
}

TEST(DecoderNet, OutputsStayInsideClip) {
    const auto L = build_layout(3);
    CounterRng rng(4, 0);
    const auto seqs = random_sequences(L, 3, 4, rng);
    DecoderNet net(net_shape_for(L, 8));
    for (Eigen::Index i = 0; i < net.num_params(); ++i) {
        net.params()[i] = 50.0;
    }
    const auto out = net.forward(make_batch(ptrs(seqs), net.shape()));
    VectorXd grad;
    const double loss = net.forward_backward(make_batch(ptrs(seqs), net.shape()), LossConfig{0.0, 0.8}, nullptr, grad);
    EXPECT_TRUE(std::isfinite(loss));
    EXPECT_TRUE(grad.allFinite());
    (void)out;
}

TEST(Loss, ClosedForms) {
    VectorXd half = VectorXd::Constant(1, 0.5);
    EXPECT_NEAR(decoder_loss(half, half, VectorXd::Zero(1), 0.0, 0.0), 1.5 * std::log(2.0), 1e-15);
    const double clipped = decoder_loss(half, VectorXd::Constant(1, 1.0), VectorXd::Ones(1), 0.0, 0.0);
    EXPECT_NEAR(clipped, 0.5 * std::log(2.0) + 1e-7, 1e-12);
    EXPECT_NEAR(decoder_loss(half, half, VectorXd::Zero(1), 100.0 * 0.01, 1e-5) -
                    decoder_loss(half, half, VectorXd::Zero(1), 0.0, 1e-5),
                1e-5, 1e-12);
    EXPECT_THROW(decoder_loss(half, VectorXd::Zero(2), VectorXd::Zero(1), 0.0, 0.0), std::invalid_argument);
}

TEST(Loss, UnitNormWeightsAddCTimesSize) {
    // 100 regularized weights of unit magnitude, c = 1e-5.
    VectorXd half = VectorXd::Constant(1, 0.5);
    const double with = decoder_loss(half, half, VectorXd::Zero(1), 100.0, 1e-5);
    const double without = decoder_loss(half, half, VectorXd::Zero(1), 0.0, 1e-5);
    EXPECT_NEAR(with - without, 1e-3, 1e-15);
}

TEST(Loss, RegularizerGradientIsTwoCW) {
    DecoderNet net(NetShape{12, 8, 3});
    CounterRng init(9, 1);
    net.initialize(init);
    VectorXd g = VectorXd::Zero(net.num_params());
    net.add_regularizer_grad(1e-5, g);
    double sq = 0.0;
    for (const auto &grp : net.groups()) {
        const auto seg = g.segment(grp.offset, grp.length);
        if (grp.regularized) {
            EXPECT_NEAR((seg - 2e-5 * net.params().segment(grp.offset, grp.length)).norm(), 0.0, 1e-18);
            sq += net.params().segment(grp.offset, grp.length).squaredNorm();
        } else {
            EXPECT_EQ(seg.norm(), 0.0) << grp.name;
        }
    }
    EXPECT_NEAR(net.head_weight_sqnorm(), sq, 1e-12);
}

TEST(Backprop, EveryGroupMatchesFiniteDifferences) {
    const auto L = build_layout(3);
    for (bool dropout : {false, true}) {
        for (const auto &g : colornn::testing::gradient_check(L, 8, 5, 4, 21, dropout)) {
            EXPECT_LT(g.rel_error, 1e-4) << g.name << (dropout ? " (dropout)" : "");
            EXPECT_GT(g.grad_norm, 0.0) << g.name;
        }
    }
}

TEST(Backprop, ZeroGradientAtExactMinimum) {
    // All-zero weights with balanced labels: both heads output 1/2, which
    // minimizes the loss over the output biases, and every other gradient
    // is multiplied by a zero activation or weight.
    const auto L = build_layout(3);
    CounterRng rng(5, 0);
    auto seqs = random_sequences(L, 3, 4, rng);
    for (std::size_t k = 0; k < seqs.size(); ++k) {
        seqs[k].finals.back().p_true = k % 2 == 0;
    }
    DecoderNet net(net_shape_for(L, 8));
    VectorXd grad;
    net.forward_backward(make_batch(ptrs(seqs), net.shape()), LossConfig{1e-5, 0.8}, nullptr, grad);
    EXPECT_LT(grad.norm(), 1e-10);
    seqs[0].finals.back().p_true = false;
    net.forward_backward(make_batch(ptrs(seqs), net.shape()), LossConfig{1e-5, 0.8}, nullptr, grad);
    EXPECT_GT(grad.norm(), 0.1);
}

TEST(Batch, PackedMatchesDirect) {
    const auto L = build_layout(3);
    CounterRng rng(6, 0);
    const auto seqs = random_sequences(L, 7, 5, rng);
    const auto shape = net_shape_for(L, 8);
    PackedSequences packed(shape);
    for (const auto &s : seqs) {
        packed.add(s);
    }
    const auto a = make_batch(ptrs(seqs), shape);
    const auto b = packed.batch({0, 1, 2, 3, 4});
    ASSERT_EQ(a.x.size(), b.x.size());
    for (std::size_t t = 0; t < a.x.size(); ++t) {
        EXPECT_EQ(a.x[t], b.x[t]);
    }
    EXPECT_EQ(a.delta_f[0], b.delta_f[0]);
    EXPECT_EQ(a.p_true, b.p_true);
    EXPECT_EQ(packed.cycles(3), 7);
    EXPECT_EQ(packed.p_true(3, 0), seqs[3].p_true());
}

TEST(Batch, RejectsMixedLengths) {
    const auto L = build_layout(3);
    CounterRng rng(7, 0);
    auto a = random_sequences(L, 3, 1, rng);
    auto b = random_sequences(L, 4, 1, rng);
    EXPECT_THROW(make_batch({&a[0], &b[0]}, net_shape_for(L, 8)), std::invalid_argument);
}
