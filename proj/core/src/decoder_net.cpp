#include "colornn/decoder_net.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace colornn {

namespace {

MatrixXd dropout_mask(int rows, Eigen::Index cols, double keep, CounterRng &rng) {
    MatrixXd m(rows, cols);
    const double scale = 1.0 / keep;
    for (Eigen::Index c = 0; c < cols; ++c) {
        for (int r = 0; r < rows; ++r) {
            m(r, c) = rng.bernoulli(keep) ? scale : 0.0;
        }
    }
    return m;
}

double clip(double p) { return std::clamp(p, kProbClip, 1.0 - kProbClip); }

// d loss / d logit of H(pt, clip(sigmoid(logit))); zero where the clip is active.
double logit_grad(double p, double pt) {
    if (p < kProbClip || p > 1.0 - kProbClip) {
        return 0.0;
    }
    return p - pt;
}

}  // namespace

NetShape net_shape_for(const CodeLayout &layout, int hidden) {
    return {4 * layout.n_tiles(), hidden, layout.n_tiles()};
}

Batch make_batch(const std::vector<const SyndromeSequence *> &seqs, const NetShape &shape, bool all_readouts) {
    if (seqs.empty()) {
        throw std::invalid_argument("make_batch: empty batch");
    }
    Batch b;
    b.cycles = seqs.front()->cycles;
    b.size = static_cast<int>(seqs.size());
    const auto &ref = *seqs.front();
    if (all_readouts) {
        for (const auto &f : ref.finals) {
            b.readout_cycles.push_back(f.cycle);
        }
    } else {
        b.readout_cycles.push_back(ref.finals.back().cycle);
    }
    const auto nr = static_cast<Eigen::Index>(b.readout_cycles.size());
    const int half = shape.input_bits / 2;
    b.x.assign(static_cast<std::size_t>(b.cycles), MatrixXd::Zero(shape.input_bits, b.size));
    b.delta_f.assign(b.readout_cycles.size(), MatrixXd::Zero(shape.final_bits, b.size));
    b.p_true = MatrixXd::Zero(nr, b.size);
    for (int j = 0; j < b.size; ++j) {
        const auto &s = *seqs[static_cast<std::size_t>(j)];
        if (s.cycles != b.cycles) {
            throw std::invalid_argument("make_batch: sequences differ in length");
        }
        for (int t = 0; t < b.cycles; ++t) {
            const auto &ds = s.delta_s[static_cast<std::size_t>(t)];
            const auto &sf = s.s_flag[static_cast<std::size_t>(t)];
            if (static_cast<int>(ds.size()) != half || static_cast<int>(sf.size()) != half) {
                throw std::invalid_argument("make_batch: input width mismatch");
            }
            auto &x = b.x[static_cast<std::size_t>(t)];
            for (auto i : ds.ones()) {
                x(i, j) = 1.0;
            }
            for (auto i : sf.ones()) {
                x(half + i, j) = 1.0;
            }
        }
        const std::size_t first = all_readouts ? 0 : s.finals.size() - 1;
        if (s.finals.size() - first != b.readout_cycles.size()) {
            throw std::invalid_argument("make_batch: readout grids differ");
        }
        for (std::size_t r = 0; r < b.readout_cycles.size(); ++r) {
            const auto &f = s.finals[first + r];
            if (f.cycle != b.readout_cycles[r] || static_cast<int>(f.delta_f.size()) != shape.final_bits) {
                throw std::invalid_argument("make_batch: readout mismatch");
            }
            for (auto i : f.delta_f.ones()) {
                b.delta_f[r](i, j) = 1.0;
            }
            b.p_true(static_cast<Eigen::Index>(r), j) = f.p_true ? 1.0 : 0.0;
        }
    }
    return b;
}

PackedSequences::PackedSequences(const NetShape &shape)
    : shape_(shape),
      x_words_(static_cast<std::size_t>((shape.input_bits + 63) / 64)),
      f_words_(static_cast<std::size_t>((shape.final_bits + 63) / 64)) {}

void PackedSequences::add(const SyndromeSequence &seq) {
    const auto half = static_cast<std::size_t>(shape_.input_bits / 2);
    Entry e;
    e.cycles = seq.cycles;
    e.x_offset = x_.size();
    e.f_offset = f_.size();
    for (int t = 0; t < seq.cycles; ++t) {
        BitVector row = seq.delta_s[static_cast<std::size_t>(t)];
        if (row.size() != half || seq.s_flag[static_cast<std::size_t>(t)].size() != half) {
            throw std::invalid_argument("PackedSequences::add: input width mismatch");
        }
        row.append(seq.s_flag[static_cast<std::size_t>(t)]);
        const auto w = row.words();
        x_.insert(x_.end(), w.begin(), w.end());
    }
    for (const auto &f : seq.finals) {
        if (static_cast<int>(f.delta_f.size()) != shape_.final_bits) {
            throw std::invalid_argument("PackedSequences::add: delta_f width mismatch");
        }
        const auto w = f.delta_f.words();
        f_.insert(f_.end(), w.begin(), w.end());
        p_.push_back(f.p_true ? 1 : 0);
        e.final_cycles.push_back(f.cycle);
    }
    entries_.push_back(std::move(e));
}

bool PackedSequences::p_true(std::size_t i, std::size_t readout) const {
    return p_[entries_[i].f_offset / f_words_ + readout] != 0;
}

Batch PackedSequences::batch(const std::vector<std::size_t> &idx, bool all_readouts) const {
    if (idx.empty()) {
        throw std::invalid_argument("PackedSequences::batch: empty batch");
    }
    const auto &ref = entries_[idx.front()];
    Batch b;
    b.cycles = ref.cycles;
    b.size = static_cast<int>(idx.size());
    const std::size_t first = all_readouts ? 0 : ref.final_cycles.size() - 1;
    b.readout_cycles.assign(ref.final_cycles.begin() + static_cast<std::ptrdiff_t>(first), ref.final_cycles.end());
    b.x.assign(static_cast<std::size_t>(b.cycles), MatrixXd::Zero(shape_.input_bits, b.size));
    b.delta_f.assign(b.readout_cycles.size(), MatrixXd::Zero(shape_.final_bits, b.size));
    b.p_true = MatrixXd::Zero(static_cast<Eigen::Index>(b.readout_cycles.size()), b.size);
    auto scatter = [](const std::uint64_t *w, std::size_t nw, int bits, auto &&col) {
        for (std::size_t k = 0; k < nw; ++k) {
            for (std::uint64_t v = w[k]; v != 0; v &= v - 1) {
                const int i = static_cast<int>(64 * k) + std::countr_zero(v);
                if (i < bits) {
                    col(i) = 1.0;
                }
            }
        }
    };
    for (int j = 0; j < b.size; ++j) {
        const auto &e = entries_[idx[static_cast<std::size_t>(j)]];
        if (e.cycles != b.cycles || e.final_cycles.size() != ref.final_cycles.size()) {
            throw std::invalid_argument("PackedSequences::batch: sequences differ in length or readouts");
        }
        for (int t = 0; t < b.cycles; ++t) {
            scatter(&x_[e.x_offset + static_cast<std::size_t>(t) * x_words_], x_words_, shape_.input_bits,
                    b.x[static_cast<std::size_t>(t)].col(j));
        }
        for (std::size_t r = 0; r < b.readout_cycles.size(); ++r) {
            const std::size_t slot = e.f_offset / f_words_ + first + r;
            scatter(&f_[slot * f_words_], f_words_, shape_.final_bits, b.delta_f[r].col(j));
            b.p_true(static_cast<Eigen::Index>(r), j) = p_[slot];
        }
    }
    return b;
}

double cross_entropy(double p_true, double p) {
    const double q = clip(p);
    return -p_true * std::log(q) - (1.0 - p_true) * std::log(1.0 - q);
}

double decoder_loss(const VectorXd &p_upper, const VectorXd &p_lower, const VectorXd &p_true, double head_weight_sqnorm,
                    double c_reg) {
    if (p_upper.size() != p_lower.size() || p_true.size() != p_lower.size() || p_true.size() == 0) {
        throw std::invalid_argument("decoder_loss: size mismatch");
    }
    double sum = 0.0;
    for (Eigen::Index k = 0; k < p_true.size(); ++k) {
        sum += cross_entropy(p_true[k], p_lower[k]) + 0.5 * cross_entropy(p_true[k], p_upper[k]);
    }
    return sum / static_cast<double>(p_true.size()) + c_reg * head_weight_sqnorm;
}

DecoderNet::DecoderNet(const NetShape &shape) : shape_(shape) {
    if (shape.input_bits <= 0 || shape.hidden <= 0 || shape.final_bits <= 0) {
        throw std::invalid_argument("DecoderNet: non-positive dimension");
    }
    const int n = shape.hidden;
    l1_ = {shape.input_bits, n};
    l2_ = {n, n};
    Eigen::Index off = 0;
    auto add = [&](const char *name, Eigen::Index len, bool reg) {
        groups_.push_back({name, off, len, reg});
        off += len;
        return off - len;
    };
    off_l1_ = off;
    add("layer1.w", 4L * n * l1_.input, false);
    add("layer1.v", 4L * n * n, false);
    add("layer1.b", 4L * n, false);
    off_l2_ = off;
    add("layer2.w", 4L * n * n, false);
    add("layer2.v", 4L * n * n, false);
    add("layer2.b", 4L * n, false);
    auto head = [&](HeadLayout &h, int in, const char *wh, const char *bh, const char *wo, const char *bo) {
        h.in = in;
        h.w_hidden = add(wh, static_cast<Eigen::Index>(n) * in, true);
        h.b_hidden = add(bh, n, false);
        h.w_out = add(wo, n, true);
        h.b_out = add(bo, 1, false);
    };
    head(upper_, n, "upper.w_hidden", "upper.b_hidden", "upper.w_out", "upper.b_out");
    head(lower_, n + shape.final_bits, "lower.w_hidden", "lower.b_hidden", "lower.w_out", "lower.b_out");
    params_ = VectorXd::Zero(off);
}

LstmParams DecoderNet::layer(int k) const {
    return k == 1 ? LstmParams{l1_, params_.data() + off_l1_} : LstmParams{l2_, params_.data() + off_l2_};
}

LstmGrads DecoderNet::layer_grad(int k, VectorXd &grad) const {
    return k == 1 ? LstmGrads{l1_, grad.data() + off_l1_} : LstmGrads{l2_, grad.data() + off_l2_};
}

void DecoderNet::initialize(CounterRng &rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(shape_.hidden));
    for (const auto &g : groups_) {
        const bool bias = std::string_view(g.name).find(".b") != std::string_view::npos;
        for (Eigen::Index k = 0; k < g.length; ++k) {
            params_[g.offset + k] = bias ? 0.0 : (2.0 * rng.uniform() - 1.0) * bound;
        }
    }
    const int n = shape_.hidden;
    for (int k : {1, 2}) {
        auto b = LstmGrads{k == 1 ? l1_ : l2_, params_.data() + (k == 1 ? off_l1_ : off_l2_)}.b();
        b.segment(n, n).setOnes();
    }
}

double DecoderNet::head_weight_sqnorm() const {
    double s = 0.0;
    for (const auto &g : groups_) {
        if (g.regularized) {
            s += params_.segment(g.offset, g.length).squaredNorm();
        }
    }
    return s;
}

void DecoderNet::add_regularizer_grad(double c, VectorXd &grad) const {
    for (const auto &g : groups_) {
        if (g.regularized) {
            grad.segment(g.offset, g.length) += 2.0 * c * params_.segment(g.offset, g.length);
        }
    }
}

HeadOutputs DecoderNet::forward(const Batch &batch) const {
    const int n = shape_.hidden;
    const auto b = static_cast<Eigen::Index>(batch.size);
    const auto nr = static_cast<Eigen::Index>(batch.readout_cycles.size());
    HeadOutputs out{MatrixXd(nr, b), MatrixXd(nr, b)};
    const auto p1 = layer(1);
    const auto p2 = layer(2);
    LstmState s1(n, b), s2(n, b);

    const auto uw = Eigen::Map<const MatrixXd>(params_.data() + upper_.w_hidden, n, upper_.in);
    const auto ub = Eigen::Map<const VectorXd>(params_.data() + upper_.b_hidden, n);
    const auto uo = Eigen::Map<const VectorXd>(params_.data() + upper_.w_out, n);
    const double ubo = params_[upper_.b_out];
    const auto lw = Eigen::Map<const MatrixXd>(params_.data() + lower_.w_hidden, n, lower_.in);
    const auto lb = Eigen::Map<const VectorXd>(params_.data() + lower_.b_hidden, n);
    const auto lo = Eigen::Map<const VectorXd>(params_.data() + lower_.w_out, n);
    const double lbo = params_[lower_.b_out];

    std::size_t r = 0;
    MatrixXd xl(lower_.in, b);
    for (int t = 1; t <= batch.cycles && r < batch.readout_cycles.size(); ++t) {
        const auto &xt = batch.x[static_cast<std::size_t>(t - 1)];
        if (xt.rows() != shape_.input_bits || xt.cols() != b) {
            throw std::invalid_argument("DecoderNet::forward: input dimension mismatch");
        }
        lstm_step(p1, xt, s1);
        lstm_step(p2, s1.h, s2);
        while (r < batch.readout_cycles.size() && batch.readout_cycles[r] == t) {
            const MatrixXd a = s2.h.cwiseMax(0.0);
            const MatrixXd hu = ((uw * a).colwise() + ub).cwiseMax(0.0);
            xl.topRows(n) = a;
            xl.bottomRows(shape_.final_bits) = batch.delta_f[r];
            const MatrixXd hl = ((lw * xl).colwise() + lb).cwiseMax(0.0);
            for (Eigen::Index j = 0; j < b; ++j) {
                out.p_upper(static_cast<Eigen::Index>(r), j) = clip(sigmoid(uo.dot(hu.col(j)) + ubo));
                out.p_lower(static_cast<Eigen::Index>(r), j) = clip(sigmoid(lo.dot(hl.col(j)) + lbo));
            }
            ++r;
        }
    }
    if (r != batch.readout_cycles.size()) {
        throw std::invalid_argument("DecoderNet::forward: readout beyond sequence end");
    }
    return out;
}

double DecoderNet::forward_backward(const Batch &batch, const LossConfig &cfg, CounterRng *dropout, VectorXd &grad,
                                    HeadOutputs *outputs) const {
    if (batch.readout_cycles.size() != 1 || batch.readout_cycles.front() != batch.cycles) {
        throw std::invalid_argument("forward_backward: expected one readout at the last cycle");
    }
    const int n = shape_.hidden;
    const auto b = static_cast<Eigen::Index>(batch.size);
    const double keep = cfg.keep_prob;
    grad = VectorXd::Zero(params_.size());
    auto mask = [&](int rows) {
        return dropout != nullptr ? dropout_mask(rows, b, keep, *dropout) : MatrixXd::Ones(rows, b);
    };

    LstmCache c1, c2;
    const auto h1 = lstm_forward(layer(1), batch.x, &c1);
    std::vector<MatrixXd> m1;
    std::vector<MatrixXd> in2;
    m1.reserve(h1.size());
    in2.reserve(h1.size());
    for (const auto &h : h1) {
        m1.push_back(mask(n));
        in2.push_back(h.cwiseProduct(m1.back()));
    }
    const auto h2 = lstm_forward(layer(2), in2, &c2);
    const MatrixXd &ht = h2.back();
    const MatrixXd m2 = mask(n);
    const MatrixXd a = ht.cwiseMax(0.0).cwiseProduct(m2);

    struct HeadPass {
        MatrixXd pre, hid, mask;
        VectorXd p;
    };
    auto head_forward = [&](const HeadLayout &h, const MatrixXd &x) {
        const auto w = Eigen::Map<const MatrixXd>(params_.data() + h.w_hidden, n, h.in);
        const auto bh = Eigen::Map<const VectorXd>(params_.data() + h.b_hidden, n);
        const auto wo = Eigen::Map<const VectorXd>(params_.data() + h.w_out, n);
        HeadPass hp;
        hp.pre = (w * x).colwise() + bh;
        hp.mask = mask(n);
        hp.hid = hp.pre.cwiseMax(0.0).cwiseProduct(hp.mask);
        hp.p = ((wo.transpose() * hp.hid).array() + params_[h.b_out]).unaryExpr([](double z) { return sigmoid(z); });
        return hp;
    };
    // d loss / d head input; accumulates head parameter gradients.
    auto head_backward = [&](const HeadLayout &h, const MatrixXd &x, const HeadPass &hp, const VectorXd &dlogit) {
        const auto w = Eigen::Map<const MatrixXd>(params_.data() + h.w_hidden, n, h.in);
        const auto wo = Eigen::Map<const VectorXd>(params_.data() + h.w_out, n);
        auto gw = Eigen::Map<MatrixXd>(grad.data() + h.w_hidden, n, h.in);
        auto gb = Eigen::Map<VectorXd>(grad.data() + h.b_hidden, n);
        auto gwo = Eigen::Map<VectorXd>(grad.data() + h.w_out, n);
        gwo.noalias() += hp.hid * dlogit;
        grad[h.b_out] += dlogit.sum();
        MatrixXd dpre = wo * dlogit.transpose();
        dpre.array() *= hp.mask.array() * (hp.pre.array() > 0.0).cast<double>();
        gw.noalias() += dpre * x.transpose();
        gb += dpre.rowwise().sum();
        return MatrixXd(w.transpose() * dpre);
    };

    MatrixXd xl(lower_.in, b);
    xl.topRows(n) = a;
    xl.bottomRows(shape_.final_bits) = batch.delta_f.front();
    const auto up = head_forward(upper_, a);
    const auto lo = head_forward(lower_, xl);

    const VectorXd pt = batch.p_true.row(0).transpose();
    VectorXd pu(b), pl(b), du(b), dl(b);
    const double inv_b = 1.0 / static_cast<double>(b);
    for (Eigen::Index j = 0; j < b; ++j) {
        pu[j] = clip(up.p[j]);
        pl[j] = clip(lo.p[j]);
        du[j] = 0.5 * inv_b * logit_grad(up.p[j], pt[j]);
        dl[j] = inv_b * logit_grad(lo.p[j], pt[j]);
    }
    const double loss = decoder_loss(pu, pl, pt, head_weight_sqnorm(), cfg.c_reg);
    if (outputs != nullptr) {
        outputs->p_upper = pu.transpose();
        outputs->p_lower = pl.transpose();
    }

    MatrixXd da = head_backward(upper_, a, up, du);
    da += head_backward(lower_, xl, lo, dl).topRows(n);
    std::vector<MatrixXd> dh2(h2.size(), MatrixXd::Zero(n, b));
    dh2.back() = da.cwiseProduct(m2).cwiseProduct((ht.array() > 0.0).cast<double>().matrix());
    std::vector<MatrixXd> dx2;
    lstm_backward(layer(2), c2, dh2, layer_grad(2, grad), &dx2);
    for (std::size_t t = 0; t < dx2.size(); ++t) {
        dx2[t].array() *= m1[t].array();
    }
    lstm_backward(layer(1), c1, dx2, layer_grad(1, grad), nullptr);
    add_regularizer_grad(cfg.c_reg, grad);
    return loss;
}

std::pair<double, double> decoder_forward(const DecoderNet &net, const SyndromeSequence &seq) {
    const auto batch = make_batch({&seq}, net.shape());
    const auto out = net.forward(batch);
    return {out.p_upper(0, 0), out.p_lower(0, 0)};
}

}  // namespace colornn
