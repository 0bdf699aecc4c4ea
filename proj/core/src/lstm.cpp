#include "colornn/lstm.hpp"

#include <stdexcept>

namespace colornn {

void lstm_step(const LstmParams &p, const MatrixXd &x, LstmState &state) {
    const int n = p.shape.hidden;
    auto &z = state.gates;
    z.noalias() = p.w() * x;
    z.noalias() += p.v() * state.h;
    z.colwise() += p.b();
    z.topRows(3 * n) = z.topRows(3 * n).unaryExpr([](double a) { return sigmoid(a); });
    z.bottomRows(n) = z.bottomRows(n).array().tanh();
    state.c = z.middleRows(n, n).cwiseProduct(state.c) + z.topRows(n).cwiseProduct(z.bottomRows(n));
    state.tanh_c = state.c.array().tanh();
    state.h = z.middleRows(2 * n, n).cwiseProduct(state.tanh_c);
}

std::vector<MatrixXd> lstm_forward(const LstmParams &p, const std::vector<MatrixXd> &x, LstmCache *cache) {
    if (x.empty()) {
        return {};
    }
    const auto batch = x.front().cols();
    for (const auto &xt : x) {
        if (xt.rows() != p.shape.input || xt.cols() != batch) {
            throw std::invalid_argument("lstm_forward: input dimension mismatch");
        }
        if (!xt.allFinite()) {
            throw std::invalid_argument("lstm_forward: non-finite input");
        }
    }
    LstmState state(p.shape.hidden, batch);
    std::vector<MatrixXd> out;
    out.reserve(x.size());
    if (cache != nullptr) {
        cache->x = x;
        cache->gates.clear();
        cache->tanh_c.clear();
        cache->c.assign(1, state.c);
        cache->h.assign(1, state.h);
    }
    for (const auto &xt : x) {
        lstm_step(p, xt, state);
        if (cache != nullptr) {
            cache->gates.push_back(state.gates);
            cache->c.push_back(state.c);
            cache->tanh_c.push_back(state.tanh_c);
            cache->h.push_back(state.h);
        }
        out.push_back(state.h);
    }
    return out;
}

void lstm_backward(const LstmParams &p, const LstmCache &cache, const std::vector<MatrixXd> &dh, const LstmGrads &g,
                   std::vector<MatrixXd> *dx) {
    const int n = p.shape.hidden;
    const auto steps = cache.gates.size();
    if (dh.size() != steps) {
        throw std::invalid_argument("lstm_backward: gradient sequence length mismatch");
    }
    if (steps == 0) {
        return;
    }
    const auto batch = cache.gates.front().cols();
    auto gw = g.w();
    auto gv = g.v();
    auto gb = g.b();
    if (dx != nullptr) {
        dx->assign(steps, MatrixXd());
    }
    MatrixXd dh_next = MatrixXd::Zero(n, batch);
    MatrixXd dc_next = MatrixXd::Zero(n, batch);
    MatrixXd dz(4 * n, batch);
    for (std::size_t t = steps; t-- > 0;) {
        const auto &gt = cache.gates[t];
        const auto i = gt.topRows(n).array();
        const auto f = gt.middleRows(n, n).array();
        const auto o = gt.middleRows(2 * n, n).array();
        const auto m = gt.bottomRows(n).array();
        const auto tc = cache.tanh_c[t].array();

        const MatrixXd dht = dh[t] + dh_next;
        const auto dha = dht.array();
        MatrixXd dc = dc_next + (dha * o * (1.0 - tc.square())).matrix();
        const auto dca = dc.array();
        dz.topRows(n) = (dca * m * i * (1.0 - i)).matrix();
        dz.middleRows(n, n) = (dca * cache.c[t].array() * f * (1.0 - f)).matrix();
        dz.middleRows(2 * n, n) = (dha * tc * o * (1.0 - o)).matrix();
        dz.bottomRows(n) = (dca * i * (1.0 - m.square())).matrix();
        dc_next = (dca * f).matrix();

        gw.noalias() += dz * cache.x[t].transpose();
        gv.noalias() += dz * cache.h[t].transpose();
        gb += dz.rowwise().sum();
        dh_next.noalias() = p.v().transpose() * dz;
        if (dx != nullptr) {
            (*dx)[t].noalias() = p.w().transpose() * dz;
        }
    }
}

}  // namespace colornn
