#pragma once

#include <cmath>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

namespace colornn {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// One LSTM layer stored in a flat parameter slice. Gate rows are stacked
/// in the order i, f, o, m:
///   w (4N x D) | v (4N x N) | b (4N)
struct LstmShape {
    int input = 0;
    int hidden = 0;
    Eigen::Index size() const { return 4L * hidden * (input + hidden + 1); }
};

template <typename Ptr>
struct LstmSlice {
    LstmShape shape;
    Ptr data;

    auto w() const { return Eigen::Map<Mat>(data, 4 * shape.hidden, shape.input); }
    auto v() const { return Eigen::Map<Mat>(data + 4L * shape.hidden * shape.input, 4 * shape.hidden, shape.hidden); }
    auto b() const {
        return Eigen::Map<Vec>(data + 4L * shape.hidden * (shape.input + shape.hidden), 4 * shape.hidden);
    }

private:
    static constexpr bool kConst = std::is_const_v<std::remove_pointer_t<Ptr>>;
    using Mat = std::conditional_t<kConst, const MatrixXd, MatrixXd>;
    using Vec = std::conditional_t<kConst, const VectorXd, VectorXd>;
};

using LstmParams = LstmSlice<const double *>;
using LstmGrads = LstmSlice<double *>;

/// Activations kept for backpropagation through time. Index t of h and c
/// is the state after t inputs (h[0] = c[0] = 0).
struct LstmCache {
    std::vector<MatrixXd> x;       // T inputs, D x B
    std::vector<MatrixXd> gates;   // T post-activation gate stacks, 4N x B
    std::vector<MatrixXd> c;       // T + 1
    std::vector<MatrixXd> tanh_c;  // T
    std::vector<MatrixXd> h;       // T + 1
};

struct LstmState {
    MatrixXd h;
    MatrixXd c;
    MatrixXd gates;   // post-activation i, f, o, m of the last step
    MatrixXd tanh_c;

    LstmState(int hidden, Eigen::Index batch)
        : h(MatrixXd::Zero(hidden, batch)), c(MatrixXd::Zero(hidden, batch)), gates(4 * hidden, batch) {}
};

/// Advances the state by one input column block x (D x B).
void lstm_step(const LstmParams &p, const MatrixXd &x, LstmState &state);

/// Runs the layer over x[0..T-1] (each D x B) from zero state and returns
/// h_1..h_T. Fills `cache` when given.
std::vector<MatrixXd> lstm_forward(const LstmParams &p, const std::vector<MatrixXd> &x, LstmCache *cache = nullptr);

/// Accumulates parameter gradients into `g` for upstream gradients dh[t]
/// on h_{t+1}. Returns gradients with respect to the inputs when `dx` is set.
void lstm_backward(const LstmParams &p, const LstmCache &cache, const std::vector<MatrixXd> &dh, const LstmGrads &g,
                   std::vector<MatrixXd> *dx);

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace colornn
