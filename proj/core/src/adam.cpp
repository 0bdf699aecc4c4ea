#include "colornn/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace colornn {

void Adam::step(Eigen::VectorXd &params, const Eigen::VectorXd &grad) {
    if (grad.size() != params.size() || m_.size() != params.size()) {
        throw std::invalid_argument("Adam::step: size mismatch");
    }
    if (!grad.allFinite()) {
        throw std::invalid_argument("Adam::step: non-finite gradient");
    }
    ++t_;
    m_ = opt_.beta1 * m_ + (1.0 - opt_.beta1) * grad;
    v_ = opt_.beta2 * v_ + (1.0 - opt_.beta2) * grad.cwiseAbs2();
    const double c1 = 1.0 - std::pow(opt_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(opt_.beta2, static_cast<double>(t_));
    const double lr = opt_.lr;
    const double eps = opt_.eps;
    params.array() -= lr * (m_.array() / c1) / ((v_.array() / c2).sqrt() + eps);
}

Adam Adam::restore(const AdamOptions &opt, Eigen::VectorXd m, Eigen::VectorXd v, std::int64_t steps) {
    if (m.size() != v.size() || steps < 0) {
        throw std::invalid_argument("Adam::restore: inconsistent state");
    }
    Adam a;
    a.opt_ = opt;
    a.m_ = std::move(m);
    a.v_ = std::move(v);
    a.t_ = steps;
    return a;
}

}  // namespace colornn
