#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace colornn {

struct AdamOptions {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    bool operator==(const AdamOptions &) const = default;
};

/// Adam with bias-corrected moments.
class Adam {
public:
    Adam() = default;
    Adam(Eigen::Index n, const AdamOptions &opt) : opt_(opt), m_(Eigen::VectorXd::Zero(n)), v_(Eigen::VectorXd::Zero(n)) {}

    /// Throws std::invalid_argument on a non-finite gradient or size mismatch.
    void step(Eigen::VectorXd &params, const Eigen::VectorXd &grad);

    const AdamOptions &options() const { return opt_; }
    void set_lr(double lr) { opt_.lr = lr; }
    std::int64_t steps() const { return t_; }
    const Eigen::VectorXd &first_moment() const { return m_; }
    const Eigen::VectorXd &second_moment() const { return v_; }

    static Adam restore(const AdamOptions &opt, Eigen::VectorXd m, Eigen::VectorXd v, std::int64_t steps);

private:
    AdamOptions opt_;
    Eigen::VectorXd m_;
    Eigen::VectorXd v_;
    std::int64_t t_ = 0;
};

}  // namespace colornn
