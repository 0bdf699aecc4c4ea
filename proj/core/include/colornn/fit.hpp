#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "colornn/circuit.hpp"

namespace colornn {

class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// t in cycles; F the fraction of correct predictions out of n.
struct FidelityPoint {
    double t = 0.0;
    double fidelity = 1.0;
    std::int64_t n = 0;
    double err = 0.0;
};

struct FidelitySeries {
    std::vector<FidelityPoint> points;
    int steps_per_cycle = kStepsPerCycle;
};

/// Rates per step; t0 in steps.
struct FitResult {
    double epsilon_L = 0.0;
    double t0 = 0.0;
    double ci_low = 0.0;   // 95% bootstrap interval of epsilon_L
    double ci_high = 0.0;
    double rss = 0.0;
    bool fixed_t0 = false;
    int steps_per_cycle = kStepsPerCycle;

    /// Per-cycle rate implied by the per-step rate.
    double epsilon_per_cycle() const;
};

/// F(t) = 1/2 + 1/2 (1 - 2 eps)^((t - t0) / t_step), t and t0 in steps.
double fidelity_model(double t_steps, double epsilon, double t0);

struct NelderMeadOptions {
    int max_iter = 20000;
    double f_tol = 1e-22;
    double x_tol = 1e-13;
};

/// Minimizes f from x0 with initial simplex offsets `step`.
std::vector<double> nelder_mead(const std::function<double(const std::vector<double> &)> &f, std::vector<double> x0,
                                const std::vector<double> &step, const NelderMeadOptions &opt = {});

/// Least-squares fit of the decay model. With `bootstrap` > 0 the 95%
/// interval comes from refits of binomially resampled points.
FitResult fit_fidelity(const FidelitySeries &series, bool fix_t0, int bootstrap = 0, std::uint64_t seed = 1);

/// Points as (eps_phys, eps_L).
struct RatePoint {
    double p_phys = 0.0;
    double epsilon_L = 0.0;
};

struct PowerLawFit {
    double prefactor = 0.0;  // C_d
    double exponent = 0.0;
    double pseudothreshold = 0.0;
};

/// log eps_L = log C + ((d+1)/2) log eps_phys with the exponent fixed.
PowerLawFit fit_powerlaw(const std::vector<RatePoint> &points, int d);
/// Ordinary least squares in log-log space; both prefactor and exponent free.
PowerLawFit fit_powerlaw_free(const std::vector<RatePoint> &points);

/// eps_pseudo = C^(-2/(d-1)).
double pseudothreshold(double prefactor, int d);
/// C = eps_pseudo^(-(d-1)/2).
double prefactor_from_pseudothreshold(double eps_pseudo, int d);

double decoder_efficiency(double epsilon_optimal, double epsilon_L);

/// t_n = n * dT for n >= 1 and t_n <= t_max, where dT is the smallest
/// integer leaving fewer than `max_points` points.
std::vector<int> thinned_grid(int t_max, int max_points = 50);

/// Roughly log-spaced distinct integers in [lo, hi], `count` of them at most.
std::vector<int> log_spaced_grid(int lo, int hi, int count);

}  // namespace colornn
