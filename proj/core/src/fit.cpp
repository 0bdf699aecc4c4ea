#include "colornn/fit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace colornn {

double FitResult::epsilon_per_cycle() const {
    return 0.5 * (1.0 - std::pow(1.0 - 2.0 * epsilon_L, static_cast<double>(steps_per_cycle)));
}

double fidelity_model(double t_steps, double epsilon, double t0) {
    return 0.5 + 0.5 * std::pow(1.0 - 2.0 * epsilon, t_steps - t0);
}

std::vector<double> nelder_mead(const std::function<double(const std::vector<double> &)> &f, std::vector<double> x0,
                                const std::vector<double> &step, const NelderMeadOptions &opt) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> s(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) {
        s[i + 1][i] += step[i];
    }
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        fv[i] = f(s[i]);
    }
    std::vector<std::size_t> idx(n + 1);
    auto blend = [&](const std::vector<double> &a, const std::vector<double> &b, double t) {
        std::vector<double> r(n);
        for (std::size_t k = 0; k < n; ++k) {
            r[k] = a[k] + t * (b[k] - a[k]);
        }
        return r;
    };
    for (int it = 0; it < opt.max_iter; ++it) {
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const auto best = idx.front();
        const auto worst = idx.back();
        const auto second = idx[n - 1];
        double spread = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                spread = std::max(spread, std::abs(s[i][k] - s[best][k]));
            }
        }
        if (std::abs(fv[worst] - fv[best]) <= opt.f_tol && spread <= opt.x_tol) {
            break;
        }
        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) {
                continue;
            }
            for (std::size_t k = 0; k < n; ++k) {
                centroid[k] += s[i][k] / static_cast<double>(n);
            }
        }
        const auto xr = blend(centroid, s[worst], -1.0);
        const double fr = f(xr);
        if (fr < fv[best]) {
            const auto xe = blend(centroid, s[worst], -2.0);
            const double fe = f(xe);
            if (fe < fr) {
                s[worst] = xe;
                fv[worst] = fe;
            } else {
                s[worst] = xr;
                fv[worst] = fr;
            }
        } else if (fr < fv[second]) {
            s[worst] = xr;
            fv[worst] = fr;
        } else {
            const bool outside = fr < fv[worst];
            const auto xc = blend(centroid, outside ? xr : s[worst], 0.5);
            const double fc = f(xc);
            if (fc < std::min(fr, fv[worst])) {
                s[worst] = xc;
                fv[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i != best) {
                        s[i] = blend(s[best], s[i], 0.5);
                        fv[i] = f(s[i]);
                    }
                }
            }
        }
    }
    const auto best = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
    return s[best];
}

namespace {

struct Obs {
    double t;  // steps
    double f;
};

double rss_of(const std::vector<Obs> &obs, double eps, double t0) {
    if (eps < 0.0 || eps > 0.5) {
        return 1e300;
    }
    double s = 0.0;
    for (const auto &o : obs) {
        const double r = o.f - fidelity_model(o.t, eps, t0);
        s += r * r;
    }
    return s;
}

// Two-point log estimate from the first and last informative points.
double initial_epsilon(const std::vector<Obs> &obs, bool fix_t0) {
    std::vector<Obs> ok;
    for (const auto &o : obs) {
        if (o.f > 0.5 + 1e-9 && o.f < 1.0) {
            ok.push_back(o);
        }
    }
    double lambda = 0.0;  // -ln(1 - 2 eps) per step
    if (fix_t0 && !ok.empty()) {
        const auto &b = ok.back();
        lambda = -std::log(2.0 * b.f - 1.0) / b.t;
    } else if (ok.size() >= 2 && ok.back().t > ok.front().t) {
        lambda = (std::log(2.0 * ok.front().f - 1.0) - std::log(2.0 * ok.back().f - 1.0)) / (ok.back().t - ok.front().t);
    }
    lambda = std::max(lambda, 0.0);
    return std::clamp(0.5 * (1.0 - std::exp(-lambda)), 0.0, 0.5);
}

// Refines a 1-D minimum of g over [lo, hi] by golden section.
double golden(const std::function<double(double)> &g, double lo, double hi) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = g(c), fd = g(d);
    for (int i = 0; i < 200 && b - a > 1e-16; ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = g(d);
        }
    }
    return 0.5 * (a + b);
}

FitResult fit_obs(const std::vector<Obs> &obs, bool fix_t0) {
    FitResult res;
    res.fixed_t0 = fix_t0;
    const double eps0 = initial_epsilon(obs, fix_t0);
    if (fix_t0) {
        // Bracket around the estimate, then golden-section.
        const double hi = std::min(0.5, std::max(4.0 * eps0, 1e-6));
        auto g = [&](double e) { return rss_of(obs, e, 0.0); };
        double e = golden(g, 0.0, hi);
        if (g(0.5) < g(e)) {
            e = golden(g, 0.0, 0.5);
        }
        res.epsilon_L = e;
        res.t0 = 0.0;
    } else {
        double t_span = 0.0;
        for (const auto &o : obs) {
            t_span = std::max(t_span, o.t);
        }
        auto f = [&](const std::vector<double> &x) { return rss_of(obs, x[0], x[1]); };
        std::vector<double> x{eps0, 0.0};
        for (int restart = 0; restart < 4; ++restart) {
            x = nelder_mead(f, x, {std::max(0.1 * x[0], 1e-6), std::max(0.05 * t_span, 1.0)});
        }
        x = nelder_mead(f, x, {std::max(1e-3 * x[0], 1e-9), std::max(1e-3 * t_span, 1e-3)});
        res.epsilon_L = std::clamp(x[0], 0.0, 0.5);
        res.t0 = x[1];
    }
    res.rss = rss_of(obs, res.epsilon_L, res.t0);
    return res;
}

}  // namespace

FitResult fit_fidelity(const FidelitySeries &series, bool fix_t0, int bootstrap, std::uint64_t seed) {
    const std::size_t min_points = fix_t0 ? 1 : 3;
    if (series.points.size() < min_points) {
        throw FitError("fit_fidelity: too few points");
    }
    std::vector<Obs> obs;
    bool informative = false;
    for (const auto &p : series.points) {
        if (!(p.fidelity >= 0.0 && p.fidelity <= 1.0)) {
            throw FitError("fit_fidelity: fidelity outside [0, 1]");
        }
        obs.push_back({p.t * series.steps_per_cycle, p.fidelity});
        informative = informative || p.fidelity > 0.55;
    }
    if (!informative) {
        throw FitError("fit_fidelity: all fidelities near 1/2, data undecodable");
    }
    FitResult res = fit_obs(obs, fix_t0);
    res.steps_per_cycle = series.steps_per_cycle;
    res.ci_low = res.ci_high = res.epsilon_L;
    if (bootstrap > 0) {
        std::mt19937_64 gen(seed);
        std::vector<double> eps;
        eps.reserve(static_cast<std::size_t>(bootstrap));
        for (int b = 0; b < bootstrap; ++b) {
            auto re = obs;
            for (std::size_t i = 0; i < re.size(); ++i) {
                const auto n = series.points[i].n;
                if (n > 0) {
                    std::binomial_distribution<std::int64_t> bin(n, series.points[i].fidelity);
                    re[i].f = static_cast<double>(bin(gen)) / static_cast<double>(n);
                }
            }
            eps.push_back(fit_obs(re, fix_t0).epsilon_L);
        }
        std::sort(eps.begin(), eps.end());
        auto q = [&](double a) {
            return eps[std::min(eps.size() - 1, static_cast<std::size_t>(a * static_cast<double>(eps.size())))];
        };
        res.ci_low = q(0.025);
        res.ci_high = q(0.975);
    }
    return res;
}

PowerLawFit fit_powerlaw(const std::vector<RatePoint> &points, int d) {
    if (points.empty() || d < 3 || d % 2 == 0) {
        throw std::invalid_argument("fit_powerlaw: need points and odd d >= 3");
    }
    PowerLawFit out;
    out.exponent = 0.5 * (d + 1);
    double acc = 0.0;
    for (const auto &p : points) {
        if (!(p.p_phys > 0.0) || !(p.epsilon_L > 0.0)) {
            throw std::invalid_argument("fit_powerlaw: rates must be positive");
        }
        acc += std::log(p.epsilon_L) - out.exponent * std::log(p.p_phys);
    }
    out.prefactor = std::exp(acc / static_cast<double>(points.size()));
    out.pseudothreshold = pseudothreshold(out.prefactor, d);
    return out;
}

PowerLawFit fit_powerlaw_free(const std::vector<RatePoint> &points) {
    if (points.size() < 2) {
        throw std::invalid_argument("fit_powerlaw_free: need at least two points");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(points.size());
    for (const auto &p : points) {
        if (!(p.p_phys > 0.0) || !(p.epsilon_L > 0.0)) {
            throw std::invalid_argument("fit_powerlaw_free: rates must be positive");
        }
        const double x = std::log(p.p_phys), y = std::log(p.epsilon_L);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double den = n * sxx - sx * sx;
    if (den == 0.0) {
        throw std::invalid_argument("fit_powerlaw_free: degenerate abscissae");
    }
    PowerLawFit out;
    out.exponent = (n * sxy - sx * sy) / den;
    out.prefactor = std::exp((sy - out.exponent * sx) / n);
    out.pseudothreshold = out.exponent > 1.0 ? std::pow(out.prefactor, -1.0 / (out.exponent - 1.0)) : 0.0;
    return out;
}

double pseudothreshold(double prefactor, int d) {
    if (!(prefactor > 0.0) || d < 3) {
        throw std::invalid_argument("pseudothreshold: need C > 0 and d >= 3");
    }
    return std::pow(prefactor, -2.0 / (d - 1));
}

double prefactor_from_pseudothreshold(double eps_pseudo, int d) {
    if (!(eps_pseudo > 0.0) || d < 3) {
        throw std::invalid_argument("prefactor_from_pseudothreshold: need eps > 0 and d >= 3");
    }
    return std::pow(eps_pseudo, -0.5 * (d - 1));
}

double decoder_efficiency(double epsilon_optimal, double epsilon_L) {
    if (!(epsilon_L > 0.0) || !(epsilon_optimal > 0.0)) {
        throw std::invalid_argument("decoder_efficiency: rates must be positive");
    }
    return epsilon_optimal / epsilon_L;
}

std::vector<int> thinned_grid(int t_max, int max_points) {
    if (t_max < 1 || max_points < 2) {
        throw std::invalid_argument("thinned_grid: need t_max >= 1 and max_points >= 2");
    }
    int dt = 1;
    while (t_max / dt >= max_points) {
        ++dt;
    }
    std::vector<int> grid;
    for (int t = dt; t <= t_max; t += dt) {
        grid.push_back(t);
    }
    return grid;
}

std::vector<int> log_spaced_grid(int lo, int hi, int count) {
    if (lo < 1 || hi < lo || count < 1) {
        throw std::invalid_argument("log_spaced_grid: bad range");
    }
    std::vector<int> out;
    for (int k = 0; k < count; ++k) {
        const double f = count == 1 ? 1.0 : static_cast<double>(k) / (count - 1);
        const int v = static_cast<int>(std::lround(std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)))));
        if (out.empty() || v > out.back()) {
            out.push_back(v);
        }
    }
    return out;
}

}  // namespace colornn
