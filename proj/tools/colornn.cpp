// colornn command line: generate, train, evaluate, fit, sweep.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <fmt/ostream.h>
#include <nlohmann/json.hpp>

#include "colornn/checkpoint.hpp"
#include "colornn/evaluate.hpp"
#include "colornn/fit.hpp"
#include "colornn/generate.hpp"
#include "colornn/train.hpp"

using namespace colornn;
using json = nlohmann::ordered_json;

namespace {

struct Options {
    bool deterministic = false;

    GenerateConfig gen;
    std::string gen_mode = "train";
    std::string gen_reset = "reset";
    std::string gen_basis = "Z";
    std::string gen_out;
    int gen_log_grid = 0;

    std::string train_config;
    std::string train_data;
    std::string train_val;
    std::string train_out;
    std::string train_resume;
    std::string train_log;

    std::string eval_checkpoint;
    std::string eval_data;
    std::string eval_out;

    std::string fit_in;
    bool fit_fix_t0 = false;
    int fit_bootstrap = 200;
    std::string fit_out;

    std::string sweep_checkpoint;
    std::vector<double> sweep_p;
    std::uint64_t sweep_count = 10000;
    int sweep_t_max = 300;
    std::uint64_t sweep_seed = 7;
    int sweep_points = 50;
    std::string sweep_out;
    std::string sweep_curves;
};

std::ofstream open_out(const std::string &path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    return out;
}

json fit_to_json(const FitResult &r) {
    json j;
    j["epsilon_L_per_step"] = r.epsilon_L;
    j["epsilon_L_per_cycle"] = r.epsilon_per_cycle();
    j["t0_steps"] = r.t0;
    j["ci95"] = {r.ci_low, r.ci_high};
    j["fixed_t0"] = r.fixed_t0;
    j["steps_per_cycle"] = r.steps_per_cycle;
    j["rss"] = r.rss;
    return j;
}

int run_generate(Options &o) {
    o.gen.mode = o.gen_mode == "test" ? DatasetMode::kTest : DatasetMode::kTrain;
    o.gen.reset_mode = o.gen_reset == "no_reset" ? ResetMode::kNoReset : ResetMode::kReset;
    o.gen.basis = o.gen_basis == "X" ? Basis::kX : Basis::kZ;
    if (o.gen_log_grid > 0) {
        o.gen.readout_cycles = log_spaced_grid(1, o.gen.t_max, o.gen_log_grid);
    }
    generate_to_file(o.gen, o.gen_out);
    json j;
    j["written"] = o.gen_out;
    j["records"] = o.gen.count;
    std::cout << j.dump() << '\n';
    return 0;
}

int run_train(Options &o) {
    const auto cfg = load_train_config(o.train_config);
    DatasetHeader th, vh;
    const auto train_set = load_packed(o.train_data, cfg.hidden, &th);
    const auto val_set = load_packed(o.train_val, cfg.hidden, &vh);
    if (th.distance != cfg.distance || vh.distance != cfg.distance) {
        throw std::invalid_argument("dataset distance does not match the configuration");
    }
    Checkpoint resume;
    const Checkpoint *resume_ptr = nullptr;
    if (!o.train_resume.empty()) {
        resume = load_checkpoint(o.train_resume);
        resume_ptr = &resume;
    }
    std::ofstream log;
    if (!o.train_log.empty()) {
        log = open_out(o.train_log);
        log << "epoch,loss,val_eps,improved,seconds\n";
    }
    const auto summary = train(
        cfg, train_set, val_set, o.train_out,
        [&](const EpochLog &e) {
            fmt::print(stderr, "epoch {:4d} loss {:.6f} val_eps {:.4e}{} ({:.1f}s)\n", e.epoch, e.mean_loss,
                       e.validation_epsilon, e.improved ? " *" : "", e.seconds);
            if (log) {
                fmt::print(log, "{},{:.9g},{:.9g},{},{:.3f}\n", e.epoch, e.mean_loss, e.validation_epsilon,
                           e.improved ? 1 : 0, e.seconds);
                log.flush();
            }
        },
        resume_ptr);
    json j;
    j["checkpoint"] = o.train_out;
    j["best_epoch"] = summary.best_epoch;
    j["best_validation_epsilon"] = summary.best_epsilon;
    j["epochs_run"] = summary.epochs_run;
    j["deterministic"] = o.deterministic;
    std::cout << j.dump() << '\n';
    return 0;
}

int run_evaluate(Options &o) {
    const auto ckpt = load_checkpoint(o.eval_checkpoint);
    const auto net = net_from_checkpoint(ckpt);
    const auto data = load_packed(o.eval_data, ckpt.shape.hidden);
    const auto series = thin_series(evaluate_network(net, data));
    auto out = open_out(o.eval_out);
    write_fidelity_csv(series, out);
    json j;
    j["points"] = series.points.size();
    j["csv"] = o.eval_out;
    std::cout << j.dump() << '\n';
    return 0;
}

int run_fit(Options &o) {
    std::ifstream in(o.fit_in);
    if (!in) {
        throw std::runtime_error("cannot open " + o.fit_in);
    }
    const auto series = read_fidelity_csv(in);
    const auto r = fit_fidelity(series, o.fit_fix_t0, o.fit_bootstrap);
    const auto text = fit_to_json(r).dump();
    if (o.fit_out.empty()) {
        std::cout << text << '\n';
    } else {
        open_out(o.fit_out) << text << '\n';
    }
    return 0;
}

int run_sweep(Options &o) {
    const auto ckpt = load_checkpoint(o.sweep_checkpoint);
    const auto net = net_from_checkpoint(ckpt);
    const int distance = [&] {
        for (int d = 3;; d += 2) {
            if (4 * build_layout(d).n_tiles() == ckpt.shape.input_bits) {
                return d;
            }
        }
    }();
    auto out = open_out(o.sweep_out);
    out << "p_phys,eps_L,ci_low,ci_high,t0\n";
    std::ofstream curves;
    if (!o.sweep_curves.empty()) {
        curves = open_out(o.sweep_curves);
        curves << "p_phys,t,F,err,n\n";
    }
    std::vector<RatePoint> rates;
    for (double p : o.sweep_p) {
        GenerateConfig g;
        g.distance = distance;
        g.p_error = p;
        g.count = o.sweep_count;
        g.t_min = g.t_max = o.sweep_t_max;
        g.mode = DatasetMode::kTest;
        g.seed = o.sweep_seed;
        g.max_points = o.sweep_points;
        const auto series = thin_series(evaluate_network(net, pack(generate_dataset(g), ckpt.shape.hidden)));
        const auto r = fit_fidelity(series, false, 200);
        fmt::print(out, "{:.6g},{:.9g},{:.9g},{:.9g},{:.6g}\n", p, r.epsilon_L, r.ci_low, r.ci_high, r.t0);
        if (curves) {
            for (const auto &pt : series.points) {
                fmt::print(curves, "{:.6g},{},{:.9g},{:.9g},{}\n", p, pt.t, pt.fidelity, pt.err, pt.n);
            }
        }
        rates.push_back({p, r.epsilon_L});
        fmt::print(stderr, "p={:.3e} eps_L={:.4e} [{:.4e}, {:.4e}]\n", p, r.epsilon_L, r.ci_low, r.ci_high);
    }
    json j;
    j["csv"] = o.sweep_out;
    bool positive = true;
    for (const auto &r : rates) {
        positive = positive && r.epsilon_L > 0.0;
    }
    if (rates.size() >= 1 && positive) {
        const auto pl = fit_powerlaw(rates, distance);
        j["C_d"] = pl.prefactor;
        j["pseudothreshold"] = pl.pseudothreshold;
    }
    std::cout << j.dump() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    Options o;
    CLI::App app{"Color-code syndrome simulation and recurrent decoder workbench"};
    app.require_subcommand(1);
    app.add_flag("--deterministic", o.deterministic, "Serial, bit-reproducible execution");

    auto *gen = app.add_subcommand("generate", "Sample a syndrome dataset");
    gen->add_option("--distance", o.gen.distance)->required();
    gen->add_option("--p-error", o.gen.p_error)->required();
    gen->add_option("--count", o.gen.count)->required();
    gen->add_option("--t-min", o.gen.t_min);
    gen->add_option("--t-max", o.gen.t_max)->required();
    gen->add_option("--mode", o.gen_mode)->check(CLI::IsMember({"train", "test"}));
    gen->add_option("--reset-mode", o.gen_reset)->check(CLI::IsMember({"reset", "no_reset"}));
    gen->add_option("--basis", o.gen_basis)->check(CLI::IsMember({"X", "Z"}));
    gen->add_option("--seed", o.gen.seed);
    gen->add_option("--max-points", o.gen.max_points, "Test mode: readout grid size bound");
    gen->add_option("--readout-cycles", o.gen.readout_cycles, "Test mode: explicit readout cycles");
    gen->add_option("--log-grid", o.gen_log_grid, "Test mode: this many log-spaced readout cycles");
    gen->add_option("--out", o.gen_out)->required();

    auto *tr = app.add_subcommand("train", "Train the recurrent decoder");
    tr->add_option("--config", o.train_config)->required()->check(CLI::ExistingFile);
    tr->add_option("--data", o.train_data)->required()->check(CLI::ExistingFile);
    tr->add_option("--val", o.train_val)->required()->check(CLI::ExistingFile);
    tr->add_option("--out-checkpoint", o.train_out)->required();
    tr->add_option("--resume", o.train_resume)->check(CLI::ExistingFile);
    tr->add_option("--log", o.train_log, "Per-epoch CSV log");

    auto *ev = app.add_subcommand("evaluate", "Fidelity curve of a checkpoint on a test dataset");
    ev->add_option("--checkpoint", o.eval_checkpoint)->required()->check(CLI::ExistingFile);
    ev->add_option("--data", o.eval_data)->required()->check(CLI::ExistingFile);
    ev->add_option("--out-csv", o.eval_out)->required();

    auto *fi = app.add_subcommand("fit", "Fit the fidelity decay");
    fi->add_option("--in-csv", o.fit_in)->required()->check(CLI::ExistingFile);
    fi->add_flag("--fix-t0", o.fit_fix_t0);
    fi->add_option("--bootstrap", o.fit_bootstrap);
    fi->add_option("--out", o.fit_out);

    auto *sw = app.add_subcommand("sweep", "Evaluate and fit over a grid of physical error rates");
    sw->add_option("--checkpoint", o.sweep_checkpoint)->required()->check(CLI::ExistingFile);
    sw->add_option("--p-grid", o.sweep_p)->required()->delimiter(',');
    sw->add_option("--count", o.sweep_count);
    sw->add_option("--t-max", o.sweep_t_max);
    sw->add_option("--seed", o.sweep_seed);
    sw->add_option("--max-points", o.sweep_points);
    sw->add_option("--out-csv", o.sweep_out)->required();
    sw->add_option("--curves-csv", o.sweep_curves);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);
        }
        json err;
        err["error"] = e.what();
        err["kind"] = "usage";
        std::cerr << err.dump() << '\n';
        return 2;
    }

    try {
        if (*gen) return run_generate(o);
        if (*tr) return run_train(o);
        if (*ev) return run_evaluate(o);
        if (*fi) return run_fit(o);
        if (*sw) return run_sweep(o);
    } catch (const std::exception &e) {
        json err;
        err["error"] = e.what();
        err["kind"] = dynamic_cast<const DatasetError *>(&e)      ? "dataset"
                      : dynamic_cast<const FitError *>(&e)        ? "fit"
                      : dynamic_cast<const TrainingDiverged *>(&e) ? "diverged"
                                                                   : "runtime";
        std::cerr << err.dump() << '\n';
        return 1;
    }
    return 1;
}
