#include "colornn/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

namespace colornn {

namespace {

struct Tally {
    std::int64_t n = 0;
    std::int64_t correct = 0;
};

FidelitySeries to_series(const std::map<int, Tally> &tallies, std::uint64_t seed) {
    constexpr int kResamples = 200;
    std::mt19937_64 gen(seed);
    FidelitySeries s;
    for (const auto &[t, tally] : tallies) {
        FidelityPoint p;
        p.t = t;
        p.n = tally.n;
        p.fidelity = tally.n > 0 ? static_cast<double>(tally.correct) / static_cast<double>(tally.n) : 0.0;
        if (tally.n > 0) {
            std::binomial_distribution<std::int64_t> bin(tally.n, p.fidelity);
            double sum = 0.0, sq = 0.0;
            for (int k = 0; k < kResamples; ++k) {
                const double f = static_cast<double>(bin(gen)) / static_cast<double>(tally.n);
                sum += f;
                sq += f * f;
            }
            const double mean = sum / kResamples;
            p.err = std::sqrt(std::max(0.0, sq / kResamples - mean * mean));
        }
        s.points.push_back(p);
    }
    return s;
}

}  // namespace

PackedSequences load_packed(const std::string &path, int hidden, DatasetHeader *header) {
    DatasetReader reader(path);
    const auto &h = reader.header();
    PackedSequences out({h.input_bits(), hidden, h.n_tiles});
    SyndromeSequence seq;
    while (reader.next(seq)) {
        out.add(seq);
    }
    if (header != nullptr) {
        *header = h;
    }
    return out;
}

PackedSequences pack(const Dataset &dataset, int hidden) {
    PackedSequences out({dataset.header.input_bits(), hidden, dataset.header.n_tiles});
    for (const auto &r : dataset.records) {
        out.add(r);
    }
    return out;
}

FidelitySeries evaluate_network(const DecoderNet &net, const PackedSequences &data, int chunk, std::uint64_t seed) {
    if (!(data.shape().input_bits == net.shape().input_bits && data.shape().final_bits == net.shape().final_bits)) {
        throw std::invalid_argument("evaluate_network: dataset and network dimensions differ");
    }
    // Group by (length, readout grid) so every chunk shares its readouts.
    std::map<std::vector<int>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < data.size(); ++i) {
        auto key = data.final_cycles(i);
        key.push_back(data.cycles(i));
        groups[key].push_back(i);
    }
    std::map<int, Tally> tallies;
    std::vector<std::size_t> idx;
    for (const auto &[key, members] : groups) {
        for (std::size_t begin = 0; begin < members.size(); begin += static_cast<std::size_t>(chunk)) {
            const auto end = std::min(members.size(), begin + static_cast<std::size_t>(chunk));
            idx.assign(members.begin() + static_cast<std::ptrdiff_t>(begin),
                       members.begin() + static_cast<std::ptrdiff_t>(end));
            const auto batch = data.batch(idx, true);
            const auto out = net.forward(batch);
            for (std::size_t r = 0; r < batch.readout_cycles.size(); ++r) {
                auto &tally = tallies[batch.readout_cycles[r]];
                for (int j = 0; j < batch.size; ++j) {
                    const bool predicted = out.p_lower(static_cast<Eigen::Index>(r), j) >= 0.5;
                    const bool truth = batch.p_true(static_cast<Eigen::Index>(r), j) > 0.5;
                    tally.correct += predicted == truth ? 1 : 0;
                    ++tally.n;
                }
            }
        }
    }
    return to_series(tallies, seed);
}

FidelitySeries evaluate_predictor(const Dataset &data, const ParityPredictor &predict, std::uint64_t seed) {
    std::map<int, Tally> tallies;
    for (const auto &rec : data.records) {
        for (std::size_t r = 0; r < rec.finals.size(); ++r) {
            auto &tally = tallies[rec.finals[r].cycle];
            tally.correct += predict(rec, r) == rec.finals[r].p_true ? 1 : 0;
            ++tally.n;
        }
    }
    return to_series(tallies, seed);
}

FidelitySeries thin_series(const FidelitySeries &series, int max_points) {
    if (series.points.empty()) {
        return series;
    }
    const auto grid = thinned_grid(static_cast<int>(std::lround(series.points.back().t)), max_points);
    FidelitySeries out;
    out.steps_per_cycle = series.steps_per_cycle;
    for (const auto &p : series.points) {
        if (std::binary_search(grid.begin(), grid.end(), static_cast<int>(std::lround(p.t)))) {
            out.points.push_back(p);
        }
    }
    return out;
}

void write_fidelity_csv(const FidelitySeries &series, std::ostream &out) {
    out << "t,F,err,n\n";
    out.precision(12);
    for (const auto &p : series.points) {
        out << p.t << ',' << p.fidelity << ',' << p.err << ',' << p.n << '\n';
    }
}

FidelitySeries read_fidelity_csv(std::istream &in) {
    FidelitySeries s;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (header) {
            header = false;
            if (line.rfind("t,", 0) == 0) {
                continue;
            }
        }
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> v;
        while (std::getline(ss, cell, ',')) {
            v.push_back(std::stod(cell));
        }
        if (v.size() < 2) {
            throw std::invalid_argument("read_fidelity_csv: expected t,F[,err[,n]]");
        }
        FidelityPoint p;
        p.t = v[0];
        p.fidelity = v[1];
        p.err = v.size() > 2 ? v[2] : 0.0;
        p.n = v.size() > 3 ? static_cast<std::int64_t>(v[3]) : 0;
        s.points.push_back(p);
    }
    return s;
}

}  // namespace colornn
