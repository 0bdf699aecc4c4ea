#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "colornn/train.hpp"

namespace colornn {

namespace {

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

void TrainConfig::validate() const {
    auto fail = [](const std::string &what) { throw std::invalid_argument("train config: " + what); };
    if (distance < 3 || distance % 2 == 0) fail("distance must be odd and >= 3");
    if (hidden <= 0) fail("hidden must be positive");
    if (batch_size <= 0 || batches_per_epoch <= 0 || max_epochs <= 0) fail("counts must be positive");
    if (!(p_train > 0.0 && p_train < 1.0) || !(p_validation > 0.0 && p_validation < 1.0) ||
        !(p_test > 0.0 && p_test < 1.0)) {
        fail("error rates must lie in (0, 1)");
    }
    if (!(keep_prob > 0.0 && keep_prob <= 1.0)) fail("keep_prob must lie in (0, 1]");
    if (learning_rate < 0.0 || c_reg < 0.0) fail("learning_rate and c_reg must be non-negative");
    if (t_min < 1 || t_max < t_min) fail("need 1 <= t_min <= t_max");
    if (train_sequences == 0 || validation_sequences == 0 || test_sequences == 0) fail("sequence counts must be positive");
    if (validation_max_cycles < 1 || test_max_cycles < 1 || validation_points < 2) fail("bad validation/test grid");
}

TrainConfig parse_train_config(const std::string &text) {
    TrainConfig c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty() || line.front() == '[') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("train config line " + std::to_string(lineno) + ": expected key = value");
        }
        const auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
            value = value.substr(1, value.size() - 2);
        }
        try {
            if (key == "distance") c.distance = std::stoi(value);
            else if (key == "hidden") c.hidden = std::stoi(value);
            else if (key == "p_train") c.p_train = std::stod(value);
            else if (key == "batch_size") c.batch_size = std::stoi(value);
            else if (key == "batches_per_epoch") c.batches_per_epoch = std::stoi(value);
            else if (key == "max_epochs") c.max_epochs = std::stoi(value);
            else if (key == "learning_rate") c.learning_rate = std::stod(value);
            else if (key == "c_reg") c.c_reg = std::stod(value);
            else if (key == "keep_prob") c.keep_prob = std::stod(value);
            else if (key == "seed") c.seed = std::stoull(value);
            else if (key == "patience") c.patience = std::stoi(value);
            else if (key == "time_limit_minutes") c.time_limit_minutes = std::stod(value);
            else if (key == "train_sequences") c.train_sequences = std::stoull(value);
            else if (key == "t_min") c.t_min = std::stoi(value);
            else if (key == "t_max") c.t_max = std::stoi(value);
            else if (key == "p_validation") c.p_validation = std::stod(value);
            else if (key == "validation_sequences") c.validation_sequences = std::stoull(value);
            else if (key == "validation_max_cycles") c.validation_max_cycles = std::stoi(value);
            else if (key == "validation_points") c.validation_points = std::stoi(value);
            else if (key == "p_test") c.p_test = std::stod(value);
            else if (key == "test_sequences") c.test_sequences = std::stoull(value);
            else if (key == "test_max_cycles") c.test_max_cycles = std::stoi(value);
            else throw std::invalid_argument("unknown key '" + key + "'");
        } catch (const std::logic_error &e) {
            throw std::invalid_argument("train config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    c.validate();
    return c;
}

TrainConfig load_train_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open config " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_train_config(ss.str());
}

std::string train_config_to_json(const TrainConfig &c) {
    nlohmann::ordered_json j;
    j["distance"] = c.distance;
    j["hidden"] = c.hidden;
    j["p_train"] = c.p_train;
    j["batch_size"] = c.batch_size;
    j["batches_per_epoch"] = c.batches_per_epoch;
    j["max_epochs"] = c.max_epochs;
    j["learning_rate"] = c.learning_rate;
    j["c_reg"] = c.c_reg;
    j["keep_prob"] = c.keep_prob;
    j["seed"] = c.seed;
    j["patience"] = c.patience;
    j["time_limit_minutes"] = c.time_limit_minutes;
    j["train_sequences"] = c.train_sequences;
    j["t_min"] = c.t_min;
    j["t_max"] = c.t_max;
    j["p_validation"] = c.p_validation;
    j["validation_sequences"] = c.validation_sequences;
    j["validation_max_cycles"] = c.validation_max_cycles;
    j["validation_points"] = c.validation_points;
    j["p_test"] = c.p_test;
    j["test_sequences"] = c.test_sequences;
    j["test_max_cycles"] = c.test_max_cycles;
    return j.dump();
}

}  // namespace colornn
