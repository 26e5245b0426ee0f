#pragma once

#include <fstream>
#include <functional>
#include <stdexcept>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "faircompass/dataset.hpp"
#include "faircompass/error.hpp"
#include "faircompass/text.hpp"

namespace fctest {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Error code raised by f; a call that does not throw is a test failure.
inline faircompass::ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const faircompass::Error& e) {
        return e.code();
    }
    throw std::logic_error("expected an error");
}

inline faircompass::Dataset csv(const std::string& text, faircompass::IngestConfig config = {}) {
    return faircompass::load_dataset(text, config);
}

inline faircompass::IngestConfig adult_config() {
    faircompass::IngestConfig c;
    c.label_column = "income";
    c.prediction_column = "prediction";
    c.class_aliases = {{"<=50K", 1}, {">50K", 0}};
    c.numeric_columns = {"age", "fnlwgt", "education-num", "capital-gain", "capital-loss", "hours-per-week"};
    return c;
}

inline const faircompass::Dataset& adult() {
    static const faircompass::Dataset ds =
        faircompass::load_dataset(read_file(std::string(FC_FIXTURES) + "/adult/adult.csv"), adult_config());
    return ds;
}

// Raw rows kept alongside the generated CSV so oracles never look inside a Dataset.
struct RandomTable {
    std::vector<std::string> feature_names;
    std::vector<std::vector<std::string>> values;  // [row][feature]
    std::vector<int> label;
    std::vector<int> pred;

    std::string to_csv() const {
        std::string out;
        for (const auto& f : feature_names) out += f + ",";
        out += "label,prediction\n";
        for (size_t r = 0; r < label.size(); ++r) {
            for (const auto& v : values[r]) out += v + ",";
            out += std::to_string(label[r]) + "," + std::to_string(pred[r]) + "\n";
        }
        return out;
    }
};

inline RandomTable random_table(std::mt19937_64& rng, size_t max_rows = 200, size_t max_features = 4) {
    RandomTable t;
    const size_t n = std::uniform_int_distribution<size_t>(0, max_rows)(rng);
    const size_t nf = std::uniform_int_distribution<size_t>(1, max_features)(rng);
    std::vector<size_t> arity;
    for (size_t f = 0; f < nf; ++f) {
        t.feature_names.push_back("f" + std::to_string(f));
        arity.push_back(std::uniform_int_distribution<size_t>(1, 4)(rng));
    }
    // skewed label/prediction rates so some groups hit zero denominators
    const double p_label = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const double p_flip = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
    for (size_t r = 0; r < n; ++r) {
        std::vector<std::string> row;
        for (size_t f = 0; f < nf; ++f) {
            row.push_back(std::string(1, static_cast<char>('a' + std::uniform_int_distribution<size_t>(0, arity[f] - 1)(rng))));
        }
        t.values.push_back(std::move(row));
        const int y = std::bernoulli_distribution(p_label)(rng) ? 1 : 0;
        t.label.push_back(y);
        t.pred.push_back(std::bernoulli_distribution(p_flip)(rng) ? 1 - y : y);
    }
    return t;
}

}  // namespace fctest
