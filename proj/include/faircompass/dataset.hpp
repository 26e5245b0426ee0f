#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace faircompass {

enum class FeatureKind { categorical, numeric };

std::string_view to_string(FeatureKind kind) noexcept;

struct FeatureSpec {
    std::string name;
    FeatureKind kind = FeatureKind::categorical;
    // categorical: distinct observed values, descending frequency then lexicographic
    std::vector<std::string> categories;
    // numeric: strictly increasing; bins are [e_i, e_i+1) except the last, which is closed
    std::vector<double> bin_edges;

    bool operator==(const FeatureSpec&) const = default;
};

struct IngestConfig {
    std::string label_column = "label";
    std::string prediction_column = "prediction";
    std::optional<std::string> score_column;
    std::vector<std::string> numeric_columns;
    std::string missing_token = "?";
    // Class-name aliases for label and prediction cells, e.g. {"<=50K": 1, ">50K": 0}.
    // "0" and "1" are always accepted.
    std::map<std::string, int> class_aliases;
    char delimiter = ',';
    bool trim_fields = false;
    // equal-width bin count applied to numeric columns at load time
    size_t default_bins = 10;

    bool operator==(const IngestConfig&) const = default;
};

struct HistogramBin {
    std::string label;
    size_t count = 0;

    bool operator==(const HistogramBin&) const = default;
};

struct Histogram {
    std::string feature;
    std::vector<HistogramBin> bins;
    size_t total = 0;

    bool operator==(const Histogram&) const = default;
};

struct EqualWidth {
    size_t bins = 10;
};
struct ExplicitEdges {
    std::vector<double> edges;
};
using BinStrategy = std::variant<EqualWidth, ExplicitEdges>;

// Immutable columnar table: features plus binary label and prediction columns.
//
// Every feature also has a discrete "level" view used by subgroups and
// histograms. For a categorical feature the levels are its categories; for a
// numeric feature they are the bin labels followed by the missing token when
// any value is missing. Copies share column storage.
class Dataset {
public:
    Dataset() = default;

    const std::string& id() const noexcept { return id_; }
    size_t row_count() const noexcept { return row_count_; }
    size_t feature_count() const noexcept { return features_.size(); }
    const IngestConfig& config() const noexcept { return *config_; }

    const FeatureSpec& feature(size_t index) const { return features_.at(index)->spec; }
    const FeatureSpec& feature(std::string_view name) const;
    std::optional<size_t> find_feature(std::string_view name) const noexcept;
    size_t feature_index(std::string_view name) const;  // throws UnknownFeature
    std::vector<std::string> feature_names() const;

    const std::vector<std::string>& levels(size_t feature) const { return features_.at(feature)->levels; }
    std::span<const std::int32_t> codes(size_t feature) const { return features_.at(feature)->codes; }
    // Raw values of a numeric feature; NaN marks a missing cell.
    std::span<const double> numeric_values(size_t feature) const;
    // Index of the missing-value level of a numeric feature, if it has one.
    std::optional<size_t> missing_level(size_t feature) const;

    std::span<const std::uint8_t> labels() const noexcept { return columns_->labels; }
    std::span<const std::uint8_t> predictions() const noexcept { return columns_->predictions; }
    std::optional<std::span<const double>> scores() const;

    // New dataset (with a derived id) whose numeric feature uses `spec`'s edges.
    Dataset with_binning(const FeatureSpec& spec) const;

    // Delimited text with header; features, then label, prediction and score.
    std::string to_csv() const;

    // Bin label of interval i of `edges`: "40" for a unit-width integer
    // interval, otherwise "[a, b)" or "[a, b]" for the last interval.
    static std::string bin_label(std::span<const double> edges, size_t interval);

    friend Dataset load_dataset(std::string_view source, const IngestConfig& config);

private:
    struct Columns {
        std::vector<std::uint8_t> labels;
        std::vector<std::uint8_t> predictions;
        std::vector<double> scores;
        bool has_scores = false;
    };
    struct FeatureColumn {
        FeatureSpec spec;
        std::vector<std::string> levels;
        std::vector<std::int32_t> codes;
        std::vector<double> values;  // numeric only
    };

    static std::shared_ptr<const FeatureColumn> binned_column(const FeatureColumn& base,
                                                              const std::vector<double>& edges,
                                                              const std::string& missing_token);

    std::string id_;
    size_t row_count_ = 0;
    std::shared_ptr<const IngestConfig> config_ = std::make_shared<IngestConfig>();
    std::shared_ptr<const Columns> columns_ = std::make_shared<Columns>();
    std::vector<std::shared_ptr<const FeatureColumn>> features_;
};

// Parses delimited text with a header row into a validated Dataset.
// Columns other than label, prediction and score are features; those listed in
// config.numeric_columns are numeric and get equal_width(config.default_bins).
Dataset load_dataset(std::string_view source, const IngestConfig& config);

Histogram feature_distribution(const Dataset& dataset, std::string_view feature);

// Returns the feature's spec with new bin edges. Explicit edges must be
// strictly increasing and cover every observed value.
FeatureSpec bin_numeric(const Dataset& dataset, std::string_view feature, const BinStrategy& strategy);

// Explicit edges isolating each integer point p as the single-point bin
// [p, p+1), padded with the observed minimum and maximum so every value is
// covered. Used to express "hours == 40" style predicates.
std::vector<double> point_bin_edges(const Dataset& dataset, std::string_view feature,
                                    std::span<const double> points);

}  // namespace faircompass
