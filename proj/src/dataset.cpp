#include "faircompass/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <set>
#include <unordered_map>

#include "faircompass/error.hpp"
#include "faircompass/text.hpp"

namespace faircompass {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::string short_hash(std::string_view data) { return "ds-" + sha256_hex(data).substr(0, 16); }

std::string config_fingerprint(const IngestConfig& c) {
    nlohmann::json j = {
        {"label", c.label_column},
        {"prediction", c.prediction_column},
        {"score", c.score_column ? nlohmann::json(*c.score_column) : nlohmann::json(nullptr)},
        {"numeric", c.numeric_columns},
        {"missing", c.missing_token},
        {"aliases", c.class_aliases},
        {"delimiter", std::string(1, c.delimiter)},
        {"trim", c.trim_fields},
        {"bins", c.default_bins},
    };
    return j.dump();
}

std::vector<double> equal_width_edges(std::span<const double> values, size_t bins) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double v : values) {
        if (std::isnan(v)) continue;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (lo > hi) return {};  // no observed values
    if (lo == hi) return {lo, lo + 1.0};
    std::vector<double> edges(bins + 1);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (size_t i = 0; i <= bins; ++i) edges[i] = lo + width * static_cast<double>(i);
    edges.back() = hi;
    return edges;
}

// Interval index for v, or -1 when v lies outside [front, back].
std::int32_t interval_of(std::span<const double> edges, double v) {
    if (edges.size() < 2 || v < edges.front() || v > edges.back()) return -1;
    if (v == edges.back()) return static_cast<std::int32_t>(edges.size() - 2);
    auto it = std::upper_bound(edges.begin(), edges.end(), v);
    return static_cast<std::int32_t>(std::distance(edges.begin(), it) - 1);
}

int parse_class(const std::string& cell, const IngestConfig& config) {
    if (cell == "0") return 0;
    if (cell == "1") return 1;
    if (auto it = config.class_aliases.find(cell); it != config.class_aliases.end()) {
        if (it->second == 0 || it->second == 1) return it->second;
    }
    return -1;
}

}  // namespace

std::string_view to_string(FeatureKind kind) noexcept {
    return kind == FeatureKind::numeric ? "numeric" : "categorical";
}

const FeatureSpec& Dataset::feature(std::string_view name) const {
    return features_[feature_index(name)]->spec;
}

std::optional<size_t> Dataset::find_feature(std::string_view name) const noexcept {
    for (size_t i = 0; i < features_.size(); ++i) {
        if (features_[i]->spec.name == name) return i;
    }
    return std::nullopt;
}

size_t Dataset::feature_index(std::string_view name) const {
    if (auto idx = find_feature(name)) return *idx;
    throw Error(ErrorCode::UnknownFeature, "unknown feature '" + std::string(name) + "'");
}

std::vector<std::string> Dataset::feature_names() const {
    std::vector<std::string> names;
    names.reserve(features_.size());
    for (const auto& f : features_) names.push_back(f->spec.name);
    return names;
}

std::span<const double> Dataset::numeric_values(size_t feature) const {
    const auto& col = *features_.at(feature);
    if (col.spec.kind != FeatureKind::numeric) {
        throw Error(ErrorCode::NotNumeric, "feature '" + col.spec.name + "' is not numeric");
    }
    return col.values;
}

std::optional<size_t> Dataset::missing_level(size_t feature) const {
    const auto& col = *features_.at(feature);
    if (col.spec.kind != FeatureKind::numeric) return std::nullopt;
    const size_t bins = col.spec.bin_edges.size() < 2 ? 0 : col.spec.bin_edges.size() - 1;
    if (col.levels.size() > bins) return bins;
    return std::nullopt;
}

std::optional<std::span<const double>> Dataset::scores() const {
    if (!columns_->has_scores) return std::nullopt;
    return std::span<const double>(columns_->scores);
}

std::string Dataset::bin_label(std::span<const double> edges, size_t interval) {
    const double a = edges[interval];
    const double b = edges[interval + 1];
    const bool last = interval + 2 == edges.size();
    if (!last && b - a == 1.0 && std::floor(a) == a) return format_number(a);
    return "[" + format_number(a) + ", " + format_number(b) + (last ? "]" : ")");
}

std::shared_ptr<const Dataset::FeatureColumn> Dataset::binned_column(const FeatureColumn& base,
                                                                     const std::vector<double>& edges,
                                                                     const std::string& missing_token) {
    auto col = std::make_shared<FeatureColumn>();
    col->spec = base.spec;
    col->spec.bin_edges = edges;
    col->values = base.values;
    const size_t bins = edges.size() < 2 ? 0 : edges.size() - 1;
    for (size_t i = 0; i < bins; ++i) col->levels.push_back(bin_label(edges, i));
    col->codes.resize(base.values.size());
    bool any_missing = false;
    for (size_t r = 0; r < base.values.size(); ++r) {
        const double v = base.values[r];
        if (std::isnan(v)) {
            col->codes[r] = static_cast<std::int32_t>(bins);
            any_missing = true;
        } else {
            col->codes[r] = interval_of(edges, v);
        }
    }
    if (any_missing) col->levels.push_back(missing_token);
    return col;
}

Dataset Dataset::with_binning(const FeatureSpec& spec) const {
    const size_t idx = feature_index(spec.name);
    const auto& base = *features_[idx];
    if (base.spec.kind != FeatureKind::numeric) {
        throw Error(ErrorCode::NotNumeric, "feature '" + spec.name + "' is not numeric");
    }
    const auto& edges = spec.bin_edges;
    if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end(), std::less_equal<>{})) {
        throw Error(ErrorCode::InvalidEdges, "bin edges for '" + spec.name + "' must be strictly increasing");
    }
    for (double v : base.values) {
        if (!std::isnan(v) && interval_of(edges, v) < 0) {
            throw Error(ErrorCode::InvalidEdges,
                        "value " + format_number(v) + " of '" + spec.name + "' lies outside the bin edges");
        }
    }
    Dataset out = *this;
    out.features_[idx] = binned_column(base, edges, config_->missing_token);
    std::string seed = id_ + "|" + spec.name;
    for (double e : edges) seed += "|" + format_number(e);
    out.id_ = short_hash(seed);
    return out;
}

std::string Dataset::to_csv() const {
    const auto& cfg = *config_;
    CsvRow header = feature_names();
    header.push_back(cfg.label_column);
    header.push_back(cfg.prediction_column);
    if (columns_->has_scores) header.push_back(cfg.score_column.value_or("score"));
    std::string out = csv_line(header, cfg.delimiter) + "\n";
    CsvRow row(header.size());
    for (size_t r = 0; r < row_count_; ++r) {
        for (size_t f = 0; f < features_.size(); ++f) {
            const auto& col = *features_[f];
            if (col.spec.kind == FeatureKind::numeric) {
                row[f] = std::isnan(col.values[r]) ? cfg.missing_token : format_number(col.values[r]);
            } else {
                row[f] = col.levels[static_cast<size_t>(col.codes[r])];
            }
        }
        size_t c = features_.size();
        row[c++] = columns_->labels[r] ? "1" : "0";
        row[c++] = columns_->predictions[r] ? "1" : "0";
        if (columns_->has_scores) row[c] = format_number(columns_->scores[r]);
        out += csv_line(row, cfg.delimiter);
        out.push_back('\n');
    }
    return out;
}

Dataset load_dataset(std::string_view source, const IngestConfig& config) {
    auto rows = parse_csv(source, config.delimiter);
    if (config.trim_fields) {
        for (auto& row : rows) {
            for (auto& cell : row) cell = trim(cell);
        }
    }
    if (rows.empty()) {
        throw IngestError(ErrorCode::MissingColumn,
                          "missing header row; label column '" + config.label_column + "' not found",
                          config.label_column);
    }
    const CsvRow& header = rows.front();
    const size_t ncols = header.size();
    std::unordered_map<std::string, size_t> column_of;
    for (size_t c = 0; c < ncols; ++c) {
        if (!column_of.emplace(header[c], c).second) {
            throw IngestError(ErrorCode::DuplicateColumn, "duplicate column '" + header[c] + "'", header[c]);
        }
    }
    auto require = [&](const std::string& name) {
        auto it = column_of.find(name);
        if (it == column_of.end()) {
            throw IngestError(ErrorCode::MissingColumn, "missing column '" + name + "'", name);
        }
        return it->second;
    };
    const size_t label_col = require(config.label_column);
    const size_t pred_col = require(config.prediction_column);
    if (label_col == pred_col) {
        throw IngestError(ErrorCode::DuplicateColumn, "label and prediction must be distinct columns",
                          config.label_column);
    }
    std::optional<size_t> score_col;
    if (config.score_column) score_col = require(*config.score_column);
    std::set<std::string> numeric(config.numeric_columns.begin(), config.numeric_columns.end());
    for (const auto& name : numeric) require(name);

    const size_t nrows = rows.size() - 1;
    auto columns = std::make_shared<Dataset::Columns>();
    columns->labels.resize(nrows);
    columns->predictions.resize(nrows);
    if (score_col) {
        columns->has_scores = true;
        columns->scores.resize(nrows);
    }

    for (size_t r = 0; r < nrows; ++r) {
        const CsvRow& row = rows[r + 1];
        if (row.size() != ncols) {
            throw IngestError(ErrorCode::RaggedRow,
                              "row " + std::to_string(r + 1) + " has " + std::to_string(row.size()) +
                                  " fields, header has " + std::to_string(ncols),
                              "", r + 1);
        }
        for (auto [col, out] : {std::pair{label_col, &columns->labels}, std::pair{pred_col, &columns->predictions}}) {
            const int v = parse_class(row[col], config);
            if (v < 0) {
                throw IngestError(ErrorCode::NonBinaryLabel,
                                  "row " + std::to_string(r + 1) + ", column '" + header[col] + "': value '" +
                                      row[col] + "' is not a binary class",
                                  header[col], r + 1);
            }
            (*out)[r] = static_cast<std::uint8_t>(v);
        }
        if (score_col) {
            auto v = parse_number(row[*score_col]);
            if (!v || *v < 0.0 || *v > 1.0) {
                throw IngestError(ErrorCode::UnparseableNumeric,
                                  "row " + std::to_string(r + 1) + ", column '" + header[*score_col] +
                                      "': score '" + row[*score_col] + "' is not a real in [0,1]",
                                  header[*score_col], r + 1);
            }
            columns->scores[r] = *v;
        }
    }

    Dataset ds;
    ds.row_count_ = nrows;
    ds.config_ = std::make_shared<IngestConfig>(config);
    ds.columns_ = columns;
    ds.id_ = short_hash(std::string(source) + "\n" + config_fingerprint(config));

    for (size_t c = 0; c < ncols; ++c) {
        if (c == label_col || c == pred_col || (score_col && c == *score_col)) continue;
        Dataset::FeatureColumn col;
        col.spec.name = header[c];
        if (numeric.count(header[c])) {
            col.spec.kind = FeatureKind::numeric;
            col.values.resize(nrows);
            for (size_t r = 0; r < nrows; ++r) {
                const std::string& cell = rows[r + 1][c];
                if (cell == config.missing_token || trim(cell).empty()) {
                    col.values[r] = kMissing;
                    continue;
                }
                auto v = parse_number(cell);
                if (!v) {
                    throw IngestError(ErrorCode::UnparseableNumeric,
                                      "row " + std::to_string(r + 1) + ", column '" + header[c] + "': '" + cell +
                                          "' is not a number",
                                      header[c], r + 1);
                }
                col.values[r] = *v;
            }
            auto edges = equal_width_edges(col.values, std::max<size_t>(config.default_bins, 1));
            ds.features_.push_back(Dataset::binned_column(col, edges, config.missing_token));
        } else {
            col.spec.kind = FeatureKind::categorical;
            std::unordered_map<std::string, size_t> freq;
            for (size_t r = 0; r < nrows; ++r) {
                std::string& cell = rows[r + 1][c];
                if (cell.empty()) cell = config.missing_token;
                ++freq[cell];
            }
            std::vector<std::pair<std::string, size_t>> order(freq.begin(), freq.end());
            std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
                return a.second != b.second ? a.second > b.second : a.first < b.first;
            });
            std::unordered_map<std::string, std::int32_t> code_of;
            for (const auto& [value, count] : order) {
                code_of.emplace(value, static_cast<std::int32_t>(col.spec.categories.size()));
                col.spec.categories.push_back(value);
            }
            col.levels = col.spec.categories;
            col.codes.resize(nrows);
            for (size_t r = 0; r < nrows; ++r) col.codes[r] = code_of.at(rows[r + 1][c]);
            ds.features_.push_back(std::make_shared<Dataset::FeatureColumn>(std::move(col)));
        }
    }
    return ds;
}

Histogram feature_distribution(const Dataset& dataset, std::string_view feature) {
    const size_t f = dataset.feature_index(feature);
    const auto& levels = dataset.levels(f);
    Histogram h;
    h.feature = std::string(feature);
    h.bins.reserve(levels.size());
    for (const auto& label : levels) h.bins.push_back({label, 0});
    for (std::int32_t code : dataset.codes(f)) ++h.bins[static_cast<size_t>(code)].count;
    h.total = dataset.row_count();
    return h;
}

FeatureSpec bin_numeric(const Dataset& dataset, std::string_view feature, const BinStrategy& strategy) {
    const size_t f = dataset.feature_index(feature);
    FeatureSpec spec = dataset.feature(f);
    if (spec.kind != FeatureKind::numeric) {
        throw Error(ErrorCode::NotNumeric, "feature '" + spec.name + "' is not numeric");
    }
    const auto values = dataset.numeric_values(f);
    if (const auto* ew = std::get_if<EqualWidth>(&strategy)) {
        if (ew->bins < 1) throw Error(ErrorCode::InvalidEdges, "equal_width needs at least one bin");
        spec.bin_edges = equal_width_edges(values, ew->bins);
        return spec;
    }
    const auto& edges = std::get<ExplicitEdges>(strategy).edges;
    if (edges.size() < 2) throw Error(ErrorCode::InvalidEdges, "explicit binning needs at least two edges");
    for (size_t i = 1; i < edges.size(); ++i) {
        if (!(edges[i - 1] < edges[i])) {
            throw Error(ErrorCode::InvalidEdges, "bin edges must be strictly increasing");
        }
    }
    for (double v : values) {
        if (!std::isnan(v) && interval_of(edges, v) < 0) {
            throw Error(ErrorCode::InvalidEdges, "observed value " + format_number(v) + " of '" + spec.name +
                                                     "' lies outside [" + format_number(edges.front()) + ", " +
                                                     format_number(edges.back()) + "]");
        }
    }
    spec.bin_edges = edges;
    return spec;
}

std::vector<double> point_bin_edges(const Dataset& dataset, std::string_view feature,
                                    std::span<const double> points) {
    const auto values = dataset.numeric_values(dataset.feature_index(feature));
    std::vector<double> sorted(points.begin(), points.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (sorted.empty()) throw Error(ErrorCode::InvalidEdges, "no points given");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double v : values) {
        if (std::isnan(v)) continue;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    std::vector<double> edges;
    if (lo < sorted.front()) edges.push_back(lo);
    for (double p : sorted) {
        if (edges.empty() || edges.back() < p) edges.push_back(p);
        edges.push_back(p + 1.0);
    }
    if (hi > edges.back()) edges.push_back(hi);
    return edges;
}

}  // namespace faircompass
