#include "faircompass/serialize.hpp"

#include "faircompass/error.hpp"

namespace faircompass {

json rate_json(const Rate& r) { return r ? json(*r) : json(nullptr); }

void to_json(json& j, const FeatureSpec& v) {
    j = {{"name", v.name}, {"kind", to_string(v.kind)}};
    if (v.kind == FeatureKind::categorical) {
        j["categories"] = v.categories;
    } else {
        j["bin_edges"] = v.bin_edges;
    }
}

void to_json(json& j, const Histogram& v) {
    json bins = json::array();
    for (const auto& b : v.bins) bins.push_back({{"label", b.label}, {"count", b.count}});
    j = {{"feature", v.feature}, {"bins", bins}, {"total", v.total}};
}

void to_json(json& j, const IngestConfig& v) {
    j = {{"label_column", v.label_column},
         {"prediction_column", v.prediction_column},
         {"numeric_columns", v.numeric_columns},
         {"missing_token", v.missing_token},
         {"class_aliases", v.class_aliases},
         {"delimiter", std::string(1, v.delimiter)},
         {"trim_fields", v.trim_fields},
         {"default_bins", v.default_bins}};
    j["score_column"] = v.score_column ? json(*v.score_column) : json(nullptr);
}

void from_json(const json& j, IngestConfig& v) {
    v = IngestConfig{};
    v.label_column = j.value("label_column", v.label_column);
    v.prediction_column = j.value("prediction_column", v.prediction_column);
    if (j.contains("score_column") && !j.at("score_column").is_null()) {
        v.score_column = j.at("score_column").get<std::string>();
    }
    v.numeric_columns = j.value("numeric_columns", v.numeric_columns);
    v.missing_token = j.value("missing_token", v.missing_token);
    v.class_aliases = j.value("class_aliases", v.class_aliases);
    const std::string delim = j.value("delimiter", std::string(","));
    if (delim.size() != 1) throw Error(ErrorCode::InvalidArgument, "delimiter must be a single character");
    v.delimiter = delim.front();
    v.trim_fields = j.value("trim_fields", v.trim_fields);
    v.default_bins = j.value("default_bins", v.default_bins);
}

void to_json(json& j, const Predicate& v) {
    j = {{"feature", v.feature}};
    if (v.match == Predicate::Match::equals) {
        j["equals"] = v.category;
    } else {
        j["bin"] = v.bin_index;
    }
}

void from_json(const json& j, Predicate& v) {
    const auto feature = j.at("feature").get<std::string>();
    if (j.contains("equals")) {
        v = Predicate::equals(feature, j.at("equals").get<std::string>());
    } else if (j.contains("bin")) {
        v = Predicate::in_bin(feature, j.at("bin").get<size_t>());
    } else {
        throw Error(ErrorCode::InvalidArgument, "predicate needs 'equals' or 'bin'");
    }
}

void to_json(json& j, const Subgroup& v) {
    j = {{"id", v.id},
         {"dataset_id", v.dataset_id},
         {"predicates", v.predicates},
         {"display_name", v.display_name},
         {"size", v.size}};
}

void to_json(json& j, const FeatureSelection& v) { j = {{"feature", v.feature}, {"values", v.values}}; }

void from_json(const json& j, FeatureSelection& v) {
    if (j.is_string()) {
        v = {j.get<std::string>(), {}};
        return;
    }
    v.feature = j.at("feature").get<std::string>();
    v.values = j.value("values", std::vector<std::string>{});
}

void to_json(json& j, const ConfusionCounts& v) { j = {{"tp", v.tp}, {"fp", v.fp}, {"tn", v.tn}, {"fn", v.fn}}; }

void to_json(json& j, const MetricVector& v) {
    j = {{"size", v.size},
         {"accuracy", rate_json(v.accuracy)},
         {"precision", rate_json(v.precision)},
         {"recall", rate_json(v.recall)},
         {"tnr", rate_json(v.tnr)},
         {"fpr", rate_json(v.fpr)},
         {"fnr", rate_json(v.fnr)},
         {"positive_rate", rate_json(v.positive_rate)},
         {"negative_rate", rate_json(v.negative_rate)},
         {"base_rate", rate_json(v.base_rate)}};
}

void to_json(json& j, const GroupRate& v) {
    j = {{"subgroup_id", v.subgroup_id}, {"display_name", v.display_name}, {"size", v.size}, {"rate", rate_json(v.rate)}};
}

void to_json(json& j, const ParityAssessment& v) {
    j = {{"rate_kind", to_string(v.rate_kind)},
         {"per_group", v.per_group},
         {"max_abs_difference", v.max_abs_difference},
         {"min_ratio", rate_json(v.min_ratio)},
         {"satisfied", v.satisfied},
         {"threshold", v.threshold}};
    j["favourable_class"] = v.favourable_class ? json(*v.favourable_class) : json(nullptr);
}

void to_json(json& j, const Stratum& v) {
    j = {{"predicates", v.predicates}, {"display_name", v.display_name}, {"size", v.size}, {"assessment", v.assessment}};
}

void to_json(json& j, const ExcludedStratum& v) {
    j = {{"display_name", v.display_name}, {"size", v.size}, {"reason", v.reason}};
}

void to_json(json& j, const StratifiedParity& v) {
    j = {{"sensitive_attribute", v.sensitive_attribute},
         {"legitimate_attributes", v.legitimate_attributes},
         {"favourable_class", v.favourable_class},
         {"threshold", v.threshold},
         {"min_stratum_size", v.min_stratum_size},
         {"strata", v.strata},
         {"excluded", v.excluded},
         {"warnings", v.warnings},
         {"satisfied", v.satisfied}};
}

void to_json(json& j, const CompositeParity& v) { j = {{"parts", v.parts}, {"satisfied", v.satisfied}}; }

void to_json(json& j, const EvaluationInputs& v) {
    j = json::object();
    j["favourable_class"] = v.favourable_class ? json(*v.favourable_class) : json(nullptr);
    j["sensitive_attribute"] = v.sensitive_attribute ? json(*v.sensitive_attribute) : json(nullptr);
    j["legitimate_attributes"] = v.legitimate_attributes ? json(*v.legitimate_attributes) : json(nullptr);
    j["rate_kind"] = v.rate_kind ? json(to_string(*v.rate_kind)) : json(nullptr);
    j["threshold"] = v.threshold;
    j["min_stratum_size"] = v.min_stratum_size;
}

void from_json(const json& j, EvaluationInputs& v) {
    v = EvaluationInputs{};
    auto present = [&](const char* key) { return j.contains(key) && !j.at(key).is_null(); };
    if (present("favourable_class")) v.favourable_class = j.at("favourable_class").get<int>();
    if (present("sensitive_attribute")) v.sensitive_attribute = j.at("sensitive_attribute").get<std::string>();
    if (present("legitimate_attributes")) {
        v.legitimate_attributes = j.at("legitimate_attributes").get<std::vector<std::string>>();
    }
    if (present("rate_kind")) v.rate_kind = parse_rate_kind(j.at("rate_kind").get<std::string>());
    if (present("threshold")) v.threshold = j.at("threshold").get<double>();
    if (present("min_stratum_size")) v.min_stratum_size = j.at("min_stratum_size").get<size_t>();
}

void to_json(json& j, const Evaluation& v) {
    j = {{"definition_id", v.definition_id}, {"inputs", v.inputs}, {"satisfied", v.satisfied()}};
    std::visit(
        [&](const auto& r) {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, ParityAssessment>) {
                j["kind"] = "parity";
            } else if constexpr (std::is_same_v<T, StratifiedParity>) {
                j["kind"] = "stratified";
            } else {
                j["kind"] = "composite";
            }
            j["result"] = r;
        },
        v.result);
}

void to_json(json& j, const FairnessDefinition& v) {
    json inputs = json::array();
    for (auto i : v.required_inputs) inputs.push_back(to_string(i));
    j = {{"id", v.id}, {"name", v.name}, {"description", v.description}, {"required_inputs", inputs}};
}

void to_json(json& j, const NodeDescription& v) {
    j = {{"id", v.id},
         {"kind", v.kind == NodeKind::leaf ? "leaf" : "question"},
         {"title", v.title},
         {"text", v.text},
         {"answers", v.answer_labels}};
    j["definition"] = v.definition ? json(*v.definition) : json(nullptr);
    if (v.definition) j["required_inputs"] = j["definition"]["required_inputs"];
}

void to_json(json& j, const PathStep& v) { j = {{"node_id", v.node_id}, {"answer", v.answer}}; }

void to_json(json& j, const StageLogEntry& v) {
    j = {{"seq", v.seq},
         {"timestamp", v.timestamp},
         {"stage", to_string(v.stage)},
         {"iteration", v.iteration},
         {"action", v.action},
         {"payload", v.payload}};
    j["note"] = v.note ? json(*v.note) : json(nullptr);
}

void from_json(const json& j, StageLogEntry& v) {
    v.seq = j.at("seq").get<size_t>();
    v.timestamp = j.at("timestamp").get<std::string>();
    v.stage = parse_stage(j.at("stage").get<std::string>());
    v.iteration = j.value("iteration", size_t{1});
    v.action = j.at("action").get<std::string>();
    v.payload = j.value("payload", json::object());
    v.note.reset();
    if (j.contains("note") && !j.at("note").is_null()) v.note = j.at("note").get<std::string>();
}

void to_json(json& j, const GroupSet& v) {
    j = {{"id", v.id}, {"name", v.name}, {"subgroup_ids", v.subgroup_ids}, {"created_at", v.created_at}};
}

void to_json(json& j, const SuggestedSubgroup& v) {
    j = {{"subgroup", v.subgroup},
         {"source_cluster", v.source_cluster},
         {"dominance", v.dominance},
         {"notability", v.notability},
         {"rate", rate_json(v.rate)}};
}

void to_json(json& j, const SimilarSubgroup& v) {
    j = {{"subgroup", v.subgroup}};
    j["distance"] = v.distance ? json(*v.distance) : json(nullptr);
}

void to_json(json& j, const SubgroupMetrics& v) { j = {{"subgroup", v.subgroup}, {"metrics", v.metrics}}; }

void to_json(json& j, const Comparison& v) {
    json diff = json::object();
    for (const auto& [kind, rate] : v.difference) diff[std::string(to_string(kind))] = rate_json(rate);
    j = {{"pinned", v.pinned}, {"hovered", v.hovered}, {"difference", diff}};
}

json bin_strategy_json(const BinStrategy& s) {
    if (const auto* ew = std::get_if<EqualWidth>(&s)) return {{"equal_width", ew->bins}};
    return {{"edges", std::get<ExplicitEdges>(s).edges}};
}

BinStrategy bin_strategy_from_json(const json& j) {
    if (j.contains("equal_width")) return EqualWidth{j.at("equal_width").get<size_t>()};
    if (j.contains("edges")) return ExplicitEdges{j.at("edges").get<std::vector<double>>()};
    throw Error(ErrorCode::InvalidArgument, "binning strategy needs 'equal_width' or 'edges'");
}

json dataset_summary(const Dataset& dataset) {
    json features = json::array();
    for (size_t f = 0; f < dataset.feature_count(); ++f) {
        json spec = dataset.feature(f);
        spec["levels"] = dataset.levels(f);
        features.push_back(spec);
    }
    const auto overall = metrics(confusion(dataset, mask_all(dataset)));
    return {{"dataset_id", dataset.id()},
            {"row_count", dataset.row_count()},
            {"label_column", dataset.config().label_column},
            {"prediction_column", dataset.config().prediction_column},
            {"feature_count", dataset.feature_count()},
            {"features", features},
            {"overall_metrics", overall}};
}

}  // namespace faircompass
