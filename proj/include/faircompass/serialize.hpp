#pragma once

// JSON mappings for the engine's value types, used by the session log, the
// audit report, the HTTP service and the Python bindings. Undefined rates
// serialize as null.

#include <nlohmann/json.hpp>

#include "faircompass/compass.hpp"
#include "faircompass/dataset.hpp"
#include "faircompass/metrics.hpp"
#include "faircompass/session.hpp"
#include "faircompass/subgroup.hpp"
#include "faircompass/suggest.hpp"

namespace faircompass {

using nlohmann::json;

void to_json(json& j, const FeatureSpec& v);
void to_json(json& j, const Histogram& v);
void to_json(json& j, const IngestConfig& v);
void from_json(const json& j, IngestConfig& v);
void to_json(json& j, const Predicate& v);
void from_json(const json& j, Predicate& v);
void to_json(json& j, const Subgroup& v);
void to_json(json& j, const FeatureSelection& v);
void from_json(const json& j, FeatureSelection& v);
void to_json(json& j, const ConfusionCounts& v);
void to_json(json& j, const MetricVector& v);
void to_json(json& j, const GroupRate& v);
void to_json(json& j, const ParityAssessment& v);
void to_json(json& j, const Stratum& v);
void to_json(json& j, const ExcludedStratum& v);
void to_json(json& j, const StratifiedParity& v);
void to_json(json& j, const CompositeParity& v);
void to_json(json& j, const EvaluationInputs& v);
void from_json(const json& j, EvaluationInputs& v);
void to_json(json& j, const Evaluation& v);
void to_json(json& j, const FairnessDefinition& v);
void to_json(json& j, const NodeDescription& v);
void to_json(json& j, const PathStep& v);
void to_json(json& j, const StageLogEntry& v);
void from_json(const json& j, StageLogEntry& v);
void to_json(json& j, const GroupSet& v);
void to_json(json& j, const SuggestedSubgroup& v);
void to_json(json& j, const SimilarSubgroup& v);
void to_json(json& j, const SubgroupMetrics& v);
void to_json(json& j, const Comparison& v);

json rate_json(const Rate& r);
json bin_strategy_json(const BinStrategy& s);
BinStrategy bin_strategy_from_json(const json& j);

// Dataset overview: id, row count, label/prediction columns and features
// with their levels.
json dataset_summary(const Dataset& dataset);

}  // namespace faircompass
