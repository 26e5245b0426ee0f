#pragma once

#include <functional>
#include <map>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "faircompass/compass.hpp"
#include "faircompass/dataset.hpp"
#include "faircompass/metrics.hpp"
#include "faircompass/subgroup.hpp"
#include "faircompass/suggest.hpp"

namespace faircompass {

enum class Stage { Exploration, Guidance, InformedAnalysis };

std::string_view to_string(Stage stage) noexcept;
Stage parse_stage(std::string_view text);  // throws InvalidArgument

struct StageLogEntry {
    size_t seq = 0;
    std::string timestamp;
    Stage stage = Stage::Exploration;
    // Exploration after any other stage opens a new loop iteration.
    size_t iteration = 1;
    std::string action;
    nlohmann::json payload = nlohmann::json::object();
    std::optional<std::string> note;

    bool operator==(const StageLogEntry&) const = default;
};

struct GroupSet {
    std::string id;
    std::string name;
    std::vector<std::string> subgroup_ids;
    std::string created_at;

    bool operator==(const GroupSet&) const = default;
};

struct StoredEvaluation {
    size_t seq = 0;  // log entry that produced it
    Evaluation evaluation;

    bool operator==(const StoredEvaluation&) const = default;
};

struct SubgroupMetrics {
    Subgroup subgroup;
    MetricVector metrics;
};

struct Comparison {
    SubgroupMetrics pinned;
    SubgroupMetrics hovered;
    // hovered minus pinned, per rate kind; nullopt where either side is undefined
    std::map<RateKind, Rate> difference;
};

using Clock = std::function<std::string()>;

// One auditor's session over one dataset. Every mutating call appends exactly
// one StageLogEntry, and the log alone reproduces the state: replaying it on
// the same dataset and tree yields an equal session.
class AuditSession {
public:
    AuditSession(std::string id, Dataset dataset, std::shared_ptr<const DecisionTree> tree,
                 Clock clock = utc_clock());

    static Clock utc_clock();

    const std::string& id() const noexcept { return id_; }
    const std::string& created_at() const noexcept { return created_at_; }
    // Dataset with the session's binning applied.
    const Dataset& dataset() const noexcept { return dataset_; }
    const Dataset& base_dataset() const noexcept { return base_dataset_; }
    const DecisionTree& tree() const noexcept { return navigator_.tree(); }

    std::vector<Subgroup> active_subgroups() const;
    const std::vector<GroupSet>& saved_group_sets() const noexcept { return saved_; }
    const std::optional<std::string>& pinned_subgroup() const noexcept { return pinned_; }
    const std::vector<PathStep>& tree_path() const noexcept { return navigator_.path(); }
    const std::string& tree_frontier() const noexcept { return navigator_.frontier(); }
    std::optional<std::string> selected_definition() const { return navigator_.selected_definition(); }
    const std::vector<StoredEvaluation>& evaluations() const noexcept { return evaluations_; }
    const std::vector<StageLogEntry>& stage_log() const noexcept { return log_; }
    const Subgroup& subgroup(std::string_view id) const;  // throws UnknownSubgroup

    // --- mutating operations (one log entry each) ---
    const std::vector<std::string>& generate_groups(Stage stage, const std::vector<FeatureSelection>& selections,
                                                    std::optional<std::string> note = {});
    const Subgroup& add_subgroup(Stage stage, const std::vector<Predicate>& predicates,
                                 std::optional<std::string> note = {});
    void remove_subgroup(Stage stage, const std::string& subgroup_id, std::optional<std::string> note = {});
    void pin(Stage stage, std::optional<std::string> subgroup_id, std::optional<std::string> note = {});
    const GroupSet& save_group_set(Stage stage, const std::string& name, std::optional<std::string> note = {});
    void restore_group_set(Stage stage, const std::string& group_set_id, std::optional<std::string> note = {});
    const std::string& navigate(Stage stage, const std::string& node_id, const std::string& answer,
                                std::optional<std::string> note = {});
    void backtrack(Stage stage, size_t steps = 1, std::optional<std::string> note = {});
    const Evaluation& evaluate(Stage stage, const EvaluationInputs& inputs, std::optional<std::string> note = {});
    void bin_feature(Stage stage, const std::string& feature, const BinStrategy& strategy,
                     std::optional<std::string> note = {});
    // Free-form entry (e.g. "view_distribution"). Reserved action names are rejected.
    const StageLogEntry& log_stage(Stage stage, const std::string& action, nlohmann::json payload = {},
                                   std::optional<std::string> note = {});

    // --- read-only views ---
    std::vector<SubgroupMetrics> active_metrics() const;
    MetricVector overall_metrics() const;
    Comparison compare(const std::string& hovered_id) const;
    std::vector<SimilarSubgroup> similar(const std::string& target_id) const;

    // Canonical state document; equal sessions produce equal documents.
    nlohmann::json state_json() const;
    std::string state_hash() const;

    // Rebuilds a session by re-applying logged entries.
    static AuditSession replay(std::string id, std::string created_at, Dataset base_dataset,
                               std::shared_ptr<const DecisionTree> tree, const std::vector<StageLogEntry>& log,
                               Clock clock = utc_clock());

    static bool is_reserved_action(std::string_view action);

    // Upper bound on generate_groups output; recorded in each generate entry.
    void set_product_cap(size_t cap) noexcept { product_cap_ = cap; }

private:
    void apply(const StageLogEntry& entry);
    const StageLogEntry& append(Stage stage, std::string action, nlohmann::json payload,
                                std::optional<std::string> note, std::string timestamp = {});
    std::vector<Subgroup> resolve(const std::vector<std::string>& ids) const;

    std::string id_;
    std::string created_at_;
    Dataset base_dataset_;
    Dataset dataset_;
    std::map<std::string, std::vector<double>> binning_;
    TreeNavigator navigator_;
    Clock clock_;

    std::map<std::string, Subgroup> registry_;
    std::vector<std::string> active_;
    std::vector<GroupSet> saved_;
    std::optional<std::string> pinned_;
    std::vector<StoredEvaluation> evaluations_;
    std::vector<StageLogEntry> log_;
    size_t product_cap_ = kDefaultProductCap;
};

struct AuditReport {
    nlohmann::json structured;
    std::string markdown;
};

// Deterministic audit document: dataset summary, saved group sets, decision
// path, evaluations and the chronological stage log. The structured form
// embeds the full log so it can be replayed.
AuditReport export_session(const AuditSession& session);

// Inverse of export_session's structured section.
AuditSession import_report(const nlohmann::json& structured, Dataset base_dataset,
                           std::shared_ptr<const DecisionTree> tree);

}  // namespace faircompass
