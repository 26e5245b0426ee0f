#include "faircompass/session.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <set>

#include "faircompass/error.hpp"
#include "faircompass/serialize.hpp"
#include "faircompass/text.hpp"

namespace faircompass {

namespace {

constexpr std::array<std::string_view, 10> kReservedActions = {
    "generate_groups", "add_subgroup", "remove_subgroup", "pin",      "save_group_set",
    "restore_group_set", "navigate",   "backtrack",       "evaluate", "bin_feature",
};

std::optional<std::string> optional_string(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<std::string>();
}

}  // namespace

std::string_view to_string(Stage stage) noexcept {
    switch (stage) {
        case Stage::Exploration: return "Exploration";
        case Stage::Guidance: return "Guidance";
        case Stage::InformedAnalysis: return "InformedAnalysis";
    }
    return "Unknown";
}

Stage parse_stage(std::string_view text) {
    for (Stage s : {Stage::Exploration, Stage::Guidance, Stage::InformedAnalysis}) {
        if (to_string(s) == text) return s;
    }
    if (text == "Informed Analysis" || text == "Informed_Analysis") return Stage::InformedAnalysis;
    throw Error(ErrorCode::InvalidArgument, "unknown stage '" + std::string(text) + "'");
}

AuditSession::AuditSession(std::string id, Dataset dataset, std::shared_ptr<const DecisionTree> tree, Clock clock)
    : id_(std::move(id)),
      base_dataset_(dataset),
      dataset_(std::move(dataset)),
      navigator_(std::move(tree)),
      clock_(std::move(clock)) {
    created_at_ = clock_();
}

Clock AuditSession::utc_clock() { return [] { return utc_timestamp_now(); }; }

bool AuditSession::is_reserved_action(std::string_view action) {
    return std::find(kReservedActions.begin(), kReservedActions.end(), action) != kReservedActions.end();
}

const Subgroup& AuditSession::subgroup(std::string_view id) const {
    auto it = registry_.find(std::string(id));
    if (it == registry_.end()) throw Error(ErrorCode::UnknownSubgroup, "unknown subgroup '" + std::string(id) + "'");
    return it->second;
}

std::vector<Subgroup> AuditSession::resolve(const std::vector<std::string>& ids) const {
    std::vector<Subgroup> out;
    out.reserve(ids.size());
    for (const auto& id : ids) out.push_back(subgroup(id));
    return out;
}

std::vector<Subgroup> AuditSession::active_subgroups() const { return resolve(active_); }

const StageLogEntry& AuditSession::append(Stage stage, std::string action, json payload,
                                          std::optional<std::string> note, std::string timestamp) {
    StageLogEntry e;
    e.seq = log_.size() + 1;
    e.timestamp = timestamp.empty() ? clock_() : std::move(timestamp);
    e.stage = stage;
    if (log_.empty()) {
        e.iteration = 1;
    } else {
        const auto& prev = log_.back();
        e.iteration = prev.iteration + ((stage == Stage::Exploration && prev.stage != Stage::Exploration) ? 1 : 0);
    }
    e.action = std::move(action);
    e.payload = payload.is_null() ? json::object() : std::move(payload);
    e.note = std::move(note);
    apply(e);
    log_.push_back(std::move(e));
    return log_.back();
}

void AuditSession::apply(const StageLogEntry& e) {
    const json& p = e.payload;
    const std::string& a = e.action;
    if (a == "generate_groups") {
        const auto selections = p.at("selections").get<std::vector<FeatureSelection>>();
        const size_t cap = p.value("product_cap", kDefaultProductCap);
        auto groups = generate_subgroups(dataset_, selections, cap);
        active_.clear();
        for (auto& g : groups) {
            active_.push_back(g.id);
            registry_.insert_or_assign(g.id, std::move(g));
        }
        if (pinned_ && std::find(active_.begin(), active_.end(), *pinned_) == active_.end()) pinned_.reset();
    } else if (a == "add_subgroup") {
        auto g = make_subgroup(dataset_, p.at("predicates").get<std::vector<Predicate>>());
        if (std::find(active_.begin(), active_.end(), g.id) == active_.end()) active_.push_back(g.id);
        registry_.insert_or_assign(g.id, std::move(g));
    } else if (a == "remove_subgroup") {
        const auto id = p.at("subgroup_id").get<std::string>();
        auto it = std::find(active_.begin(), active_.end(), id);
        if (it == active_.end()) throw Error(ErrorCode::UnknownSubgroup, "subgroup '" + id + "' is not active");
        active_.erase(it);
        if (pinned_ == id) pinned_.reset();
    } else if (a == "pin") {
        auto id = optional_string(p, "subgroup_id");
        if (id && std::find(active_.begin(), active_.end(), *id) == active_.end()) {
            throw Error(ErrorCode::UnknownSubgroup, "subgroup '" + *id + "' is not active");
        }
        pinned_ = std::move(id);
    } else if (a == "save_group_set") {
        if (active_.empty()) throw Error(ErrorCode::EmptySet, "there are no active subgroups to save");
        GroupSet gs;
        gs.id = "gs-" + std::to_string(saved_.size() + 1);
        gs.name = p.at("name").get<std::string>();
        gs.subgroup_ids = active_;
        gs.created_at = e.timestamp;
        saved_.push_back(std::move(gs));
    } else if (a == "restore_group_set") {
        const auto id = p.at("group_set_id").get<std::string>();
        auto it = std::find_if(saved_.begin(), saved_.end(), [&](const GroupSet& g) { return g.id == id; });
        if (it == saved_.end()) throw Error(ErrorCode::UnknownGroupSet, "unknown group set '" + id + "'");
        for (const auto& sid : it->subgroup_ids) {
            if (subgroup(sid).dataset_id != dataset_.id()) {
                throw Error(ErrorCode::StaleSubgroup, "subgroup '" + sid + "' of group set '" + id +
                                                          "' was built on a different binning");
            }
        }
        active_ = it->subgroup_ids;
        if (pinned_ && std::find(active_.begin(), active_.end(), *pinned_) == active_.end()) pinned_.reset();
    } else if (a == "navigate") {
        navigator_.navigate(p.at("node_id").get<std::string>(), p.at("answer").get<std::string>());
    } else if (a == "backtrack") {
        navigator_.backtrack(p.value("steps", size_t{1}));
    } else if (a == "evaluate") {
        const auto def_id = navigator_.selected_definition();
        if (!def_id) throw Error(ErrorCode::NoDefinitionSelected, "navigate the tree to a definition first");
        const auto inputs = p.at("inputs").get<EvaluationInputs>();
        auto ev = evaluate_definition(tree().definition(*def_id), dataset_, active_subgroups(), inputs);
        evaluations_.push_back({e.seq, std::move(ev)});
    } else if (a == "bin_feature") {
        const auto feature = p.at("feature").get<std::string>();
        const auto spec = bin_numeric(base_dataset_, feature, bin_strategy_from_json(p.at("strategy")));
        auto binning = binning_;
        binning[feature] = spec.bin_edges;
        Dataset next = base_dataset_;
        for (const auto& [name, edges] : binning) {
            FeatureSpec s = next.feature(name);
            s.bin_edges = edges;
            next = next.with_binning(s);
        }
        std::map<std::string, Subgroup> registry;
        for (const auto& [id, g] : registry_) {
            const bool uses = std::any_of(g.predicates.begin(), g.predicates.end(),
                                          [&](const Predicate& pr) { return pr.feature == feature; });
            if (uses || g.dataset_id != dataset_.id()) {
                registry.emplace(id, g);  // left stale
            } else {
                registry.emplace(id, make_subgroup(next, g.predicates, g.id));
            }
        }
        std::vector<std::string> active;
        for (const auto& id : active_) {
            if (registry.at(id).dataset_id == next.id()) active.push_back(id);
        }
        binning_ = std::move(binning);
        dataset_ = std::move(next);
        registry_ = std::move(registry);
        active_ = std::move(active);
        if (pinned_ && std::find(active_.begin(), active_.end(), *pinned_) == active_.end()) pinned_.reset();
    }
    // any other action is a free-form log entry
}

const std::vector<std::string>& AuditSession::generate_groups(Stage stage,
                                                              const std::vector<FeatureSelection>& selections,
                                                              std::optional<std::string> note) {
    append(stage, "generate_groups", {{"selections", selections}, {"product_cap", product_cap_}}, std::move(note));
    return active_;
}

const Subgroup& AuditSession::add_subgroup(Stage stage, const std::vector<Predicate>& predicates,
                                           std::optional<std::string> note) {
    append(stage, "add_subgroup", {{"predicates", predicates}}, std::move(note));
    return subgroup(subgroup_key(dataset_, predicates));
}

void AuditSession::remove_subgroup(Stage stage, const std::string& subgroup_id, std::optional<std::string> note) {
    append(stage, "remove_subgroup", {{"subgroup_id", subgroup_id}}, std::move(note));
}

void AuditSession::pin(Stage stage, std::optional<std::string> subgroup_id, std::optional<std::string> note) {
    json payload = {{"subgroup_id", subgroup_id ? json(*subgroup_id) : json(nullptr)}};
    append(stage, "pin", std::move(payload), std::move(note));
}

const GroupSet& AuditSession::save_group_set(Stage stage, const std::string& name, std::optional<std::string> note) {
    append(stage, "save_group_set", {{"name", name}}, std::move(note));
    return saved_.back();
}

void AuditSession::restore_group_set(Stage stage, const std::string& group_set_id, std::optional<std::string> note) {
    append(stage, "restore_group_set", {{"group_set_id", group_set_id}}, std::move(note));
}

const std::string& AuditSession::navigate(Stage stage, const std::string& node_id, const std::string& answer,
                                          std::optional<std::string> note) {
    append(stage, "navigate", {{"node_id", node_id}, {"answer", answer}}, std::move(note));
    return navigator_.frontier();
}

void AuditSession::backtrack(Stage stage, size_t steps, std::optional<std::string> note) {
    append(stage, "backtrack", {{"steps", steps}}, std::move(note));
}

const Evaluation& AuditSession::evaluate(Stage stage, const EvaluationInputs& inputs, std::optional<std::string> note) {
    append(stage, "evaluate", {{"inputs", inputs}}, std::move(note));
    return evaluations_.back().evaluation;
}

void AuditSession::bin_feature(Stage stage, const std::string& feature, const BinStrategy& strategy,
                               std::optional<std::string> note) {
    append(stage, "bin_feature", {{"feature", feature}, {"strategy", bin_strategy_json(strategy)}}, std::move(note));
}

const StageLogEntry& AuditSession::log_stage(Stage stage, const std::string& action, json payload,
                                             std::optional<std::string> note) {
    if (action.empty()) throw Error(ErrorCode::InvalidArgument, "log entries need an action");
    if (is_reserved_action(action)) {
        throw Error(ErrorCode::InvalidArgument, "'" + action + "' is recorded by its own operation");
    }
    return append(stage, action, std::move(payload), std::move(note));
}

std::vector<SubgroupMetrics> AuditSession::active_metrics() const {
    std::vector<SubgroupMetrics> out;
    for (const auto& g : active_subgroups()) {
        out.push_back({g, metrics(confusion(dataset_, membership_mask(dataset_, g)))});
    }
    return out;
}

MetricVector AuditSession::overall_metrics() const { return metrics(confusion(dataset_, mask_all(dataset_))); }

Comparison AuditSession::compare(const std::string& hovered_id) const {
    if (!pinned_) throw Error(ErrorCode::InvalidArgument, "pin a subgroup before comparing");
    const auto& pinned = subgroup(*pinned_);
    const auto& hovered = subgroup(hovered_id);
    Comparison c;
    c.pinned = {pinned, metrics(confusion(dataset_, membership_mask(dataset_, pinned)))};
    c.hovered = {hovered, metrics(confusion(dataset_, membership_mask(dataset_, hovered)))};
    for (RateKind k : kAllRateKinds) {
        const Rate a = rate_of(c.hovered.metrics, k);
        const Rate b = rate_of(c.pinned.metrics, k);
        c.difference[k] = (a && b) ? Rate(*a - *b) : std::nullopt;
    }
    return c;
}

std::vector<SimilarSubgroup> AuditSession::similar(const std::string& target_id) const {
    const auto& target = subgroup(target_id);
    std::vector<Subgroup> candidates;
    for (const auto& g : active_subgroups()) {
        if (g.id != target_id) candidates.push_back(g);
    }
    return similar_subgroups(target, candidates, dataset_);
}

json AuditSession::state_json() const {
    json saved = json::array();
    for (const auto& gs : saved_) {
        json j = gs;
        j["subgroups"] = resolve(gs.subgroup_ids);
        saved.push_back(j);
    }
    json evaluations = json::array();
    for (const auto& ev : evaluations_) evaluations.push_back({{"seq", ev.seq}, {"evaluation", ev.evaluation}});
    json binning = json::object();
    for (const auto& [name, edges] : binning_) binning[name] = edges;
    const auto selected = selected_definition();
    return {
        {"session_id", id_},
        {"created_at", created_at_},
        {"base_dataset_id", base_dataset_.id()},
        {"dataset_id", dataset_.id()},
        {"binning", binning},
        {"active_subgroups", active_subgroups()},
        {"saved_group_sets", saved},
        {"pinned_subgroup", pinned_ ? json(*pinned_) : json(nullptr)},
        {"tree",
         {{"version", tree().version},
          {"path", tree_path()},
          {"frontier", tree_frontier()},
          {"selected_definition", selected ? json(*selected) : json(nullptr)}}},
        {"evaluations", evaluations},
        {"stage_log", log_},
    };
}

std::string AuditSession::state_hash() const { return sha256_hex(state_json().dump()); }

AuditSession AuditSession::replay(std::string id, std::string created_at, Dataset base_dataset,
                                  std::shared_ptr<const DecisionTree> tree, const std::vector<StageLogEntry>& log,
                                  Clock clock) {
    AuditSession s(std::move(id), std::move(base_dataset), std::move(tree), [created_at] { return created_at; });
    for (const auto& e : log) {
        if (e.seq != s.log_.size() + 1) {
            throw Error(ErrorCode::InvalidArgument, "stage log is out of order at entry " + std::to_string(e.seq));
        }
        s.apply(e);
        s.log_.push_back(e);
    }
    s.clock_ = std::move(clock);
    return s;
}

// ---------------------------------------------------------------- export

namespace {

std::string fixed(double v) {
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.4f", v);
    return buf.data();
}

std::string fixed(const Rate& r) { return r ? fixed(*r) : "undefined"; }

std::string path_line(const AuditSession& s) {
    const auto& tree = s.tree();
    std::string line;
    for (const auto& step : s.tree_path()) {
        line += tree.node(step.node_id).title + " →(" + step.answer + ")→ ";
    }
    return line + tree.node(s.tree_frontier()).title;
}

std::string inputs_line(const EvaluationInputs& in) {
    std::string out;
    auto add = [&](const std::string& s) { out += (out.empty() ? "" : "; ") + s; };
    if (in.favourable_class) add("favourable class " + std::to_string(*in.favourable_class));
    if (in.sensitive_attribute) add("sensitive attribute `" + *in.sensitive_attribute + "`");
    if (in.legitimate_attributes) {
        std::string names;
        for (const auto& n : *in.legitimate_attributes) names += (names.empty() ? "`" : ", `") + n + "`";
        add("legitimate attributes " + names);
    }
    if (in.rate_kind) add("rate " + std::string(to_string(*in.rate_kind)));
    add("threshold " + fixed(in.threshold));
    add("minimum stratum size " + std::to_string(in.min_stratum_size));
    return out;
}

void render_parity(std::string& md, const ParityAssessment& p) {
    md += "| Group | Size | " + std::string(to_string(p.rate_kind)) + " |\n|---|---:|---:|\n";
    for (const auto& g : p.per_group) {
        md += "| " + g.display_name + " | " + std::to_string(g.size) + " | " + fixed(g.rate) + " |\n";
    }
    md += "\nMax absolute difference " + fixed(p.max_abs_difference) + " (threshold " + fixed(p.threshold) +
          "), min ratio " + fixed(p.min_ratio) + ": **" + (p.satisfied ? "satisfied" : "violated") + "**.\n";
}

void render_stratified(std::string& md, const StratifiedParity& s) {
    md += "Sensitive attribute `" + s.sensitive_attribute + "`, " + std::string(to_string(
                                                                      favourable_rate_kind(s.favourable_class))) +
          " per stratum.\n\n";
    md += "| Stratum | Size | Groups | Max difference | Result |\n|---|---:|---|---:|---|\n";
    for (const auto& st : s.strata) {
        std::string groups;
        for (const auto& g : st.assessment.per_group) {
            if (!groups.empty()) groups += "; ";
            std::string label = g.display_name;
            if (label.rfind(st.display_name + ", ", 0) == 0) label = label.substr(st.display_name.size() + 2);
            groups += label + " " + fixed(g.rate) + " (n=" + std::to_string(g.size) + ")";
        }
        md += "| " + st.display_name + " | " + std::to_string(st.size) + " | " + groups + " | " +
              fixed(st.assessment.max_abs_difference) + " | " + (st.assessment.satisfied ? "satisfied" : "violated") +
              " |\n";
    }
    if (!s.excluded.empty()) {
        md += "\nExcluded strata:\n\n";
        for (const auto& ex : s.excluded) {
            md += "- " + ex.display_name + " (" + std::to_string(ex.size) + " rows): " + ex.reason + "\n";
        }
    }
    const auto violated = std::count_if(s.strata.begin(), s.strata.end(),
                                        [](const Stratum& st) { return !st.assessment.satisfied; });
    md += "\n" + std::to_string(violated) + " of " + std::to_string(s.strata.size()) +
          " strata exceed the threshold " + fixed(s.threshold) + ": **" + (s.satisfied ? "satisfied" : "violated") +
          "**.\n";
}

size_t iteration_count(const std::vector<StageLogEntry>& log) { return log.empty() ? 0 : log.back().iteration; }

std::string payload_summary(const StageLogEntry& e) {
    json p = e.payload;
    if (p.is_object()) p.erase("result");
    std::string s = p.dump();
    if (s == "{}") return "";
    for (auto& c : s) {
        if (c == '|') c = '/';
    }
    return "`" + s + "`";
}

}  // namespace

AuditReport export_session(const AuditSession& s) {
    AuditReport report;
    const auto& ds = s.dataset();
    json path = json::array();
    for (const auto& step : s.tree_path()) {
        const auto& n = s.tree().node(step.node_id);
        path.push_back({{"node_id", n.id}, {"title", n.title}, {"text", n.text}, {"answer", step.answer}});
    }
    const auto selected = s.selected_definition();
    json evaluations = json::array();
    for (const auto& ev : s.evaluations()) evaluations.push_back({{"seq", ev.seq}, {"evaluation", ev.evaluation}});
    json saved = json::array();
    for (const auto& gs : s.saved_group_sets()) {
        json j = gs;
        json names = json::array();
        for (const auto& id : gs.subgroup_ids) names.push_back(s.subgroup(id).display_name);
        j["display_names"] = names;
        saved.push_back(j);
    }
    report.structured = {
        {"format", "faircompass-report/1"},
        {"session", {{"id", s.id()}, {"created_at", s.created_at()}, {"base_dataset_id", s.base_dataset().id()}}},
        {"dataset", dataset_summary(ds)},
        {"active_subgroups", s.active_subgroups()},
        {"saved_group_sets", saved},
        {"decision_path", path},
        {"frontier", s.tree_frontier()},
        {"selected_definition", selected ? json(s.tree().definition(*selected)) : json(nullptr)},
        {"evaluations", evaluations},
        {"iterations", iteration_count(s.stage_log())},
        {"stage_log", s.stage_log()},
    };

    std::string md;
    md += "# Fairness audit report\n\n";
    md += "Session `" + s.id() + "`, created " + s.created_at() + ".\n\n";
    md += "## Dataset\n\n";
    md += "- Dataset id: `" + ds.id() + "`\n";
    md += "- Rows: " + std::to_string(ds.row_count()) + "\n";
    md += "- Label column: `" + ds.config().label_column + "`; prediction column: `" +
          ds.config().prediction_column + "`\n";
    const auto overall = s.overall_metrics();
    md += "- Overall: accuracy " + fixed(overall.accuracy) + ", positive rate " + fixed(overall.positive_rate) +
          ", base rate " + fixed(overall.base_rate) + "\n";
    md += "- Features (" + std::to_string(ds.feature_count()) + "):\n\n";
    md += "| Feature | Kind | Levels |\n|---|---|---:|\n";
    for (size_t f = 0; f < ds.feature_count(); ++f) {
        md += "| " + ds.feature(f).name + " | " + std::string(to_string(ds.feature(f).kind)) + " | " +
              std::to_string(ds.levels(f).size()) + " |\n";
    }

    const auto active = s.active_subgroups();
    if (!active.empty()) {
        md += "\n## Active subgroups\n\n| Subgroup | Size |\n|---|---:|\n";
        for (const auto& g : active) md += "| " + g.display_name + " | " + std::to_string(g.size) + " |\n";
    }
    if (!s.saved_group_sets().empty()) {
        md += "\n## Saved group sets\n\n";
        for (const auto& gs : s.saved_group_sets()) {
            md += "- `" + gs.id + "` " + gs.name + " (" + gs.created_at + "): ";
            for (size_t i = 0; i < gs.subgroup_ids.size(); ++i) {
                md += (i ? ", " : "") + s.subgroup(gs.subgroup_ids[i]).display_name;
            }
            md += "\n";
        }
    }
    if (!s.tree_path().empty()) {
        md += "\n## Decision path\n\n" + path_line(s) + "\n\n";
        size_t i = 1;
        for (const auto& step : s.tree_path()) {
            const auto& n = s.tree().node(step.node_id);
            md += std::to_string(i++) + ". **" + n.title + "**: " + step.answer + "\n   > " + n.text + "\n";
        }
        if (selected) {
            const auto& def = s.tree().definition(*selected);
            md += "\nSelected definition: **" + def.name + "**\n\n" + def.description + "\n";
        }
    }
    if (!s.evaluations().empty()) {
        md += "\n## Evaluations\n";
        size_t i = 1;
        for (const auto& stored : s.evaluations()) {
            const auto& ev = stored.evaluation;
            md += "\n### " + std::to_string(i++) + ". " + s.tree().definition(ev.definition_id).name + ": " +
                  (ev.satisfied() ? "satisfied" : "violated") + "\n\n";
            md += "Log entry " + std::to_string(stored.seq) + "; " + inputs_line(ev.inputs) + ".\n\n";
            std::visit(
                [&](const auto& r) {
                    using T = std::decay_t<decltype(r)>;
                    if constexpr (std::is_same_v<T, ParityAssessment>) {
                        render_parity(md, r);
                    } else if constexpr (std::is_same_v<T, StratifiedParity>) {
                        render_stratified(md, r);
                    } else {
                        for (const auto& part : r.parts) {
                            render_parity(md, part);
                            md += "\n";
                        }
                        md += std::string("All parts: **") + (r.satisfied ? "satisfied" : "violated") + "**.\n";
                    }
                },
                ev.result);
        }
    }
    if (!s.stage_log().empty()) {
        md += "\n## Stage log\n\n";
        const size_t n = iteration_count(s.stage_log());
        md += std::to_string(n) + (n == 1 ? " iteration" : " iterations") +
              " of the Exploration, Guidance and Informed Analysis loop.\n\n";
        md += "| # | Time | Iteration | Stage | Action | Details | Note |\n|---:|---|---:|---|---|---|---|\n";
        for (const auto& e : s.stage_log()) {
            md += "| " + std::to_string(e.seq) + " | " + e.timestamp + " | " + std::to_string(e.iteration) + " | " +
                  std::string(to_string(e.stage)) + " | " + e.action + " | " + payload_summary(e) + " | " +
                  e.note.value_or("") + " |\n";
        }
    }
    report.markdown = std::move(md);
    return report;
}

AuditSession import_report(const json& structured, Dataset base_dataset, std::shared_ptr<const DecisionTree> tree) {
    if (structured.value("format", "") != "faircompass-report/1") {
        throw Error(ErrorCode::InvalidArgument, "not a faircompass report");
    }
    const auto& session = structured.at("session");
    const auto dataset_id = session.at("base_dataset_id").get<std::string>();
    if (dataset_id != base_dataset.id()) {
        throw Error(ErrorCode::UnknownDataset, "report was produced on dataset " + dataset_id + ", not " +
                                                   base_dataset.id());
    }
    return AuditSession::replay(session.at("id").get<std::string>(), session.at("created_at").get<std::string>(),
                                std::move(base_dataset), std::move(tree),
                                structured.at("stage_log").get<std::vector<StageLogEntry>>());
}

}  // namespace faircompass
