#include "faircompass/service.hpp"

#include <httplib.h>

#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "faircompass/serialize.hpp"
#include "faircompass/suggest.hpp"
#include "faircompass/text.hpp"

namespace faircompass {

namespace fs = std::filesystem;
using Query = std::multimap<std::string, std::string>;

namespace {

constexpr int kCreated = 201;

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, std::string_view content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
    }
    fs::rename(tmp, path);
}

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::string url_decode(std::string_view s, bool plus_is_space) {
    std::string out;
    out.reserve(s.size());
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '%' && i + 2 < s.size()) {
            const int hi = hex_value(s[i + 1]);
            const int lo = hex_value(s[i + 2]);
            if (hi >= 0 && lo >= 0) {
                out.push_back(static_cast<char>(hi * 16 + lo));
                i += 2;
                continue;
            }
        }
        out.push_back(plus_is_space && s[i] == '+' ? ' ' : s[i]);
    }
    return out;
}

std::vector<std::string> split_path(std::string_view path) {
    std::vector<std::string> out;
    size_t start = 0;
    while (start <= path.size()) {
        size_t end = path.find('/', start);
        if (end == std::string_view::npos) end = path.size();
        if (end > start) out.push_back(url_decode(path.substr(start, end - start), false));
        start = end + 1;
    }
    return out;
}

Query parse_query(std::string_view q) {
    Query out;
    size_t start = 0;
    while (start < q.size()) {
        size_t end = q.find('&', start);
        if (end == std::string_view::npos) end = q.size();
        const auto part = q.substr(start, end - start);
        if (!part.empty()) {
            const auto eq = part.find('=');
            if (eq == std::string_view::npos) {
                out.emplace(url_decode(part, true), "");
            } else {
                out.emplace(url_decode(part.substr(0, eq), true), url_decode(part.substr(eq + 1), true));
            }
        }
        start = end + 1;
    }
    return out;
}

std::optional<std::string> query_value(const Query& q, const std::string& key) {
    auto it = q.find(key);
    if (it == q.end()) return std::nullopt;
    return it->second;
}

template <typename T>
T query_number(const Query& q, const std::string& key, T fallback) {
    const auto v = query_value(q, key);
    if (!v) return fallback;
    const auto parsed = parse_number(*v);
    if (!parsed || *parsed < 0) throw Error(ErrorCode::InvalidArgument, "query parameter '" + key + "' must be a number");
    return static_cast<T>(*parsed);
}

Response json_response(int status, const json& j) { return {status, "application/json", j.dump()}; }

Response error_response(int status, std::string_view code, const std::string& message) {
    return json_response(status, {{"error", {{"code", code}, {"message", message}}}});
}

Response not_found(std::string_view path) {
    return error_response(404, "NotFound", "no route for " + std::string(path));
}

Stage stage_of(const json& body, Stage fallback) {
    if (body.contains("stage") && !body.at("stage").is_null()) return parse_stage(body.at("stage").get<std::string>());
    return fallback;
}

std::optional<std::string> note_of(const json& body) {
    if (body.contains("note") && !body.at("note").is_null()) return body.at("note").get<std::string>();
    return std::nullopt;
}

json tree_state(const AuditSession& s) {
    const auto selected = s.selected_definition();
    return {{"version", s.tree().version},
            {"root", s.tree().root},
            {"path", s.tree_path()},
            {"frontier", s.tree_frontier()},
            {"node", describe_node(s.tree(), s.tree_frontier())},
            {"selected_definition", selected ? json(*selected) : json(nullptr)}};
}

json session_state(const AuditSession& s) {
    json j = s.state_json();
    j["state_hash"] = s.state_hash();
    return j;
}

}  // namespace

int http_status(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::UnknownDataset:
        case ErrorCode::UnknownSession:
        case ErrorCode::UnknownSubgroup:
        case ErrorCode::UnknownGroupSet:
        case ErrorCode::UnknownNode:
        case ErrorCode::UnknownDefinition:
        case ErrorCode::UnknownFeature:
            return 404;
        case ErrorCode::OffPath:
        case ErrorCode::StaleSubgroup:
        case ErrorCode::NoDefinitionSelected:
            return 409;
        case ErrorCode::DatasetTooLarge:
            return 413;
        case ErrorCode::InvalidArgument:
            return 400;
        default:
            return 422;
    }
}

ServiceConfig service_config_from_json(const json& j, const fs::path& base_dir) {
    ServiceConfig c;
    auto resolve = [&](const std::string& p) {
        fs::path path(p);
        return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
    };
    if (j.contains("listen")) {
        c.host = j.at("listen").value("host", c.host);
        c.port = j.at("listen").value("port", c.port);
    }
    c.host = j.value("host", c.host);
    c.port = j.value("port", c.port);
    c.max_dataset_bytes = j.value("max_dataset_bytes", c.max_dataset_bytes);
    if (j.contains("store_path") && !j.at("store_path").is_null()) c.store_path = resolve(j.at("store_path"));
    if (j.contains("tree_path") && !j.at("tree_path").is_null()) c.tree_path = resolve(j.at("tree_path"));
    c.default_threshold = j.value("default_threshold", c.default_threshold);
    c.min_stratum_size = j.value("min_stratum_size", c.min_stratum_size);
    c.product_cap = j.value("product_cap", c.product_cap);
    c.default_seed = j.value("default_seed", c.default_seed);
    c.default_k = j.value("default_k", c.default_k);
    c.dominance_threshold = j.value("dominance_threshold", c.dominance_threshold);
    if (c.port < 0 || c.port > 65535) throw Error(ErrorCode::InvalidArgument, "port out of range");
    if (c.max_dataset_bytes == 0 || c.product_cap == 0 || c.min_stratum_size == 0 || c.default_k == 0) {
        throw Error(ErrorCode::InvalidArgument, "caps and sizes must be positive");
    }
    if (c.default_threshold < 0) throw Error(ErrorCode::InvalidArgument, "default_threshold must be non-negative");
    return c;
}

ServiceConfig load_service_config(const fs::path& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, "invalid config " + path.string() + ": " + e.what());
    }
    return service_config_from_json(j, path.parent_path());
}

struct AuditService::SessionSlot {
    explicit SessionSlot(AuditSession s) : session(std::move(s)) {}
    std::mutex mutex;
    AuditSession session;
    size_t persisted = 0;
    fs::path log_path;
};

struct AuditService::Server {
    httplib::Server http;
};

AuditService::AuditService(ServiceConfig config)
    : config_(std::move(config)), server_(std::make_unique<Server>()) {
    if (config_.tree_path) {
        tree_ = std::make_shared<const DecisionTree>(load_tree(read_file(*config_.tree_path)));
    } else {
        tree_ = std::shared_ptr<const DecisionTree>(&default_tree(), [](const DecisionTree*) {});
    }
    if (!config_.store_path.empty()) {
        fs::create_directories(config_.store_path / "datasets");
        fs::create_directories(config_.store_path / "sessions");
        reload_store();
    }
}

AuditService::~AuditService() = default;

void AuditService::reload_store() {
    for (const auto& entry : fs::directory_iterator(config_.store_path / "datasets")) {
        if (entry.path().extension() != ".json") continue;
        try {
            const auto meta = json::parse(read_file(entry.path()));
            auto csv = read_file(fs::path(entry.path()).replace_extension(".csv"));
            auto ds = register_dataset(std::move(csv), meta.at("config").get<IngestConfig>(), false);
            if (ds->id() != meta.at("dataset_id").get<std::string>()) {
                std::cerr << "faircompass: dataset " << entry.path() << " no longer matches its id\n";
            }
        } catch (const std::exception& e) {
            std::cerr << "faircompass: skipping " << entry.path() << ": " << e.what() << "\n";
        }
    }
    std::vector<fs::path> logs;
    for (const auto& entry : fs::directory_iterator(config_.store_path / "sessions")) {
        if (entry.path().extension() == ".jsonl") logs.push_back(entry.path());
    }
    std::sort(logs.begin(), logs.end());
    for (const auto& path : logs) {
        try {
            std::istringstream in(read_file(path));
            std::string line;
            std::getline(in, line);
            const auto header = json::parse(line);
            std::vector<StageLogEntry> log;
            while (std::getline(in, line)) {
                if (!trim(line).empty()) log.push_back(json::parse(line).get<StageLogEntry>());
            }
            auto ds = find_dataset(header.at("dataset_id").get<std::string>());
            auto session = AuditSession::replay(header.at("session_id").get<std::string>(),
                                                header.at("created_at").get<std::string>(), *ds, tree_, log);
            session.set_product_cap(config_.product_cap);
            auto& slot = add_session(std::move(session), false);
            slot.log_path = path;
            slot.persisted = log.size();
        } catch (const std::exception& e) {
            std::cerr << "faircompass: skipping session " << path << ": " << e.what() << "\n";
        }
    }
}

std::shared_ptr<const Dataset> AuditService::register_dataset(std::string csv, const IngestConfig& ingest,
                                                              bool persist) {
    if (csv.size() > config_.max_dataset_bytes) {
        throw Error(ErrorCode::DatasetTooLarge, "dataset is " + std::to_string(csv.size()) + " bytes, limit is " +
                                                    std::to_string(config_.max_dataset_bytes));
    }
    auto ds = std::make_shared<const Dataset>(load_dataset(csv, ingest));
    std::unique_lock lock(mutex_);
    auto [it, inserted] = datasets_.emplace(ds->id(), ds);
    if (inserted && persist && !config_.store_path.empty()) {
        const auto base = config_.store_path / "datasets" / ds->id();
        write_file(fs::path(base).replace_extension(".csv"), csv);
        json meta = {{"dataset_id", ds->id()}, {"config", ingest}};
        write_file(fs::path(base).replace_extension(".json"), meta.dump(2));
    }
    return it->second;
}

std::string AuditService::next_session_id() {
    std::unique_lock lock(mutex_);
    std::string id;
    do {
        char buf[16];
        std::snprintf(buf, sizeof buf, "s-%06zu", next_session_++);
        id = buf;
    } while (sessions_.count(id));
    return id;
}

std::shared_ptr<const Dataset> AuditService::find_dataset(const std::string& id) const {
    std::shared_lock lock(mutex_);
    auto it = datasets_.find(id);
    if (it == datasets_.end()) throw Error(ErrorCode::UnknownDataset, "unknown dataset '" + id + "'");
    return it->second;
}

AuditService::SessionSlot& AuditService::find_session(const std::string& id) {
    std::shared_lock lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw Error(ErrorCode::UnknownSession, "unknown session '" + id + "'");
    return *it->second;
}

AuditService::SessionSlot& AuditService::add_session(AuditSession session, bool persist) {
    std::unique_lock lock(mutex_);
    const std::string id = session.id();
    if (sessions_.count(id)) throw Error(ErrorCode::InvalidArgument, "session '" + id + "' already exists");
    auto slot = std::make_unique<SessionSlot>(std::move(session));
    if (!config_.store_path.empty()) {
        slot->log_path = config_.store_path / "sessions" / (id + ".jsonl");
        if (persist) {
            json header = {{"session_id", id},
                           {"created_at", slot->session.created_at()},
                           {"dataset_id", slot->session.base_dataset().id()}};
            write_file(slot->log_path, header.dump() + "\n");
        }
    }
    // keep generated ids ahead of anything loaded from the store
    if (id.rfind("s-", 0) == 0) {
        if (const auto n = parse_number(id.substr(2)); n && *n >= static_cast<double>(next_session_)) {
            next_session_ = static_cast<size_t>(*n) + 1;
        }
    }
    auto& ref = *slot;
    sessions_.emplace(id, std::move(slot));
    return ref;
}

void AuditService::persist_new_entries(SessionSlot& slot) {
    const auto& log = slot.session.stage_log();
    if (slot.log_path.empty()) {
        slot.persisted = log.size();
        return;
    }
    if (slot.persisted == log.size()) return;
    std::ofstream out(slot.log_path, std::ios::binary | std::ios::app);
    for (size_t i = slot.persisted; i < log.size(); ++i) out << json(log[i]).dump() << "\n";
    out.flush();
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot append to " + slot.log_path.string());
    slot.persisted = log.size();
}

Response AuditService::handle(std::string_view method, std::string_view target, std::string_view body) {
    const auto qpos = target.find('?');
    const auto path = target.substr(0, qpos);
    const Query query = qpos == std::string_view::npos ? Query{} : parse_query(target.substr(qpos + 1));
    try {
        json parsed = json::object();
        if (!trim(body).empty()) {
            if (body.size() > config_.max_dataset_bytes + (1u << 20)) {
                throw Error(ErrorCode::DatasetTooLarge, "request body exceeds the configured limit");
            }
            parsed = json::parse(body);
        }
        const auto segments = split_path(path);
        if (segments.size() < 2 || segments[0] != "api" || segments[1] != "v1") return not_found(path);
        return route(method, {segments.begin() + 2, segments.end()}, query, parsed);
    } catch (const IngestError& e) {
        json err = {{"code", to_string(e.code())}, {"message", e.what()}};
        if (!e.column().empty()) err["column"] = e.column();
        if (e.row() != 0) err["row"] = e.row();
        return json_response(http_status(e.code()), {{"error", err}});
    } catch (const Error& e) {
        return error_response(http_status(e.code()), to_string(e.code()), e.what());
    } catch (const json::exception& e) {
        return error_response(400, "InvalidArgument", std::string("malformed request: ") + e.what());
    } catch (const std::exception& e) {
        return error_response(500, "Internal", e.what());
    }
}

Response AuditService::route(std::string_view method, const std::vector<std::string>& seg, const Query& query,
                             const json& body) {
    const bool get = method == "GET";
    const bool post = method == "POST";
    const size_t n = seg.size();
    if (n == 1 && seg[0] == "health" && get) return json_response(200, {{"status", "ok"}});
    if (n == 1 && seg[0] == "tree" && get) return json_response(200, json::parse(tree_to_json(*tree_)));

    if (n >= 1 && seg[0] == "datasets") {
        if (n == 1 && post) {
            const auto ingest = body.value("config", json::object()).get<IngestConfig>();
            auto ds = register_dataset(body.at("csv").get<std::string>(), ingest, true);
            return json_response(kCreated, dataset_summary(*ds));
        }
        if (n == 1 && get) {
            std::shared_lock lock(mutex_);
            json ids = json::array();
            for (const auto& [id, ds] : datasets_) ids.push_back({{"dataset_id", id}, {"row_count", ds->row_count()}});
            return json_response(200, ids);
        }
        if (n == 2 && get) return json_response(200, dataset_summary(*find_dataset(seg[1])));
        if (n == 4 && get && seg[2] == "distribution") {
            return json_response(200, feature_distribution(*find_dataset(seg[1]), seg[3]));
        }
        if (n == 3 && get && seg[2] == "suggestions") {
            SuggestOptions opts;
            opts.ranking_rate = parse_rate_kind(query_value(query, "rate").value_or("accuracy"));
            opts.k = query_number(query, "k", config_.default_k);
            opts.seed = query_number(query, "seed", config_.default_seed);
            opts.dominance_threshold = query_number(query, "dominance", config_.dominance_threshold);
            return json_response(200, suggest_subgroups(*find_dataset(seg[1]), opts));
        }
        return not_found("/api/v1/datasets");
    }

    if (n >= 1 && seg[0] == "sessions") {
        if (n == 1 && post) {
            auto ds = find_dataset(body.at("dataset_id").get<std::string>());
            AuditSession session(next_session_id(), *ds, tree_);
            session.set_product_cap(config_.product_cap);
            auto& slot = add_session(std::move(session), true);
            std::lock_guard lock(slot.mutex);
            return json_response(kCreated, session_state(slot.session));
        }
        if (n == 1 && get) {
            std::shared_lock lock(mutex_);
            json ids = json::array();
            for (const auto& [id, slot] : sessions_) ids.push_back(id);
            return json_response(200, ids);
        }
        if (n == 2 && post && seg[1] == "import") {
            // imported sessions get a fresh id so they never collide with the original
            json report = body.at("report");
            auto ds = find_dataset(report.at("session").at("base_dataset_id").get<std::string>());
            report["session"]["id"] = next_session_id();
            auto session = import_report(report, *ds, tree_);
            session.set_product_cap(config_.product_cap);
            auto& slot = add_session(std::move(session), true);
            std::lock_guard lock(slot.mutex);
            persist_new_entries(slot);
            return json_response(kCreated, session_state(slot.session));
        }
        auto& slot = find_session(seg[1]);
        std::lock_guard lock(slot.mutex);
        auto response = route_session(method, slot, {seg.begin() + 2, seg.end()}, query, body);
        persist_new_entries(slot);
        return response;
    }
    return not_found("/api/v1");
}

Response AuditService::route_session(std::string_view method, SessionSlot& slot, const std::vector<std::string>& seg,
                                     const Query& query, const json& body) {
    AuditSession& s = slot.session;
    const bool get = method == "GET";
    const bool post = method == "POST";
    const size_t n = seg.size();
    auto is = [&](std::initializer_list<std::string_view> parts) {
        if (parts.size() != n) return false;
        size_t i = 0;
        for (auto p : parts) {
            if (p != "*" && seg[i] != p) return false;
            ++i;
        }
        return true;
    };
    auto subgroups_json = [&] { return json{{"active_subgroups", s.active_subgroups()}}; };

    if (n == 0 && get) return json_response(200, session_state(s));

    if (is({"groups"}) && get) return json_response(200, subgroups_json());
    if (is({"groups", "generate"}) && post) {
        s.generate_groups(stage_of(body, Stage::Exploration), body.at("selections").get<std::vector<FeatureSelection>>(),
                          note_of(body));
        return json_response(200, subgroups_json());
    }
    if (is({"groups"}) && post) {
        const auto& g = s.add_subgroup(stage_of(body, Stage::Exploration),
                                       body.at("predicates").get<std::vector<Predicate>>(), note_of(body));
        return json_response(kCreated, g);
    }
    if (is({"groups", "remove"}) && post) {
        s.remove_subgroup(stage_of(body, Stage::Exploration), body.at("subgroup_id").get<std::string>(), note_of(body));
        return json_response(200, subgroups_json());
    }
    if (is({"metrics"}) && get) {
        json overall = s.overall_metrics();
        json subgroups = s.active_metrics();
        if (const auto rates = query_value(query, "rates")) {
            std::set<std::string> keep{"size"};
            const auto rows = parse_csv(*rates);
            for (auto name : rows.empty() ? CsvRow{} : rows.front()) {
                name = trim(name);
                if (name == "tpr") name = "recall";
                if (!overall.contains(name)) throw Error(ErrorCode::InvalidArgument, "unknown rate '" + name + "'");
                keep.insert(name);
            }
            auto filter = [&](json& m) {
                json out = json::object();
                for (const auto& k : keep) out[k] = m.at(k);
                m = std::move(out);
            };
            filter(overall);
            for (auto& g : subgroups) filter(g.at("metrics"));
        }
        return json_response(200, {{"overall", overall}, {"subgroups", subgroups}});
    }
    if (is({"pin"}) && post) {
        std::optional<std::string> id;
        if (body.contains("subgroup_id") && !body.at("subgroup_id").is_null()) id = body.at("subgroup_id");
        s.pin(stage_of(body, Stage::Exploration), id, note_of(body));
        return json_response(200, {{"pinned_subgroup", id ? json(*id) : json(nullptr)}});
    }
    if (is({"compare"}) && get) {
        const auto hover = query_value(query, "hover");
        if (!hover) throw Error(ErrorCode::InvalidArgument, "compare needs ?hover=<subgroup id>");
        return json_response(200, s.compare(*hover));
    }
    if (is({"groupsets"}) && get) return json_response(200, s.saved_group_sets());
    if (is({"groupsets"}) && post) {
        return json_response(kCreated,
                             s.save_group_set(stage_of(body, Stage::Exploration), body.at("name"), note_of(body)));
    }
    if (is({"groupsets", "*", "restore"}) && post) {
        s.restore_group_set(stage_of(body, Stage::Exploration), seg[1], note_of(body));
        return json_response(200, subgroups_json());
    }
    if (is({"suggestions"}) && get) {
        SuggestOptions opts;
        opts.ranking_rate = parse_rate_kind(query_value(query, "rate").value_or("accuracy"));
        opts.k = query_number(query, "k", config_.default_k);
        opts.seed = query_number(query, "seed", config_.default_seed);
        opts.dominance_threshold = query_number(query, "dominance", config_.dominance_threshold);
        return json_response(200, suggest_subgroups(s.dataset(), opts));
    }
    if (is({"similar"}) && get) {
        const auto target = query_value(query, "target");
        if (!target) throw Error(ErrorCode::InvalidArgument, "similar needs ?target=<subgroup id>");
        return json_response(200, s.similar(*target));
    }
    if (is({"distribution", "*"}) && get) return json_response(200, feature_distribution(s.dataset(), seg[1]));
    if (is({"tree"}) && get) return json_response(200, tree_state(s));
    if (is({"tree", "nodes", "*"}) && get) return json_response(200, describe_node(s.tree(), seg[2]));
    if (is({"tree", "navigate"}) && post) {
        s.navigate(stage_of(body, Stage::Guidance), body.at("node_id"), body.at("answer"), note_of(body));
        return json_response(200, tree_state(s));
    }
    if (is({"tree", "backtrack"}) && post) {
        s.backtrack(stage_of(body, Stage::Guidance), body.value("steps", size_t{1}), note_of(body));
        return json_response(200, tree_state(s));
    }
    if (is({"evaluate"}) && post) {
        json in = body.contains("inputs") ? body.at("inputs") : body;
        auto inputs = in.get<EvaluationInputs>();
        if (!in.contains("threshold") || in.at("threshold").is_null()) inputs.threshold = config_.default_threshold;
        if (!in.contains("min_stratum_size") || in.at("min_stratum_size").is_null()) {
            inputs.min_stratum_size = config_.min_stratum_size;
        }
        return json_response(200, s.evaluate(stage_of(body, Stage::InformedAnalysis), inputs, note_of(body)));
    }
    if (is({"bin"}) && post) {
        s.bin_feature(stage_of(body, Stage::Exploration), body.at("feature"),
                      bin_strategy_from_json(body.at("strategy")), note_of(body));
        return json_response(200, {{"dataset", dataset_summary(s.dataset())},
                                   {"active_subgroups", s.active_subgroups()}});
    }
    if (is({"log"}) && get) return json_response(200, s.stage_log());
    if (is({"log"}) && post) {
        if (!body.contains("stage")) throw Error(ErrorCode::InvalidArgument, "log entries need a stage");
        const auto& e = s.log_stage(stage_of(body, Stage::Exploration), body.at("action"),
                                    body.value("payload", json::object()), note_of(body));
        return json_response(kCreated, e);
    }
    if (is({"report"}) && get) {
        const auto report = export_session(s);
        const auto format = query_value(query, "format").value_or("json");
        if (format == "markdown" || format == "md") return {200, "text/markdown; charset=utf-8", report.markdown};
        if (format != "json") throw Error(ErrorCode::InvalidArgument, "format must be json or markdown");
        return json_response(200, report.structured);
    }
    return not_found("/api/v1/sessions/" + s.id());
}

bool AuditService::serve() {
    auto& http = server_->http;
    http.set_payload_max_length(config_.max_dataset_bytes + (1u << 20));
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
        const auto r = handle(req.method, req.target, req.body);
        res.status = r.status;
        res.set_content(r.body, r.content_type);
    };
    http.Get(".*", handler);
    http.Post(".*", handler);
    http.Delete(".*", handler);
    http.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (res.body.empty()) {
            const json err = {{"error", {{"code", res.status == 413 ? "DatasetTooLarge" : "HttpError"},
                                         {"message", httplib::status_message(res.status)}}}};
            res.set_content(err.dump(), "application/json");
        }
    });
    return http.listen(config_.host, config_.port);
}

void AuditService::stop() { server_->http.stop(); }

bool AuditService::running() const { return server_->http.is_running(); }

}  // namespace faircompass
