#pragma once

// HTTP-facing audit service. Requests are dispatched through handle(), which
// the httplib server and the tests share. With a store path configured,
// uploaded datasets and every session's stage log are persisted, and a new
// service instance on the same store reproduces the sessions by replay.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <nlohmann/json.hpp>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>

#include "faircompass/compass.hpp"
#include "faircompass/dataset.hpp"
#include "faircompass/error.hpp"
#include "faircompass/session.hpp"

namespace faircompass {

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    size_t max_dataset_bytes = 64u << 20;
    std::filesystem::path store_path;  // empty: keep everything in memory
    std::optional<std::filesystem::path> tree_path;
    double default_threshold = 0.1;
    size_t min_stratum_size = 20;
    size_t product_cap = kDefaultProductCap;
    std::uint64_t default_seed = 42;
    size_t default_k = 10;
    double dominance_threshold = 0.8;
};

// Relative paths in the file resolve against the file's directory.
ServiceConfig load_service_config(const std::filesystem::path& path);
ServiceConfig service_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});

struct Response {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
};

int http_status(ErrorCode code) noexcept;

class AuditService {
public:
    explicit AuditService(ServiceConfig config);
    ~AuditService();
    AuditService(const AuditService&) = delete;
    AuditService& operator=(const AuditService&) = delete;

    const ServiceConfig& config() const noexcept { return config_; }
    const DecisionTree& tree() const noexcept { return *tree_; }

    // `target` is the request path with an optional percent-encoded query.
    Response handle(std::string_view method, std::string_view target, std::string_view body = {});

    // Blocks until stop() is called. Returns false if the socket could not be bound.
    bool serve();
    void stop();
    bool running() const;

private:
    struct SessionSlot;

    Response route(std::string_view method, const std::vector<std::string>& segments,
                   const std::multimap<std::string, std::string>& query, const nlohmann::json& body);
    Response route_session(std::string_view method, SessionSlot& slot, const std::vector<std::string>& rest,
                           const std::multimap<std::string, std::string>& query, const nlohmann::json& body);

    std::shared_ptr<const Dataset> register_dataset(std::string csv, const IngestConfig& ingest, bool persist);
    std::shared_ptr<const Dataset> find_dataset(const std::string& id) const;
    SessionSlot& find_session(const std::string& id);
    std::string next_session_id();
    SessionSlot& add_session(AuditSession session, bool persist);
    void persist_new_entries(SessionSlot& slot);
    void reload_store();

    ServiceConfig config_;
    std::shared_ptr<const DecisionTree> tree_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, std::shared_ptr<const Dataset>> datasets_;
    std::map<std::string, std::unique_ptr<SessionSlot>> sessions_;
    size_t next_session_ = 1;
    struct Server;
    std::unique_ptr<Server> server_;
};

}  // namespace faircompass
