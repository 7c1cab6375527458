#pragma once

// Single-project service: serialized mutations with revision numbers,
// snapshot evaluation, assistance suggestions and the HTTP API.

#include "tdt/assist.hpp"
#include "tdt/evaluator.hpp"
#include "tdt/model.hpp"
#include "tdt/report.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

namespace httplib {
class Server;
}

namespace tdt {

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    /// Project file; loaded at start (if it exists) and rewritten after every mutation.
    std::filesystem::path project;
    SolverBudget budget;
    unsigned parallelism = 0;
    assist::ProviderConfig provider;
};

/// Reads a JSON config file. Every field is optional; relative paths are
/// resolved against the file's directory. Throws Error("InvalidConfig").
ServiceConfig load_config(const std::filesystem::path& path);
ServiceConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base = {});

/// Thrown when a conditional request names a revision that is not current.
class StaleRevision : public Error {
public:
    StaleRevision(std::uint64_t expected, std::uint64_t current);

    std::uint64_t current() const noexcept { return current_; }

private:
    std::uint64_t current_;
};

class ProjectService {
public:
    /// `provider` may be null; assistance requests then fail with a ProviderError.
    ProjectService(Project project, ServiceConfig config, std::unique_ptr<assist::Provider> provider = nullptr);

    std::uint64_t revision() const;
    Project snapshot() const;

    /// {revision, project}
    nlohmann::json get_project() const;
    nlohmann::json put_project(const nlohmann::json& body, std::optional<std::uint64_t> if_revision);
    /// Body: a node object plus an optional "parent" id. A missing id is generated.
    nlohmann::json add_node(const nlohmann::json& body, std::optional<std::uint64_t> if_revision);
    /// Merges the given fields into the node; "revision" in the body is a condition.
    nlohmann::json patch_node(const std::string& id, const nlohmann::json& body,
                              std::optional<std::uint64_t> if_revision);
    /// Removes the node and its subtree.
    nlohmann::json delete_node(const std::string& id, std::optional<std::uint64_t> if_revision);

    nlohmann::json evaluate();
    nlohmann::json evaluate_family(const std::string& id);

    /// Suggestions only: the project is not changed.
    nlohmann::json assist_decompose(const nlohmann::json& body);
    nlohmann::json assist_translate(const nlohmann::json& body);

    /// Uses the stored report when it describes the current revision.
    std::string report(ReportFormat format);
    std::string export_dot();

private:
    template <typename F>
    nlohmann::json mutate(std::optional<std::uint64_t> if_revision, F&& change);
    EvaluationReport current_report();
    assist::Provider& provider();

    mutable std::shared_mutex mutex_;
    Project project_;
    std::uint64_t revision_ = 1;
    std::optional<EvaluationReport> last_report_;
    ServiceConfig config_;
    std::mutex provider_mutex_;
    std::unique_ptr<assist::Provider> provider_;
};

/// HTTP status for an error kind: 400, 404, 409, 502 or 500.
int http_status_for(const std::exception& e);

void install_routes(httplib::Server& server, ProjectService& service);

/// Blocks serving `config.host:config.port`.
void serve(const ServiceConfig& config);

} // namespace tdt
