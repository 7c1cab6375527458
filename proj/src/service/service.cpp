#include "tdt/service.hpp"

#include "tdt/project_io.hpp"

#include <httplib.h>

#include <algorithm>
#include <iostream>
#include <set>

namespace tdt {

using nlohmann::json;

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p)
{
    std::filesystem::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

std::string generate_id(const Project& p)
{
    for (std::size_t k = p.tree.nodes.size() + 1;; ++k) {
        std::string id = "n" + std::to_string(k);
        if (!p.tree.contains(id))
            return id;
    }
}

void check_valid(const Project& p)
{
    auto violations = validate(p);
    if (!is_valid(violations))
        throw ValidationFailed(std::move(violations));
}

json node_result_json(const NodeResult& r)
{
    return json{{"id", r.id},
                {"status", to_string(r.status)},
                {"evidence_assumed", r.evidence_assumed},
                {"vacuous_premises", r.vacuous_premises},
                {"obligation", r.obligation},
                {"verdict", r.verdict ? verdict_to_json(*r.verdict) : json(nullptr)},
                {"explanation", r.explanation}};
}

std::string required_string(const json& body, const char* key)
{
    if (!body.is_object() || !body.contains(key) || !body.at(key).is_string())
        throw Error("BadRequest", std::string("field '") + key + "' (string) is required");
    return body.at(key).get<std::string>();
}

void send_json(httplib::Response& res, const json& body, int status = 200)
{
    res.status = status;
    res.set_content(body.dump(2) + "\n", "application/json");
}

std::optional<std::uint64_t> if_match(const httplib::Request& req)
{
    if (!req.has_header("If-Match"))
        return std::nullopt;
    std::string v = req.get_header_value("If-Match");
    v.erase(std::remove(v.begin(), v.end(), '"'), v.end());
    try {
        return std::stoull(v);
    } catch (const std::exception&) {
        throw Error("BadRequest", "If-Match must be a revision number");
    }
}

json body_of(const httplib::Request& req)
{
    if (req.body.empty())
        return json::object();
    try {
        return json::parse(req.body);
    } catch (const json::parse_error& e) {
        throw Error("BadRequest", std::string("request body is not valid JSON: ") + e.what());
    }
}

} // namespace

ServiceConfig config_from_json(const json& j, const std::filesystem::path& base)
{
    if (!j.is_object())
        throw Error("InvalidConfig", "config must be a JSON object");
    ServiceConfig c;
    try {
        c.host = j.value("host", c.host);
        c.port = j.value("port", c.port);
        if (j.contains("project"))
            c.project = resolve(base, j.at("project").get<std::string>());
        c.parallelism = j.value("parallelism", c.parallelism);
        if (j.contains("budget")) {
            const json& b = j.at("budget");
            c.budget.max_steps = b.value("max_steps", c.budget.max_steps);
            c.budget.max_boxes = b.value("max_boxes", c.budget.max_boxes);
            c.budget.max_universe = b.value("max_universe", c.budget.max_universe);
            c.budget.wall_ms = b.value("wall_ms", c.budget.wall_ms);
        }
        if (j.contains("provider")) {
            const json& pj = j.at("provider");
            auto& pc = c.provider;
            pc.endpoint = pj.value("endpoint", pc.endpoint);
            pc.model = pj.value("model", pc.model);
            if (pj.contains("mode"))
                pc.mode = assist::provider_mode_from_string(pj.at("mode").get<std::string>());
            if (pj.contains("fixture"))
                pc.fixture = resolve(base, pj.at("fixture").get<std::string>());
            pc.api_key_env = pj.value("api_key_env", pc.api_key_env);
            pc.timeout_s = pj.value("timeout_s", pc.timeout_s);
        }
    } catch (const json::exception& e) {
        throw Error("InvalidConfig", std::string("bad config value: ") + e.what());
    }
    if (c.port < 0 || c.port > 65535)
        throw Error("InvalidConfig", "port out of range");
    return c;
}

ServiceConfig load_config(const std::filesystem::path& path)
{
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw Error("InvalidConfig", path.string() + ": " + e.what());
    }
    return config_from_json(j, path.parent_path());
}

StaleRevision::StaleRevision(std::uint64_t expected, std::uint64_t current)
    : Error("StaleRevision", "revision " + std::to_string(expected) + " is stale; current revision is " +
                                 std::to_string(current)),
      current_(current)
{
}

ProjectService::ProjectService(Project project, ServiceConfig config, std::unique_ptr<assist::Provider> provider)
    : project_(std::move(project)), config_(std::move(config)), provider_(std::move(provider))
{
    check_valid(project_);
}

std::uint64_t ProjectService::revision() const
{
    std::shared_lock lock(mutex_);
    return revision_;
}

Project ProjectService::snapshot() const
{
    std::shared_lock lock(mutex_);
    return project_;
}

json ProjectService::get_project() const
{
    std::shared_lock lock(mutex_);
    return json{{"revision", revision_}, {"project", project_to_json(project_)}};
}

template <typename F>
json ProjectService::mutate(std::optional<std::uint64_t> if_revision, F&& change)
{
    std::unique_lock lock(mutex_);
    if (if_revision && *if_revision != revision_)
        throw StaleRevision(*if_revision, revision_);
    Project next = project_;
    json payload = change(next);
    check_valid(next);
    if (!config_.project.empty())
        save_project(next, config_.project);
    project_ = std::move(next);
    ++revision_;
    payload["revision"] = revision_;
    return payload;
}

json ProjectService::put_project(const json& body, std::optional<std::uint64_t> if_revision)
{
    json doc = body.is_object() && body.contains("project") ? body.at("project") : body;
    Project replacement = project_from_json(doc);
    return mutate(if_revision, [&](Project& p) {
        p = replacement;
        return json{{"project", project_to_json(p)}};
    });
}

json ProjectService::add_node(const json& body, std::optional<std::uint64_t> if_revision)
{
    if (!body.is_object())
        throw Error("BadRequest", "node must be a JSON object");
    json nj = body;
    std::optional<std::string> parent;
    if (nj.contains("parent")) {
        if (!nj.at("parent").is_null())
            parent = nj.at("parent").get<std::string>();
        nj.erase("parent");
    }
    nj.erase("revision");
    return mutate(if_revision, [&](Project& p) {
        if (!nj.contains("id"))
            nj["id"] = generate_id(p);
        TdtNode node = node_from_json(nj);
        if (p.tree.contains(node.id))
            throw Error("ValidationFailed", "node id '" + node.id + "' already exists");
        if (parent) {
            p.tree.at(*parent).children.push_back(node.id);
        } else if (p.tree.empty()) {
            p.tree.root = node.id;
        } else {
            throw Error("BadRequest", "a parent is required unless the tree is empty");
        }
        json out{{"node", node_to_json(node)}};
        p.tree.nodes.emplace(node.id, std::move(node));
        return out;
    });
}

json ProjectService::patch_node(const std::string& id, const json& body, std::optional<std::uint64_t> if_revision)
{
    if (!body.is_object())
        throw Error("BadRequest", "patch must be a JSON object");
    if (body.contains("revision")) {
        auto r = body.at("revision").get<std::uint64_t>();
        if (if_revision && *if_revision != r)
            throw Error("BadRequest", "conflicting revision conditions");
        if_revision = r;
    }
    return mutate(if_revision, [&](Project& p) {
        TdtNode& node = p.tree.at(id);
        json j = node_to_json(node);
        for (const auto& [key, value] : body.items()) {
            if (key == "revision")
                continue;
            if (key == "id" && value != json(id))
                throw Error("BadRequest", "node ids cannot be changed");
            j[key] = value;
        }
        node = node_from_json(j);
        return json{{"node", node_to_json(node)}};
    });
}

json ProjectService::delete_node(const std::string& id, std::optional<std::uint64_t> if_revision)
{
    return mutate(if_revision, [&](Project& p) {
        p.tree.at(id);
        std::vector<std::string> doomed{id};
        for (std::size_t i = 0; i < doomed.size(); ++i)
            for (const auto& c : p.tree.at(doomed[i]).children)
                doomed.push_back(c);
        if (auto parent = p.tree.parent_of(id)) {
            auto& kids = p.tree.at(*parent).children;
            kids.erase(std::remove(kids.begin(), kids.end(), id), kids.end());
            for (auto& a : p.tree.at(*parent).annotations)
                a.covers.erase(std::remove(a.covers.begin(), a.covers.end(), id), a.covers.end());
        }
        if (p.tree.root == id)
            p.tree.root.clear();
        for (const auto& d : doomed)
            p.tree.nodes.erase(d);
        return json{{"deleted", doomed}};
    });
}

json ProjectService::evaluate()
{
    return report_to_json(current_report());
}

EvaluationReport ProjectService::current_report()
{
    Project snap;
    std::uint64_t rev;
    {
        std::shared_lock lock(mutex_);
        if (last_report_ && last_report_->revision == revision_)
            return *last_report_;
        snap = project_;
        rev = revision_;
    }
    EvaluationOptions opts;
    opts.budget = config_.budget;
    opts.parallelism = config_.parallelism;
    opts.revision = rev;
    EvaluationReport report = evaluate_tree(snap, opts);

    std::unique_lock lock(mutex_);
    if (revision_ == rev) {
        // Statuses are derived data: storing them does not start a new revision.
        apply_statuses(project_, report);
        last_report_ = report;
        if (!config_.project.empty())
            save_project(project_, config_.project);
    }
    return report;
}

json ProjectService::evaluate_family(const std::string& id)
{
    Project snap;
    std::uint64_t rev;
    {
        std::shared_lock lock(mutex_);
        snap = project_;
        rev = revision_;
    }
    snap.tree.at(id);
    NodeResult r = evaluate_subtree(snap, id, config_.budget);
    return json{{"revision", rev}, {"node", node_result_json(r)}};
}

assist::Provider& ProjectService::provider()
{
    if (!provider_)
        throw assist::ProviderError(503, "no language-model provider is configured");
    return *provider_;
}

json ProjectService::assist_decompose(const json& body)
{
    std::string node_id = required_string(body, "node_id");
    assist::DecomposeOptions opts;
    opts.model = config_.provider.model;
    opts.layers = body.value("layers", 1);
    opts.temperature = body.value("temperature", assist::decompose_temperature);
    Project snap;
    std::uint64_t rev;
    {
        std::shared_lock lock(mutex_);
        snap = project_;
        rev = revision_;
    }
    std::vector<TdtNode> nodes;
    {
        std::lock_guard lock(provider_mutex_);
        nodes = assist::decompose(snap, node_id, provider(), opts);
    }
    json out = json::array();
    for (const auto& n : nodes)
        out.push_back(node_to_json(n));
    return json{{"revision", rev}, {"node_id", node_id}, {"nodes", out}};
}

json ProjectService::assist_translate(const json& body)
{
    std::string node_id = required_string(body, "node_id");
    Project snap;
    std::uint64_t rev;
    {
        std::shared_lock lock(mutex_);
        snap = project_;
        rev = revision_;
    }
    const TdtNode& node = snap.tree.at(node_id);
    std::string text = body.contains("text") && body.at("text").is_string() ? body.at("text").get<std::string>()
                                                                             : node.description;
    std::vector<assist::SubTranslation> subs;
    if (body.contains("subs") && body.at("subs").is_array()) {
        for (const auto& s : body.at("subs")) {
            if (s.is_string())
                subs.push_back({{}, s.get<std::string>()});
            else
                subs.push_back({s.value("text", std::string()), s.value("expr", std::string())});
        }
    } else {
        for (const auto& c : node.children) {
            const TdtNode& child = snap.tree.at(c);
            if (child.expr)
                subs.push_back({child.description, *child.expr});
        }
    }
    assist::TranslateOptions opts;
    opts.model = config_.provider.model;
    opts.temperature = body.value("temperature", assist::translate_temperature);
    opts.hint = node.ctype;
    assist::TranslationResult r;
    {
        std::lock_guard lock(provider_mutex_);
        r = assist::translate(text, subs, provider(), snap.variable_map, opts);
    }
    json renames = json::array();
    for (const auto& [from, to] : r.renames)
        renames.push_back(json{{"from", from}, {"to", to}});
    return json{{"revision", rev},
                {"node_id", node_id},
                {"raw", r.raw},
                {"normalized", r.normalized},
                {"ctype", r.ast ? json(to_string(classify(*r.ast))) : json(nullptr)},
                {"normalization_failed", r.normalization_failed},
                {"error", r.error},
                {"renames", renames},
                {"unmapped", r.unmapped}};
}

std::string ProjectService::report(ReportFormat format)
{
    return render_report(current_report(), format);
}

std::string ProjectService::export_dot()
{
    EvaluationReport r = current_report();
    return tdt::export_dot(snapshot(), &r);
}

int http_status_for(const std::exception& e)
{
    if (dynamic_cast<const json::exception*>(&e))
        return 400;
    const auto* err = dynamic_cast<const Error*>(&e);
    if (!err)
        return 500;
    const std::string& k = err->kind();
    if (k == "UnknownNode")
        return 404;
    if (k == "StaleRevision")
        return 409;
    if (k == "ProviderError" || k == "UnparseableResponse")
        return 502;
    if (k == "IoError" || k == "InvalidConfig" || k == "HashFailed")
        return 500;
    return 400;
}

void install_routes(httplib::Server& server, ProjectService& service)
{
    using httplib::Request;
    using httplib::Response;

    auto handle = [&service](auto&& fn) {
        return [&service, fn](const Request& req, Response& res) {
            try {
                fn(req, res);
            } catch (const std::exception& e) {
                json body{{"error", "InternalError"}, {"message", e.what()}, {"revision", service.revision()}};
                if (const auto* err = dynamic_cast<const Error*>(&e))
                    body["error"] = err->kind();
                if (const auto* v = dynamic_cast<const ValidationFailed*>(&e)) {
                    json list = json::array();
                    for (const auto& x : v->violations())
                        list.push_back(x.to_string());
                    body["violations"] = list;
                }
                if (const auto* p = dynamic_cast<const assist::ProviderError*>(&e)) {
                    body["provider_status"] = p->status();
                    body["body"] = p->body();
                }
                if (dynamic_cast<const json::exception*>(&e))
                    body["error"] = "BadRequest";
                send_json(res, body, http_status_for(e));
            }
        };
    };

    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Headers", "Content-Type, If-Match"},
                                {"Access-Control-Allow-Methods", "GET, PUT, POST, PATCH, DELETE, OPTIONS"}});
    server.Options(R"(.*)", [](const Request&, Response& res) { res.status = 204; });

    server.Get("/project", handle([&service](const Request&, Response& res) { send_json(res, service.get_project()); }));
    server.Put("/project", handle([&service](const Request& req, Response& res) {
                   send_json(res, service.put_project(body_of(req), if_match(req)));
               }));
    server.Post("/nodes", handle([&service](const Request& req, Response& res) {
                    send_json(res, service.add_node(body_of(req), if_match(req)), 201);
                }));
    server.Patch(R"(/nodes/([^/]+))", handle([&service](const Request& req, Response& res) {
                     send_json(res, service.patch_node(req.matches[1], body_of(req), if_match(req)));
                 }));
    server.Delete(R"(/nodes/([^/]+))", handle([&service](const Request& req, Response& res) {
                      send_json(res, service.delete_node(req.matches[1], if_match(req)));
                  }));
    server.Post("/evaluate", handle([&service](const Request&, Response& res) { send_json(res, service.evaluate()); }));
    server.Post(R"(/evaluate/([^/]+))", handle([&service](const Request& req, Response& res) {
                    send_json(res, service.evaluate_family(req.matches[1]));
                }));
    server.Post("/assist/decompose", handle([&service](const Request& req, Response& res) {
                    send_json(res, service.assist_decompose(body_of(req)));
                }));
    server.Post("/assist/translate", handle([&service](const Request& req, Response& res) {
                    send_json(res, service.assist_translate(body_of(req)));
                }));
    server.Get("/report", handle([&service](const Request& req, Response& res) {
                   auto format = report_format_from_string(
                       req.has_param("format") ? req.get_param_value("format") : std::string("json"));
                   res.set_content(service.report(format),
                                   format == ReportFormat::Json ? "application/json" : "text/markdown");
               }));
    server.Get("/export/dot", handle([&service](const Request&, Response& res) {
                   res.set_content(service.export_dot(), "text/vnd.graphviz");
               }));
}

void serve(const ServiceConfig& config)
{
    Project project;
    if (!config.project.empty() && std::filesystem::exists(config.project))
        project = load_project(config.project);
    std::unique_ptr<assist::Provider> provider;
    try {
        provider = assist::make_provider(config.provider);
    } catch (const Error& e) {
        std::cerr << "warning: assistance disabled: " << e.what() << "\n";
    }
    ProjectService service(std::move(project), config, std::move(provider));
    httplib::Server server;
    install_routes(server, service);
    std::cerr << "listening on " << config.host << ":" << config.port << "\n";
    if (!server.listen(config.host, config.port))
        throw Error("IoError", "cannot listen on " + config.host + ":" + std::to_string(config.port));
}

} // namespace tdt
