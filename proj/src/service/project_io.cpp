#include "tdt/project_io.hpp"

#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace tdt {

namespace {

using nlohmann::json;

const std::set<std::string> project_fields{"version", "variable_map", "nodes", "root", "metadata"};
const std::set<std::string> node_fields{"id",       "kind",     "description", "annotations", "ctype",
                                        "expr",     "relation", "children",    "layout",      "status"};

std::string summarize(const std::vector<Violation>& vs)
{
    std::string out;
    for (const auto& v : vs)
        if (v.severity == Severity::Error)
            out += (out.empty() ? "" : ", ") + v.to_string();
    return out;
}

template <typename T>
T get(const json& j, const char* key, const std::string& where)
{
    if (!j.contains(key))
        throw Error("ValidationFailed", where + ": missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw Error("ValidationFailed", where + ": field '" + key + "' has the wrong type");
    }
}

json annotation_to_json(const Annotation& a)
{
    json j{{"role", to_string(a.role)}, {"text", a.text}};
    if (!a.covers.empty())
        j["covers"] = a.covers;
    if (a.anchor)
        j["anchor"] = *a.anchor;
    return j;
}

Annotation annotation_from_json(const json& j, const std::string& where)
{
    if (!j.is_object())
        throw Error("ValidationFailed", where + ": annotation must be an object");
    Annotation a;
    a.role = annotation_role_from_string(get<std::string>(j, "role", where));
    a.text = get<std::string>(j, "text", where);
    if (j.contains("covers"))
        a.covers = get<std::vector<std::string>>(j, "covers", where);
    if (j.contains("anchor") && !j.at("anchor").is_null())
        a.anchor = get<std::size_t>(j, "anchor", where);
    return a;
}

} // namespace

json node_to_json(const TdtNode& n)
{
    json j = n.extra.is_object() ? n.extra : json::object();
    j["id"] = n.id;
    j["kind"] = to_string(n.kind);
    j["description"] = n.description;
    json anns = json::array();
    for (const auto& a : n.annotations)
        anns.push_back(annotation_to_json(a));
    j["annotations"] = anns;
    j["ctype"] = to_string(n.ctype);
    j["expr"] = n.expr ? json(*n.expr) : json(nullptr);
    j["relation"] = to_string(n.relation);
    j["children"] = n.children;
    j["layout"] = n.layout ? json{{"x", n.layout->x}, {"y", n.layout->y}} : json(nullptr);
    j["status"] = to_string(n.status);
    return j;
}

TdtNode node_from_json(const json& j)
{
    if (!j.is_object())
        throw Error("ValidationFailed", "node entries must be objects");
    TdtNode n;
    n.id = get<std::string>(j, "id", "node");
    std::string where = "node '" + n.id + "'";
    try {
        n.kind = node_kind_from_string(get<std::string>(j, "kind", where));
        n.description = j.value("description", std::string());
        if (j.contains("annotations"))
            for (const auto& a : j.at("annotations"))
                n.annotations.push_back(annotation_from_json(a, where));
        n.ctype = j.contains("ctype") ? ctype_from_string(get<std::string>(j, "ctype", where)) : CType::None;
        if (j.contains("expr") && !j.at("expr").is_null())
            n.expr = get<std::string>(j, "expr", where);
        n.relation = j.contains("relation") ? relation_from_string(get<std::string>(j, "relation", where))
                                            : Relation::And;
        if (j.contains("children"))
            n.children = get<std::vector<std::string>>(j, "children", where);
        if (j.contains("layout") && !j.at("layout").is_null()) {
            const json& l = j.at("layout");
            n.layout = Layout{get<double>(l, "x", where), get<double>(l, "y", where)};
        }
        n.status = j.contains("status") ? status_from_string(get<std::string>(j, "status", where))
                                        : Status::NotEvaluated;
    } catch (const Error& e) {
        if (e.kind() == "ValidationFailed")
            throw;
        throw Error("ValidationFailed", where + ": " + e.what());
    }
    for (const auto& [key, value] : j.items())
        if (!node_fields.count(key))
            n.extra[key] = value;
    return n;
}

ValidationFailed::ValidationFailed(std::vector<Violation> violations)
    : Error("ValidationFailed", "project is invalid: " + summarize(violations)), violations_(std::move(violations))
{
}

json project_to_json(const Project& p)
{
    json j = p.extra.is_object() ? p.extra : json::object();
    j["version"] = p.version;
    j["variable_map"] = p.variable_map;
    json nodes = json::array();
    for (const auto& [id, n] : p.tree.nodes)
        nodes.push_back(node_to_json(n));
    j["nodes"] = nodes;
    j["root"] = p.tree.root.empty() ? json(nullptr) : json(p.tree.root);
    if (!p.metadata.empty())
        j["metadata"] = p.metadata;
    return j;
}

Project project_from_json(const json& j)
{
    if (!j.is_object())
        throw Error("ValidationFailed", "project file must be a JSON object");
    if (!j.contains("version") || !j.at("version").is_number_integer())
        throw Error("ValidationFailed", "project file has no integer 'version'");
    Project p;
    p.version = j.at("version").get<int>();
    if (p.version != 1)
        throw Error("SchemaVersionMismatch",
                    "unsupported project version " + std::to_string(p.version) + " (expected 1)");
    if (j.contains("variable_map"))
        p.variable_map = get<std::map<std::string, std::string>>(j, "variable_map", "project");
    if (j.contains("nodes")) {
        if (!j.at("nodes").is_array())
            throw Error("ValidationFailed", "'nodes' must be an array");
        for (const auto& nj : j.at("nodes")) {
            TdtNode n = node_from_json(nj);
            std::string id = n.id;
            if (!p.tree.nodes.emplace(id, std::move(n)).second)
                throw Error("ValidationFailed", "duplicate node id '" + id + "'");
        }
    }
    if (j.contains("root") && !j.at("root").is_null())
        p.tree.root = get<std::string>(j, "root", "project");
    if (j.contains("metadata"))
        p.metadata = j.at("metadata");
    for (const auto& [key, value] : j.items())
        if (!project_fields.count(key))
            p.extra[key] = value;
    return p;
}

Project parse_project(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error("ValidationFailed", std::string("project file is not valid JSON: ") + e.what());
    }
    Project p = project_from_json(j);
    auto violations = validate(p);
    if (!is_valid(violations))
        throw ValidationFailed(std::move(violations));
    return p;
}

std::string serialize_project(const Project& p)
{
    return project_to_json(p).dump(2) + "\n";
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("IoError", "cannot read " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& text)
{
    std::random_device rd;
    auto tmp = path;
    tmp += ".tmp" + std::to_string(rd());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error("IoError", "cannot write " + tmp.string());
        out << text;
        out.flush();
        if (!out)
            throw Error("IoError", "short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error("IoError", "cannot replace " + path.string() + ": " + ec.message());
    }
}

Project load_project(const std::filesystem::path& path)
{
    return parse_project(read_file(path));
}

void save_project(const Project& p, const std::filesystem::path& path)
{
    write_file_atomic(path, serialize_project(p));
}

} // namespace tdt
