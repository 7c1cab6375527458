#include "tdt/report.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace tdt {

namespace {

using nlohmann::json;

std::string_view kind_name(ModelValue::Kind k)
{
    switch (k) {
    case ModelValue::Kind::Number: return "number";
    case ModelValue::Kind::Term: return "term";
    case ModelValue::Kind::Set: return "set";
    }
    return "number";
}

template <typename T>
T field(const json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key))
        throw Error("ValidationFailed", std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw Error("ValidationFailed", std::string("field '") + key + "': " + e.what());
    }
}

json budget_to_json(const SolverBudget& b)
{
    return json{{"max_steps", b.max_steps}, {"max_boxes", b.max_boxes}, {"max_universe", b.max_universe},
                {"wall_ms", b.wall_ms}};
}

SolverBudget budget_from_json(const json& j)
{
    SolverBudget b;
    b.max_steps = field<std::uint64_t>(j, "max_steps");
    b.max_boxes = field<std::uint64_t>(j, "max_boxes");
    b.max_universe = field<unsigned>(j, "max_universe");
    b.wall_ms = field<std::uint64_t>(j, "wall_ms");
    return b;
}

json optional_verdict(const std::optional<Verdict>& v)
{
    return v ? verdict_to_json(*v) : json(nullptr);
}

std::optional<Verdict> optional_verdict(const json& j, const char* key)
{
    if (!j.contains(key) || j.at(key).is_null())
        return std::nullopt;
    return verdict_from_json(j.at(key));
}

std::string escape_dot(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        default: out += c;
        }
    }
    return out;
}

std::string risk_heading(const Risk& r)
{
    if (r.status == Status::Unknown)
        return "inconclusive (budget)";
    return std::string(to_string(r.status));
}

} // namespace

ReportFormat report_format_from_string(std::string_view s)
{
    if (s == "json")
        return ReportFormat::Json;
    if (s == "markdown" || s == "md")
        return ReportFormat::Markdown;
    throw Error("InvalidEnum", "unknown report format '" + std::string(s) + "'");
}

json verdict_to_json(const Verdict& v)
{
    json model = json::array();
    for (const auto& b : v.model) {
        json value;
        switch (b.value.kind) {
        case ModelValue::Kind::Number: value = to_display_string(b.value.number); break;
        case ModelValue::Kind::Term: value = b.value.term; break;
        case ModelValue::Kind::Set: value = b.value.set; break;
        }
        model.push_back(json{{"name", b.name}, {"kind", kind_name(b.value.kind)}, {"value", value}});
    }
    return json{{"outcome", to_string(v.outcome)}, {"model", model}, {"diagnostics", v.diagnostics}};
}

Verdict verdict_from_json(const json& j)
{
    Verdict v;
    v.outcome = outcome_from_string(field<std::string>(j, "outcome"));
    for (const auto& b : field<json>(j, "model")) {
        std::string kind = field<std::string>(b, "kind");
        std::string name = field<std::string>(b, "name");
        ModelValue value;
        if (kind == "number") {
            auto r = parse_rational(field<std::string>(b, "value"));
            if (!r)
                throw Error("ValidationFailed", "bad number for '" + name + "'");
            value = ModelValue::of_number(*r);
        } else if (kind == "term") {
            value = ModelValue::of_term(field<std::string>(b, "value"));
        } else if (kind == "set") {
            value = ModelValue::of_set(field<std::vector<std::uint64_t>>(b, "value"));
        } else {
            throw Error("ValidationFailed", "unknown model value kind '" + kind + "'");
        }
        v.model.push_back(Binding{name, value});
    }
    v.diagnostics = field<json>(j, "diagnostics");
    return v;
}

json report_to_json(const EvaluationReport& r)
{
    json nodes = json::object();
    for (const auto& [id, n] : r.nodes)
        nodes[id] = json{{"status", to_string(n.status)},
                         {"evidence_assumed", n.evidence_assumed},
                         {"vacuous_premises", n.vacuous_premises},
                         {"obligation", n.obligation},
                         {"verdict", optional_verdict(n.verdict)},
                         {"explanation", n.explanation}};
    json risks = json::array();
    for (const auto& k : r.risks)
        risks.push_back(json{{"node_id", k.node_id},
                             {"status", to_string(k.status)},
                             {"obligation", k.obligation},
                             {"verdict", optional_verdict(k.verdict)},
                             {"explanation", k.explanation}});
    return json{{"revision", r.revision}, {"timestamp", r.timestamp}, {"budget", budget_to_json(r.budget)},
                {"nodes", nodes},         {"counts", r.counts},       {"risks", risks},
                {"tainted", r.tainted},   {"diagnostics", r.diagnostics}};
}

EvaluationReport report_from_json(const json& j)
{
    EvaluationReport r;
    r.revision = field<std::uint64_t>(j, "revision");
    r.timestamp = field<std::string>(j, "timestamp");
    r.budget = budget_from_json(field<json>(j, "budget"));
    json node_map = field<json>(j, "nodes");
    for (const auto& [id, n] : node_map.items()) {
        NodeResult res;
        res.id = id;
        res.status = status_from_string(field<std::string>(n, "status"));
        res.evidence_assumed = field<bool>(n, "evidence_assumed");
        res.vacuous_premises = field<bool>(n, "vacuous_premises");
        res.obligation = field<std::string>(n, "obligation");
        res.verdict = optional_verdict(n, "verdict");
        res.explanation = field<std::string>(n, "explanation");
        r.nodes.emplace(id, std::move(res));
    }
    r.counts = field<std::map<std::string, std::size_t>>(j, "counts");
    for (const auto& k : field<json>(j, "risks")) {
        Risk risk;
        risk.node_id = field<std::string>(k, "node_id");
        risk.status = status_from_string(field<std::string>(k, "status"));
        risk.obligation = field<std::string>(k, "obligation");
        risk.verdict = optional_verdict(k, "verdict");
        risk.explanation = field<std::string>(k, "explanation");
        r.risks.push_back(std::move(risk));
    }
    r.tainted = field<std::vector<std::string>>(j, "tainted");
    r.diagnostics = field<json>(j, "diagnostics");
    return r;
}

std::string render_report(const EvaluationReport& r, ReportFormat format)
{
    if (format == ReportFormat::Json)
        return report_to_json(r).dump(2) + "\n";

    std::ostringstream os;
    os << "# TDT evaluation report\n\n";
    os << "- Revision: " << r.revision << "\n";
    os << "- Generated: " << r.timestamp << "\n";
    os << "- Budget: max_steps=" << r.budget.max_steps << ", max_boxes=" << r.budget.max_boxes
       << ", max_universe=" << r.budget.max_universe << ", wall_ms=" << r.budget.wall_ms << "\n\n";

    os << "## Summary\n\n| Status | Count |\n|---|---|\n";
    for (auto s : {Status::Sound, Status::Unsound, Status::Unknown, Status::NotEvaluated, Status::IllFormed}) {
        auto it = r.counts.find(std::string(to_string(s)));
        os << "| " << to_string(s) << " | " << (it == r.counts.end() ? 0 : it->second) << " |\n";
    }

    os << "\n## Risks\n\n";
    if (r.risks.empty())
        os << "No risks found\n";
    for (const auto& k : r.risks) {
        os << "### Node `" << k.node_id << "`: " << risk_heading(k) << "\n\n";
        if (!k.obligation.empty())
            os << "- Obligation: `" << k.obligation << "`\n";
        os << "- Explanation: " << k.explanation << "\n";
        if (k.verdict && k.verdict->outcome == Outcome::Sat && !k.verdict->model.empty()) {
            os << "\nCounterexample:\n\n```\n";
            for (const auto& b : k.verdict->model)
                os << b.name << " = " << b.value.display() << "\n";
            os << "```\n";
        }
        os << "\n";
    }

    os << (r.risks.empty() ? "\n" : "") << "## Tainted ancestors\n\n";
    if (r.tainted.empty())
        os << "None\n";
    for (const auto& t : r.tainted)
        os << "- `" << t << "`\n";

    std::vector<std::string> assumed;
    for (const auto& [id, n] : r.nodes)
        if (n.evidence_assumed)
            assumed.push_back(id);
    os << "\n## Evidence assumed\n\n";
    if (assumed.empty())
        os << "None\n";
    for (const auto& a : assumed)
        os << "- `" << a << "`\n";
    return os.str();
}

std::string_view to_string(NodeColour c)
{
    switch (c) {
    case NodeColour::Blue: return "blue";
    case NodeColour::Green: return "green";
    case NodeColour::Yellow: return "yellow";
    }
    return "blue";
}

NodeColour colour_of(const TdtNode& node, const EvaluationReport* r)
{
    if (r) {
        auto it = r->nodes.find(node.id);
        if (it != r->nodes.end() && it->second.status == Status::Unsound)
            return NodeColour::Yellow;
        if (std::binary_search(r->tainted.begin(), r->tainted.end(), node.id))
            return NodeColour::Yellow;
    }
    return node.expr ? NodeColour::Green : NodeColour::Blue;
}

std::string export_dot(const Project& p, const EvaluationReport* r)
{
    std::ostringstream os;
    os << "digraph tdt {\n";
    os << "  node [style=filled];\n";
    for (const auto& [id, node] : p.tree.nodes) {
        std::string label = id + ": " + node.description;
        if (node.expr)
            label += "\n" + *node.expr;
        os << "  \"" << escape_dot(id) << "\" [label=\"" << escape_dot(label) << "\", fillcolor=\""
           << to_string(colour_of(node, r)) << "\"];\n";
    }
    for (const auto& [id, node] : p.tree.nodes)
        for (const auto& c : node.children)
            os << "  \"" << escape_dot(id) << "\" -> \"" << escape_dot(c) << "\" [label=\""
               << to_string(node.relation) << "\"];\n";
    os << "}\n";
    return os.str();
}

} // namespace tdt
