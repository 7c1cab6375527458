#include "tdt/evaluator.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

namespace tdt {

namespace {

std::string now_utc()
{
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

std::vector<std::string> missing_exprs(const TdtTree& tree, const TdtNode& node)
{
    std::vector<std::string> missing;
    if (!node.expr)
        missing.push_back(node.id);
    for (const auto& c : node.children)
        if (!tree.at(c).expr)
            missing.push_back(c);
    return missing;
}

std::string join(const std::vector<std::string>& xs, const std::string& sep)
{
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i)
        out += (i ? sep : "") + xs[i];
    return out;
}

std::string explain(const NodeResult& r)
{
    switch (r.status) {
    case Status::Sound:
        if (r.evidence_assumed)
            return "evidence assumed";
        return r.vacuous_premises ? "proved (premises are contradictory)" : "proved: the children entail the claim";
    case Status::Unsound: return "counterexample: the children hold while the claim fails";
    case Status::Unknown: {
        std::string reason;
        if (r.verdict && r.verdict->diagnostics.contains("unknown_reason"))
            reason = r.verdict->diagnostics["unknown_reason"].get<std::string>();
        return "inconclusive (budget)" + (reason.empty() ? std::string() : ": " + reason);
    }
    case Status::NotEvaluated:
    case Status::IllFormed: break;
    }
    return r.explanation;
}

} // namespace

const NodeResult& EvaluationReport::at(const std::string& id) const
{
    auto it = nodes.find(id);
    if (it == nodes.end())
        throw Error("UnknownNode", "no result for node '" + id + "'");
    return it->second;
}

std::size_t EvaluationReport::checked_families() const
{
    std::size_t n = 0;
    for (const auto& [id, r] : nodes)
        if (!r.evidence_assumed && r.status != Status::NotEvaluated)
            ++n;
    return n;
}

Obligation build_obligation(const Project& p, const std::string& id)
{
    const TdtTree& tree = p.tree;
    const TdtNode& node = tree.at(id);
    auto missing = missing_exprs(tree, node);
    if (!missing.empty())
        throw Error("MissingExpr", "no expression on: " + join(missing, ", "));
    Obligation ob;
    ob.ctype = node.ctype;
    ob.relation = node.relation;
    ob.conclusion = parse_constraint(*node.expr, node.ctype);
    for (const auto& c : node.children) {
        const TdtNode& child = tree.at(c);
        ob.premises.push_back(parse_constraint(*child.expr, child.ctype));
    }
    return ob;
}

std::string describe_obligation(const Project& p, const std::string& id)
{
    const TdtTree& tree = p.tree;
    const TdtNode& node = tree.at(id);
    std::vector<std::string> parts;
    for (const auto& c : node.children) {
        const auto& child = tree.at(c);
        parts.push_back("(" + child.expr.value_or("?") + ")");
    }
    std::string glue = node.relation == Relation::And ? " & " : " | ";
    return join(parts, glue) + " => (" + node.expr.value_or("?") + ")";
}

NodeResult evaluate_subtree(const Project& p, const std::string& id, const SolverBudget& budget)
{
    const TdtTree& tree = p.tree;
    const TdtNode& node = tree.at(id);
    NodeResult r;
    r.id = id;

    if (node.children.empty()) {
        if (node.expr) {
            try {
                parse_constraint(*node.expr, node.ctype);
                r.status = Status::Sound;
                r.evidence_assumed = true;
            } catch (const Error& e) {
                r.status = Status::IllFormed;
                r.explanation = e.kind() + ": " + e.what();
            }
        } else {
            r.status = Status::NotEvaluated;
            r.explanation = "no expression";
        }
        r.explanation = r.status == Status::Sound ? explain(r) : r.explanation;
        return r;
    }

    auto missing = missing_exprs(tree, node);
    if (!missing.empty()) {
        r.status = Status::NotEvaluated;
        r.explanation = "no expression on: " + join(missing, ", ");
        return r;
    }
    r.obligation = describe_obligation(p, id);
    try {
        Obligation ob = build_obligation(p, id);
        Verdict v = discharge(ob, budget);
        r.vacuous_premises = v.diagnostics.value("vacuous_premises", false);
        switch (v.outcome) {
        case Outcome::Unsat: r.status = Status::Sound; break;
        case Outcome::Sat: r.status = Status::Unsound; break;
        case Outcome::Unknown: r.status = Status::Unknown; break;
        }
        r.verdict = std::move(v);
        r.explanation = explain(r);
    } catch (const Error& e) {
        r.status = Status::IllFormed;
        r.verdict.reset();
        r.explanation = e.kind() + ": " + e.what();
    }
    return r;
}

std::vector<std::string> tainted_set(const TdtTree& tree, const std::map<std::string, NodeResult>& nodes)
{
    std::map<std::string, std::string> parent;
    for (const auto& [id, node] : tree.nodes)
        for (const auto& c : node.children)
            parent[c] = id;
    std::set<std::string> out;
    for (const auto& [id, r] : nodes) {
        if (r.status == Status::Sound || r.status == Status::NotEvaluated)
            continue;
        std::set<std::string> seen{id};
        for (auto it = parent.find(id); it != parent.end() && seen.insert(it->second).second;
             it = parent.find(it->second))
            out.insert(it->second);
    }
    return {out.begin(), out.end()};
}

EvaluationReport evaluate_tree(const Project& p, const EvaluationOptions& opts)
{
    auto started = std::chrono::steady_clock::now();
    auto violations = validate(p);
    if (!is_valid(violations)) {
        std::string detail;
        for (const auto& v : violations)
            if (v.severity == Severity::Error)
                detail += (detail.empty() ? "" : ", ") + v.to_string();
        throw Error("ValidationFailed", detail);
    }

    std::vector<std::string> ids = p.tree.preorder();
    std::vector<NodeResult> results(ids.size());
    unsigned workers = opts.parallelism ? opts.parallelism : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, ids.size())));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < ids.size(); i = next++)
            results[i] = evaluate_subtree(p, ids[i], opts.budget);
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(work);
        for (auto& t : pool)
            t.join();
    }

    EvaluationReport r;
    r.revision = opts.revision;
    r.timestamp = now_utc();
    r.budget = opts.budget;
    for (auto s : {Status::Sound, Status::Unsound, Status::Unknown, Status::NotEvaluated, Status::IllFormed})
        r.counts[std::string(to_string(s))] = 0;
    for (auto& res : results) {
        ++r.counts[std::string(to_string(res.status))];
        if (res.status != Status::Sound)
            r.risks.push_back(Risk{res.id, res.status, res.obligation, res.verdict, res.explanation});
        r.nodes.emplace(res.id, std::move(res));
    }
    r.tainted = tainted_set(p.tree, r.nodes);
    std::size_t assumed = 0;
    for (const auto& [id, n] : r.nodes)
        assumed += n.evidence_assumed ? 1 : 0;
    r.diagnostics["evidence_assumed"] = assumed;
    r.diagnostics["checked_families"] = r.checked_families();
    r.diagnostics["elapsed_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started).count();
    return r;
}

void apply_statuses(Project& p, const EvaluationReport& r)
{
    for (auto& [id, node] : p.tree.nodes) {
        auto it = r.nodes.find(id);
        node.status = it == r.nodes.end() ? Status::NotEvaluated : it->second.status;
    }
}

} // namespace tdt
