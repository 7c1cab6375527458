#include "tdt/model.hpp"

#include "tdt/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>

namespace tdt {

namespace {

template <typename E, std::size_t N>
E enum_from_string(std::string_view text, const std::array<E, N>& values, std::string_view what)
{
    for (E v : values)
        if (to_string(v) == text)
            return v;
    throw Error("InvalidEnum", "unknown " + std::string(what) + " '" + std::string(text) + "'");
}

} // namespace

std::string_view to_string(NodeKind k)
{
    return k == NodeKind::Goal ? "Goal" : "Solution";
}

std::string_view to_string(AnnotationRole r)
{
    switch (r) {
    case AnnotationRole::Context: return "Context";
    case AnnotationRole::Assumption: return "Assumption";
    case AnnotationRole::Justification: return "Justification";
    case AnnotationRole::Strategy: return "Strategy";
    }
    return "?";
}

std::string_view to_string(CType c)
{
    switch (c) {
    case CType::Logical: return "Logical";
    case CType::Arithmetic: return "Arithmetic";
    case CType::AbstractSet: return "AbstractSet";
    case CType::ConcreteSet: return "ConcreteSet";
    case CType::None: return "None";
    }
    return "?";
}

std::string_view to_string(Relation r)
{
    return r == Relation::And ? "And" : "Or";
}

std::string_view to_string(Status s)
{
    switch (s) {
    case Status::Sound: return "Sound";
    case Status::Unsound: return "Unsound";
    case Status::Unknown: return "Unknown";
    case Status::NotEvaluated: return "NotEvaluated";
    case Status::IllFormed: return "IllFormed";
    }
    return "?";
}

NodeKind node_kind_from_string(std::string_view s)
{
    return enum_from_string(s, std::array{NodeKind::Goal, NodeKind::Solution}, "node kind");
}

AnnotationRole annotation_role_from_string(std::string_view s)
{
    return enum_from_string(s,
                            std::array{AnnotationRole::Context, AnnotationRole::Assumption,
                                       AnnotationRole::Justification, AnnotationRole::Strategy},
                            "annotation role");
}

CType ctype_from_string(std::string_view s)
{
    return enum_from_string(s,
                            std::array{CType::Logical, CType::Arithmetic, CType::AbstractSet,
                                       CType::ConcreteSet, CType::None},
                            "ctype");
}

Relation relation_from_string(std::string_view s)
{
    return enum_from_string(s, std::array{Relation::And, Relation::Or}, "relation");
}

Status status_from_string(std::string_view s)
{
    return enum_from_string(s,
                            std::array{Status::Sound, Status::Unsound, Status::Unknown,
                                       Status::NotEvaluated, Status::IllFormed},
                            "status");
}

const TdtNode& TdtTree::at(const std::string& id) const
{
    auto it = nodes.find(id);
    if (it == nodes.end())
        throw Error("UnknownNode", "no node with id '" + id + "'");
    return it->second;
}

TdtNode& TdtTree::at(const std::string& id)
{
    auto it = nodes.find(id);
    if (it == nodes.end())
        throw Error("UnknownNode", "no node with id '" + id + "'");
    return it->second;
}

std::optional<std::string> TdtTree::parent_of(const std::string& id) const
{
    for (const auto& [pid, node] : nodes)
        if (std::find(node.children.begin(), node.children.end(), id) != node.children.end())
            return pid;
    return std::nullopt;
}

std::vector<std::string> TdtTree::preorder() const
{
    std::vector<std::string> order;
    if (root.empty() || !contains(root))
        return order;
    std::set<std::string> seen;
    std::vector<std::string> stack{root};
    while (!stack.empty()) {
        std::string id = stack.back();
        stack.pop_back();
        if (!seen.insert(id).second)
            continue;
        order.push_back(id);
        const auto& kids = nodes.at(id).children;
        for (auto it = kids.rbegin(); it != kids.rend(); ++it)
            if (contains(*it) && !seen.count(*it))
                stack.push_back(*it);
    }
    return order;
}

std::size_t TdtTree::depth() const
{
    if (root.empty() || !contains(root))
        return 0;
    std::set<std::string> on_path;
    std::function<std::size_t(const std::string&)> walk = [&](const std::string& id) -> std::size_t {
        if (!contains(id) || !on_path.insert(id).second)
            return 0;
        std::size_t best = 0;
        for (const auto& c : nodes.at(id).children)
            best = std::max(best, walk(c));
        on_path.erase(id);
        return best + 1;
    };
    return walk(root);
}

std::string_view to_string(ViolationKind k)
{
    switch (k) {
    case ViolationKind::BadVersion: return "BadVersion";
    case ViolationKind::MissingRoot: return "MissingRoot";
    case ViolationKind::IdMismatch: return "IdMismatch";
    case ViolationKind::DanglingChild: return "DanglingChild";
    case ViolationKind::NotATree: return "NotATree";
    case ViolationKind::Cycle: return "Cycle";
    case ViolationKind::MultipleRoots: return "MultipleRoots";
    case ViolationKind::SolutionHasChildren: return "SolutionHasChildren";
    case ViolationKind::ExprCTypeMismatch: return "ExprCTypeMismatch";
    case ViolationKind::InvalidAnnotation: return "InvalidAnnotation";
    case ViolationKind::InvalidVariableMap: return "InvalidVariableMap";
    case ViolationKind::StrategyContextHoisted: return "StrategyContextHoisted";
    }
    return "?";
}

std::string Violation::to_string() const
{
    std::string out(tdt::to_string(kind));
    switch (kind) {
    case ViolationKind::DanglingChild:
        out += "(" + detail + ")";
        break;
    case ViolationKind::NotATree:
        break;
    default:
        if (!node_id.empty())
            out += "(" + node_id + ")";
        break;
    }
    return out;
}

bool is_valid(const std::vector<Violation>& violations)
{
    return std::none_of(violations.begin(), violations.end(),
                        [](const Violation& v) { return v.severity == Severity::Error; });
}

bool is_identifier(std::string_view name)
{
    if (name.empty())
        return false;
    auto head = static_cast<unsigned char>(name.front());
    if (!std::isalpha(head) && head != '_')
        return false;
    return std::all_of(name.begin() + 1, name.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

std::vector<Violation> validate(const Project& p)
{
    std::vector<Violation> out;
    auto report = [&](ViolationKind kind, std::string id, std::string detail = {},
                      Severity sev = Severity::Error) {
        out.push_back(Violation{kind, std::move(id), std::move(detail), sev});
    };

    if (p.version != 1)
        report(ViolationKind::BadVersion, {}, std::to_string(p.version));

    for (const auto& [from, to] : p.variable_map) {
        if (!is_identifier(from) || !is_identifier(to))
            report(ViolationKind::InvalidVariableMap, {}, from + " -> " + to);
        else if (from != to) {
            auto chained = p.variable_map.find(to);
            if (chained != p.variable_map.end() && chained->second != to)
                report(ViolationKind::InvalidVariableMap, {}, from + " -> " + to + " -> " + chained->second);
        }
    }

    const auto& tree = p.tree;
    if (tree.nodes.empty()) {
        if (!tree.root.empty())
            report(ViolationKind::MissingRoot, tree.root);
        return out;
    }
    if (tree.root.empty() || !tree.contains(tree.root)) {
        report(ViolationKind::MissingRoot, tree.root);
        return out;
    }

    std::map<std::string, int> parent_count;
    for (const auto& [id, node] : tree.nodes) {
        if (id != node.id)
            report(ViolationKind::IdMismatch, id, node.id);
        if (node.kind == NodeKind::Solution && !node.children.empty())
            report(ViolationKind::SolutionHasChildren, id);
        if ((node.ctype == CType::None) != !node.expr.has_value())
            report(ViolationKind::ExprCTypeMismatch, id);

        std::set<std::string> seen_children;
        for (const auto& c : node.children) {
            if (!tree.contains(c)) {
                report(ViolationKind::DanglingChild, id, c);
                continue;
            }
            if (!seen_children.insert(c).second) {
                report(ViolationKind::NotATree, c, "listed twice under " + id);
                continue;
            }
            ++parent_count[c];
        }

        for (std::size_t i = 0; i < node.annotations.size(); ++i) {
            const auto& a = node.annotations[i];
            for (const auto& c : a.covers)
                if (a.role != AnnotationRole::Strategy || !seen_children.count(c))
                    report(ViolationKind::InvalidAnnotation, id, "covers " + c);
            if (a.anchor) {
                if (a.role == AnnotationRole::Strategy || *a.anchor >= node.annotations.size() ||
                    node.annotations[*a.anchor].role != AnnotationRole::Strategy)
                    report(ViolationKind::InvalidAnnotation, id, "bad anchor");
                else
                    report(ViolationKind::StrategyContextHoisted, id, a.text, Severity::Warning);
            }
        }
    }

    for (const auto& [id, count] : parent_count)
        if (count > 1)
            report(ViolationKind::NotATree, id, "multiple parents");
    if (parent_count.count(tree.root))
        report(ViolationKind::Cycle, tree.root, "root has a parent");

    // Reachability with cycle detection (colour DFS).
    std::map<std::string, int> colour;
    bool cyclic = false;
    std::function<void(const std::string&)> visit = [&](const std::string& id) {
        colour[id] = 1;
        for (const auto& c : tree.nodes.at(id).children) {
            if (!tree.contains(c))
                continue;
            if (colour[c] == 1)
                cyclic = true;
            else if (colour[c] == 0)
                visit(c);
        }
        colour[id] = 2;
    };
    visit(tree.root);
    if (cyclic && !parent_count.count(tree.root))
        report(ViolationKind::Cycle, tree.root);
    for (const auto& [id, node] : tree.nodes) {
        if (colour[id] != 0)
            continue;
        if (parent_count.count(id))
            report(ViolationKind::Cycle, id, "unreachable from root");
        else
            report(ViolationKind::MultipleRoots, id);
    }
    return out;
}

std::string canonical_form(const Project& p)
{
    std::ostringstream os;
    os << "v" << p.version << "\n";
    for (const auto& [k, v] : p.variable_map)
        os << "map " << k << "=" << v << "\n";
    const auto& tree = p.tree;
    std::set<std::string> seen;
    std::function<void(const std::string&, int)> emit = [&](const std::string& id, int depth) {
        if (!tree.contains(id) || !seen.insert(id).second)
            return;
        const auto& n = tree.at(id);
        std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
        os << pad << to_string(n.kind) << " " << std::quoted(n.description) << " " << to_string(n.ctype)
           << " " << std::quoted(n.expr.value_or("")) << " " << to_string(n.relation);
        if (n.layout)
            os << " @" << n.layout->x << "," << n.layout->y;
        os << "\n";
        for (const auto& a : n.annotations) {
            os << pad << "  ~" << to_string(a.role) << " " << std::quoted(a.text);
            for (const auto& c : a.covers) {
                auto pos = std::find(n.children.begin(), n.children.end(), c) - n.children.begin();
                os << " #" << pos;
            }
            if (a.anchor)
                os << " ^" << *a.anchor;
            os << "\n";
        }
        for (const auto& c : n.children)
            emit(c, depth + 1);
    };
    emit(tree.root, 0);
    return os.str();
}

} // namespace tdt
