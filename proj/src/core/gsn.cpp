#include "tdt/gsn.hpp"

#include <algorithm>
#include <functional>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace tdt {

namespace {

using Kind = ConversionError::Kind;

bool is_auxiliary(GsnKind k)
{
    return k == GsnKind::Context || k == GsnKind::Assumption || k == GsnKind::Justification;
}

AnnotationRole role_of(GsnKind k)
{
    switch (k) {
    case GsnKind::Context: return AnnotationRole::Context;
    case GsnKind::Assumption: return AnnotationRole::Assumption;
    case GsnKind::Justification: return AnnotationRole::Justification;
    default: return AnnotationRole::Strategy;
    }
}

GsnKind kind_of(AnnotationRole r)
{
    switch (r) {
    case AnnotationRole::Context: return GsnKind::Context;
    case AnnotationRole::Assumption: return GsnKind::Assumption;
    case AnnotationRole::Justification: return GsnKind::Justification;
    case AnnotationRole::Strategy: return GsnKind::Strategy;
    }
    return GsnKind::Context;
}

char id_letter(GsnKind k)
{
    switch (k) {
    case GsnKind::Strategy: return 'S';
    case GsnKind::Context: return 'C';
    case GsnKind::Assumption: return 'A';
    case GsnKind::Justification: return 'J';
    default: return 'X';
    }
}

[[noreturn]] void fail(Kind k, const std::string& msg)
{
    throw ConversionError(k, msg);
}

struct Index {
    std::map<std::string, const GsnElement*> by_id;
    std::map<std::string, std::vector<std::string>> supported_by; // parent -> children, edge order
    std::map<std::string, std::vector<std::string>> contexts;     // element -> aux, edge order
    std::map<std::string, std::vector<std::string>> parents;
    std::map<std::string, int> context_owner_count;
};

Index build_index(const GsnDocument& doc)
{
    Index ix;
    for (const auto& e : doc.elements)
        if (!ix.by_id.emplace(e.id, &e).second)
            fail(Kind::InvalidStructure, "duplicate element id '" + e.id + "'");

    for (const auto& edge : doc.edges) {
        auto from = ix.by_id.find(edge.from);
        auto to = ix.by_id.find(edge.to);
        if (from == ix.by_id.end() || to == ix.by_id.end())
            fail(Kind::InvalidStructure, "edge " + edge.from + " -> " + edge.to + " references an unknown element");
        GsnKind fk = from->second->kind;
        GsnKind tk = to->second->kind;
        if (edge.type == GsnEdgeType::SupportedBy) {
            bool ok = (fk == GsnKind::Goal && (tk == GsnKind::Goal || tk == GsnKind::Strategy || tk == GsnKind::Solution)) ||
                      (fk == GsnKind::Strategy && (tk == GsnKind::Goal || tk == GsnKind::Solution));
            if (!ok)
                fail(Kind::InvalidStructure, "supported-by edge " + edge.from + " -> " + edge.to + " joins " +
                                                 std::string(to_string(fk)) + " to " + std::string(to_string(tk)));
            ix.supported_by[edge.from].push_back(edge.to);
            ix.parents[edge.to].push_back(edge.from);
        } else {
            if (is_auxiliary(fk) || !is_auxiliary(tk))
                fail(Kind::InvalidStructure, "in-context-of edge " + edge.from + " -> " + edge.to +
                                                 " must attach a context, assumption or justification");
            ix.contexts[edge.from].push_back(edge.to);
            ++ix.context_owner_count[edge.to];
        }
    }
    return ix;
}

void check_acyclic(const GsnDocument& doc, const Index& ix)
{
    std::map<std::string, int> colour;
    std::function<void(const std::string&)> visit = [&](const std::string& id) {
        colour[id] = 1;
        auto it = ix.supported_by.find(id);
        if (it != ix.supported_by.end())
            for (const auto& c : it->second) {
                if (colour[c] == 1)
                    fail(Kind::CyclicSupport, "supported-by cycle through '" + c + "'");
                if (colour[c] == 0)
                    visit(c);
            }
        colour[id] = 2;
    };
    for (const auto& e : doc.elements)
        if (colour[e.id] == 0 && !is_auxiliary(e.kind))
            visit(e.id);
}

} // namespace

ConversionError::ConversionError(Kind kind, const std::string& message)
    : Error(kind == Kind::MultipleRoots   ? "MultipleRoots"
            : kind == Kind::CyclicSupport ? "CyclicSupport"
                                          : "InvalidStructure",
            message),
      reason_(kind)
{
}

std::string_view to_string(GsnKind k)
{
    switch (k) {
    case GsnKind::Goal: return "Goal";
    case GsnKind::Strategy: return "Strategy";
    case GsnKind::Solution: return "Solution";
    case GsnKind::Context: return "Context";
    case GsnKind::Assumption: return "Assumption";
    case GsnKind::Justification: return "Justification";
    }
    return "?";
}

std::string_view to_string(GsnEdgeType t)
{
    return t == GsnEdgeType::SupportedBy ? "supported-by" : "in-context-of";
}

Project gsn_to_tdt(const GsnDocument& doc)
{
    Project project;
    if (doc.elements.empty())
        return project;

    Index ix = build_index(doc);
    check_acyclic(doc, ix);

    std::vector<std::string> roots;
    for (const auto& e : doc.elements) {
        if (is_auxiliary(e.kind)) {
            int owners = ix.context_owner_count[e.id];
            if (owners != 1)
                fail(Kind::InvalidStructure, std::string(to_string(e.kind)) + " '" + e.id + "' must be attached to exactly one element, found " +
                                                 std::to_string(owners));
            continue;
        }
        auto p = ix.parents.find(e.id);
        if (p == ix.parents.end())
            roots.push_back(e.id);
        else if (p->second.size() > 1)
            fail(Kind::InvalidStructure, std::string(to_string(e.kind)) + " '" + e.id + "' has " +
                                             std::to_string(p->second.size()) + " parents");
    }
    if (roots.size() > 1)
        fail(Kind::MultipleRoots, "document has " + std::to_string(roots.size()) + " roots");
    if (roots.empty())
        fail(Kind::CyclicSupport, "no root element");
    if (ix.by_id.at(roots.front())->kind != GsnKind::Goal)
        fail(Kind::InvalidStructure, "root '" + roots.front() + "' is not a goal");

    auto aux_annotations = [&](const std::string& owner, std::optional<std::size_t> anchor) {
        std::vector<Annotation> out;
        auto it = ix.contexts.find(owner);
        if (it == ix.contexts.end())
            return out;
        for (const auto& cid : it->second) {
            const GsnElement& c = *ix.by_id.at(cid);
            out.push_back(Annotation{role_of(c.kind), c.text, {}, anchor});
        }
        return out;
    };

    std::function<void(const std::string&)> convert = [&](const std::string& id) {
        const GsnElement& e = *ix.by_id.at(id);
        TdtNode node;
        node.id = e.id;
        node.kind = e.kind == GsnKind::Solution ? NodeKind::Solution : NodeKind::Goal;
        node.description = e.text;
        node.ctype = e.ctype;
        node.expr = e.expr;
        node.relation = e.relation;
        node.layout = e.layout;
        node.annotations = aux_annotations(id, std::nullopt);

        auto kids = ix.supported_by.find(id);
        if (kids != ix.supported_by.end()) {
            for (const auto& cid : kids->second) {
                const GsnElement& c = *ix.by_id.at(cid);
                if (c.kind != GsnKind::Strategy) {
                    node.children.push_back(cid);
                    continue;
                }
                std::size_t slot = node.annotations.size();
                node.annotations.push_back(Annotation{AnnotationRole::Strategy, c.text, {}, std::nullopt});
                for (auto& a : aux_annotations(cid, slot))
                    node.annotations.push_back(std::move(a));
                auto grand = ix.supported_by.find(cid);
                if (grand != ix.supported_by.end())
                    for (const auto& gid : grand->second) {
                        node.children.push_back(gid);
                        node.annotations[slot].covers.push_back(gid);
                    }
            }
        }
        std::vector<std::string> children = node.children;
        project.tree.nodes.emplace(id, std::move(node));
        for (const auto& c : children)
            convert(c);
    };

    project.tree.root = roots.front();
    convert(project.tree.root);
    return project;
}

GsnDocument tdt_to_gsn(const Project& p)
{
    GsnDocument doc;
    const auto& tree = p.tree;
    std::set<std::string> used;
    for (const auto& [id, n] : tree.nodes)
        used.insert(id);

    auto fresh_id = [&](const std::string& owner, GsnKind kind, std::size_t ordinal) {
        std::string base = owner + "." + id_letter(kind) + std::to_string(ordinal);
        std::string candidate = base;
        for (int k = 2; used.count(candidate); ++k)
            candidate = base + "_" + std::to_string(k);
        used.insert(candidate);
        return candidate;
    };

    for (const auto& id : tree.preorder()) {
        const TdtNode& n = tree.at(id);
        GsnElement el;
        el.id = n.id;
        el.kind = n.kind == NodeKind::Solution ? GsnKind::Solution : GsnKind::Goal;
        el.text = n.description;
        el.ctype = n.ctype;
        el.expr = n.expr;
        el.relation = n.relation;
        el.layout = n.layout;
        doc.elements.push_back(el);

        std::map<GsnKind, std::size_t> ordinal;
        std::vector<std::string> annotation_ids(n.annotations.size());
        for (std::size_t i = 0; i < n.annotations.size(); ++i) {
            const Annotation& a = n.annotations[i];
            GsnKind k = kind_of(a.role);
            annotation_ids[i] = fresh_id(n.id, k, ++ordinal[k]);
            doc.elements.push_back(GsnElement{annotation_ids[i], k, a.text, CType::None, std::nullopt,
                                              Relation::And, std::nullopt});
        }
        for (std::size_t i = 0; i < n.annotations.size(); ++i) {
            const Annotation& a = n.annotations[i];
            if (a.role == AnnotationRole::Strategy)
                continue;
            std::string owner = a.anchor && *a.anchor < annotation_ids.size() ? annotation_ids[*a.anchor] : n.id;
            doc.edges.push_back(GsnEdge{owner, annotation_ids[i], GsnEdgeType::InContextOf});
        }

        std::set<std::size_t> emitted;
        // Strategies without children keep their place among the others.
        auto emit_strategies_before = [&](std::size_t limit) {
            for (std::size_t i = 0; i < limit; ++i)
                if (n.annotations[i].role == AnnotationRole::Strategy && n.annotations[i].covers.empty() &&
                    emitted.insert(i).second)
                    doc.edges.push_back(GsnEdge{n.id, annotation_ids[i], GsnEdgeType::SupportedBy});
        };
        for (const auto& c : n.children) {
            std::optional<std::size_t> via;
            for (std::size_t i = 0; i < n.annotations.size() && !via; ++i)
                if (n.annotations[i].role == AnnotationRole::Strategy &&
                    std::find(n.annotations[i].covers.begin(), n.annotations[i].covers.end(), c) !=
                        n.annotations[i].covers.end())
                    via = i;
            if (!via) {
                doc.edges.push_back(GsnEdge{n.id, c, GsnEdgeType::SupportedBy});
                continue;
            }
            emit_strategies_before(*via);
            if (emitted.insert(*via).second)
                doc.edges.push_back(GsnEdge{n.id, annotation_ids[*via], GsnEdgeType::SupportedBy});
            doc.edges.push_back(GsnEdge{annotation_ids[*via], c, GsnEdgeType::SupportedBy});
        }
        for (std::size_t i = 0; i < n.annotations.size(); ++i)
            if (n.annotations[i].role == AnnotationRole::Strategy && !emitted.count(i))
                doc.edges.push_back(GsnEdge{n.id, annotation_ids[i], GsnEdgeType::SupportedBy});
    }
    return doc;
}

std::string canonical_form(const GsnDocument& doc)
{
    std::map<std::string, const GsnElement*> by_id;
    for (const auto& e : doc.elements)
        by_id.emplace(e.id, &e);
    std::map<std::string, std::vector<std::string>> supported, context;
    std::set<std::string> has_parent;
    for (const auto& edge : doc.edges) {
        (edge.type == GsnEdgeType::SupportedBy ? supported : context)[edge.from].push_back(edge.to);
        has_parent.insert(edge.to);
    }

    std::set<std::string> active;
    std::function<std::string(const std::string&)> canon = [&](const std::string& id) -> std::string {
        auto it = by_id.find(id);
        if (it == by_id.end())
            return "<missing " + id + ">";
        if (!active.insert(id).second)
            return "<cycle>";
        const GsnElement& e = *it->second;
        std::ostringstream os;
        os << to_string(e.kind) << std::quoted(e.text) << to_string(e.ctype) << std::quoted(e.expr.value_or(""))
           << to_string(e.relation);
        if (e.layout)
            os << "@" << e.layout->x << "," << e.layout->y;
        std::vector<std::string> ctx, sup;
        for (const auto& c : context[id])
            ctx.push_back(canon(c));
        for (const auto& c : supported[id])
            sup.push_back(canon(c));
        std::sort(ctx.begin(), ctx.end());
        std::sort(sup.begin(), sup.end());
        os << "{";
        for (const auto& c : ctx)
            os << c << ";";
        os << "|";
        for (const auto& c : sup)
            os << c << ";";
        os << "}";
        active.erase(id);
        return os.str();
    };

    std::vector<std::string> tops;
    for (const auto& e : doc.elements)
        if (!has_parent.count(e.id))
            tops.push_back(canon(e.id));
    std::sort(tops.begin(), tops.end());
    std::string out;
    for (const auto& t : tops)
        out += t + "\n";
    return out;
}

nlohmann::json to_json(const GsnDocument& doc)
{
    nlohmann::json elements = nlohmann::json::array();
    for (const auto& e : doc.elements) {
        nlohmann::json j{{"id", e.id}, {"kind", to_string(e.kind)}, {"text", e.text}};
        if (e.ctype != CType::None)
            j["ctype"] = to_string(e.ctype);
        if (e.expr)
            j["expr"] = *e.expr;
        if (e.relation != Relation::And)
            j["relation"] = to_string(e.relation);
        if (e.layout)
            j["layout"] = {{"x", e.layout->x}, {"y", e.layout->y}};
        elements.push_back(std::move(j));
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : doc.edges)
        edges.push_back({{"from", e.from}, {"to", e.to}, {"type", to_string(e.type)}});
    return {{"elements", elements}, {"edges", edges}};
}

GsnDocument gsn_from_json(const nlohmann::json& j)
{
    GsnDocument doc;
    try {
        for (const auto& je : j.at("elements")) {
            GsnElement e;
            e.id = je.at("id").get<std::string>();
            std::string kind = je.at("kind").get<std::string>();
            bool found = false;
            for (GsnKind k : {GsnKind::Goal, GsnKind::Strategy, GsnKind::Solution, GsnKind::Context,
                              GsnKind::Assumption, GsnKind::Justification})
                if (to_string(k) == kind) {
                    e.kind = k;
                    found = true;
                }
            if (!found)
                throw Error("InvalidGsn", "unknown GSN element kind '" + kind + "'");
            e.text = je.value("text", "");
            if (je.contains("ctype"))
                e.ctype = ctype_from_string(je["ctype"].get<std::string>());
            if (je.contains("expr") && !je["expr"].is_null())
                e.expr = je["expr"].get<std::string>();
            if (je.contains("relation"))
                e.relation = relation_from_string(je["relation"].get<std::string>());
            if (je.contains("layout") && !je["layout"].is_null())
                e.layout = Layout{je["layout"].at("x").get<double>(), je["layout"].at("y").get<double>()};
            doc.elements.push_back(std::move(e));
        }
        for (const auto& jd : j.at("edges")) {
            std::string type = jd.at("type").get<std::string>();
            GsnEdgeType t;
            if (type == "supported-by")
                t = GsnEdgeType::SupportedBy;
            else if (type == "in-context-of")
                t = GsnEdgeType::InContextOf;
            else
                throw Error("InvalidGsn", "unknown GSN edge type '" + type + "'");
            doc.edges.push_back(GsnEdge{jd.at("from").get<std::string>(), jd.at("to").get<std::string>(), t});
        }
    } catch (const nlohmann::json::exception& ex) {
        throw Error("InvalidGsn", std::string("malformed GSN document: ") + ex.what());
    }
    return doc;
}

} // namespace tdt
