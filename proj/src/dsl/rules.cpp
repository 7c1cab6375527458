#include "tdt/rules.hpp"

#include "lexer.hpp"

#include <functional>
#include <map>
#include <set>

namespace tdt {

RuleText parse_rule_text(std::string_view src)
{
    using dsl::Tok;
    dsl::Cursor cur(dsl::tokenize(src));
    RuleText rt;
    while (!cur.done()) {
        Rule r;
        r.head = cur.expect(Tok::Ident, "rule head").text;
        cur.expect(Tok::Neck, "':-'");
        do
            r.body.push_back(cur.expect(Tok::Ident, "body atom").text);
        while (cur.accept(Tok::Comma));
        cur.expect(Tok::Dot, "',' or '.'");
        rt.rules.push_back(std::move(r));
    }
    return rt;
}

std::string print_rule_text(const RuleText& rt)
{
    std::string out;
    for (const auto& r : rt.rules) {
        out += r.head + " :- ";
        for (std::size_t i = 0; i < r.body.size(); ++i)
            out += (i ? ", " : "") + r.body[i];
        out += ".\n";
    }
    return out;
}

Project skeleton_from_rules(const RuleText& rt)
{
    Project p;
    if (rt.rules.empty())
        throw SkeletonError("NoUniqueRoot", "rule text has no rules");

    std::map<std::string, const Rule*> by_head;
    for (const auto& r : rt.rules)
        if (!by_head.emplace(r.head, &r).second)
            throw SkeletonError("DuplicateHead", "'" + r.head + "' is the head of more than one rule");

    // Recursion first: a cycle also hides the root, and the cycle is the real problem.
    std::map<std::string, int> colour;
    std::function<void(const std::string&)> visit = [&](const std::string& head) {
        colour[head] = 1;
        for (const auto& b : by_head.at(head)->body) {
            if (!by_head.count(b))
                continue;
            if (colour[b] == 1)
                throw SkeletonError("RecursiveRules", "'" + b + "' depends on itself");
            if (colour[b] == 0)
                visit(b);
        }
        colour[head] = 2;
    };
    for (const auto& r : rt.rules)
        if (colour[r.head] == 0)
            visit(r.head);

    std::map<std::string, std::string> parent;
    for (const auto& r : rt.rules) {
        std::set<std::string> seen;
        for (const auto& b : r.body) {
            if (!seen.insert(b).second)
                throw SkeletonError("SharedChild", "'" + b + "' appears twice in the body of '" + r.head + "'");
            auto [it, fresh] = parent.emplace(b, r.head);
            if (!fresh)
                throw SkeletonError("SharedChild",
                                    "'" + b + "' appears under both '" + it->second + "' and '" + r.head + "'");
        }
    }

    std::vector<std::string> roots;
    for (const auto& r : rt.rules)
        if (!parent.count(r.head))
            roots.push_back(r.head);
    if (roots.size() != 1) {
        std::string names;
        for (const auto& r : roots)
            names += (names.empty() ? "" : ", ") + r;
        throw SkeletonError("NoUniqueRoot", "expected exactly one root, found " + std::to_string(roots.size()) +
                                                (names.empty() ? "" : " (" + names + ")"));
    }

    std::function<void(const std::string&)> build = [&](const std::string& id) {
        TdtNode n;
        n.id = id;
        n.description = id;
        auto it = by_head.find(id);
        if (it != by_head.end())
            n.children = it->second->body;
        auto kids = n.children;
        p.tree.nodes.emplace(id, std::move(n));
        for (const auto& c : kids)
            build(c);
    };
    p.tree.root = roots.front();
    build(p.tree.root);
    return p;
}

RuleText rules_from_tree(const Project& p)
{
    RuleText rt;
    for (const auto& id : p.tree.preorder()) {
        const auto& n = p.tree.at(id);
        if (!n.children.empty())
            rt.rules.push_back(Rule{id, n.children});
    }
    return rt;
}

} // namespace tdt
