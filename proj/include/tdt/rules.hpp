#pragma once

// Rule text: "C :- C1, C2." lines describing a tree skeleton.

#include "tdt/error.hpp"
#include "tdt/model.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace tdt {

struct Rule {
    std::string head;
    std::vector<std::string> body;

    bool operator==(const Rule&) const = default;
};

struct RuleText {
    std::vector<Rule> rules;

    bool operator==(const RuleText&) const = default;
};

/// Raised by skeleton_from_rules; kind() is NoUniqueRoot, RecursiveRules,
/// DuplicateHead or SharedChild.
class SkeletonError : public Error {
public:
    using Error::Error;
};

RuleText parse_rule_text(std::string_view src);
std::string print_rule_text(const RuleText& rt);

/// Each head becomes a goal whose children are its body atoms (relation And);
/// atoms without a rule become leaf goals.
Project skeleton_from_rules(const RuleText& rt);

/// The rule text describing the shape of `p` (one rule per internal node, preorder).
RuleText rules_from_tree(const Project& p);

} // namespace tdt
