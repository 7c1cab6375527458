#pragma once

// Bottom-up evaluation of a TDT: one proof obligation per family
// (parent + children), discharged by the built-in solvers.

#include "tdt/model.hpp"
#include "tdt/solver.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tdt {

struct NodeResult {
    std::string id;
    Status status = Status::NotEvaluated;
    /// Leaf whose expression is taken as given evidence (Sound by stipulation).
    bool evidence_assumed = false;
    bool vacuous_premises = false;
    /// Textual obligation; empty for leaves and unevaluated families.
    std::string obligation;
    std::optional<Verdict> verdict;
    std::string explanation;

    bool operator==(const NodeResult&) const = default;
};

struct Risk {
    std::string node_id;
    Status status = Status::Unsound;
    std::string obligation;
    std::optional<Verdict> verdict;
    std::string explanation;

    bool operator==(const Risk&) const = default;
};

struct EvaluationReport {
    std::uint64_t revision = 0;
    std::string timestamp;
    SolverBudget budget;
    std::map<std::string, NodeResult> nodes;
    std::map<std::string, std::size_t> counts; // status name -> count
    std::vector<Risk> risks;                    // every node whose status is not Sound, in preorder
    std::vector<std::string> tainted;           // sorted
    nlohmann::json diagnostics = nlohmann::json::object();

    const NodeResult& at(const std::string& id) const;
    /// Number of internal families that were checked (not leaves, not NotEvaluated).
    std::size_t checked_families() const;
    bool operator==(const EvaluationReport&) const = default;
};

struct EvaluationOptions {
    SolverBudget budget;
    unsigned parallelism = 0; // 0: hardware concurrency
    std::uint64_t revision = 0;
};

/// Builds the obligation for the family rooted at `id`. Throws tdt::Error
/// (SyntaxError, MixedDialect, MixedCtypes, MissingExpr) when it cannot.
Obligation build_obligation(const Project& p, const std::string& id);

/// "(F1) & (F2) => (F)" style rendering of a family.
std::string describe_obligation(const Project& p, const std::string& id);

NodeResult evaluate_subtree(const Project& p, const std::string& id, const SolverBudget& budget = {});
EvaluationReport evaluate_tree(const Project& p, const EvaluationOptions& opts = {});

/// Strict ancestors of nodes that are neither Sound nor NotEvaluated.
std::vector<std::string> tainted_set(const TdtTree& tree, const std::map<std::string, NodeResult>& nodes);

/// Writes statuses back into the project's nodes.
void apply_statuses(Project& p, const EvaluationReport& r);

} // namespace tdt
