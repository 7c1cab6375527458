#pragma once

// Trustworthiness derivation tree (TDT) document model.
//
// A TDT is an assurance case reduced to goals (claims) and solutions
// (evidence). Each node may carry a formal expression in one of the
// constraint dialects; the edge tag of a parent (And/Or) selects how the
// children's expressions combine into the parent's proof obligation.

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tdt {

enum class NodeKind { Goal, Solution };
enum class AnnotationRole { Context, Assumption, Justification, Strategy };
enum class CType { Logical, Arithmetic, AbstractSet, ConcreteSet, None };
enum class Relation { And, Or };
enum class Status { Sound, Unsound, Unknown, NotEvaluated, IllFormed };

std::string_view to_string(NodeKind);
std::string_view to_string(AnnotationRole);
std::string_view to_string(CType);
std::string_view to_string(Relation);
std::string_view to_string(Status);

// Parsers for the names above; they throw tdt::Error("InvalidEnum") on unknown input.
NodeKind node_kind_from_string(std::string_view);
AnnotationRole annotation_role_from_string(std::string_view);
CType ctype_from_string(std::string_view);
Relation relation_from_string(std::string_view);
Status status_from_string(std::string_view);

struct Layout {
    double x = 0;
    double y = 0;
    bool operator==(const Layout&) const = default;
};

/// Auxiliary GSN content absorbed into a node.
struct Annotation {
    AnnotationRole role = AnnotationRole::Context;
    std::string text;
    /// Strategy annotations: the children that were reached through this strategy.
    std::vector<std::string> covers;
    /// Context-like annotations that were attached to a strategy: index of
    /// that strategy's annotation in the same node.
    std::optional<std::size_t> anchor;

    bool operator==(const Annotation&) const = default;
};

struct TdtNode {
    std::string id;
    NodeKind kind = NodeKind::Goal;
    std::string description;
    std::vector<Annotation> annotations;
    CType ctype = CType::None;
    std::optional<std::string> expr;
    Relation relation = Relation::And;
    std::vector<std::string> children;
    Status status = Status::NotEvaluated;
    std::optional<Layout> layout;
    /// Unknown JSON fields, kept so rewriting a file does not drop them.
    nlohmann::json extra = nlohmann::json::object();

    bool operator==(const TdtNode&) const = default;
};

struct TdtTree {
    std::string root;
    std::map<std::string, TdtNode> nodes;

    bool empty() const { return nodes.empty(); }
    bool contains(const std::string& id) const { return nodes.count(id) != 0; }
    const TdtNode& at(const std::string& id) const;
    TdtNode& at(const std::string& id);
    std::optional<std::string> parent_of(const std::string& id) const;
    /// Root-first depth-first order; ignores nodes unreachable from the root.
    std::vector<std::string> preorder() const;
    std::size_t depth() const;

    bool operator==(const TdtTree&) const = default;
};

struct Project {
    int version = 1;
    TdtTree tree;
    /// Raw variable name -> canonical name, applied when normalizing translations.
    std::map<std::string, std::string> variable_map;
    nlohmann::json metadata = nlohmann::json::object();
    nlohmann::json extra = nlohmann::json::object();

    bool operator==(const Project&) const = default;
};

enum class ViolationKind {
    BadVersion,
    MissingRoot,
    IdMismatch,
    DanglingChild,
    NotATree,
    Cycle,
    MultipleRoots,
    SolutionHasChildren,
    ExprCTypeMismatch,
    InvalidAnnotation,
    InvalidVariableMap,
    StrategyContextHoisted,
};

enum class Severity { Error, Warning };

struct Violation {
    ViolationKind kind;
    std::string node_id;
    std::string detail;
    Severity severity = Severity::Error;

    /// e.g. "DanglingChild(99)".
    std::string to_string() const;
    bool operator==(const Violation&) const = default;
};

std::string_view to_string(ViolationKind);

/// All invariant violations of `p`. Warnings do not make a project invalid.
std::vector<Violation> validate(const Project& p);

/// True when no violation has Error severity.
bool is_valid(const std::vector<Violation>& violations);

bool is_identifier(std::string_view name);

/// Ordered structural fingerprint that ignores node ids; equal fingerprints
/// mean equal projects up to renaming of ids.
std::string canonical_form(const Project& p);

} // namespace tdt
