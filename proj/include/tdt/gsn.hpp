#pragma once

#include "tdt/error.hpp"
#include "tdt/model.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace tdt {

enum class GsnKind { Goal, Strategy, Solution, Context, Assumption, Justification };
enum class GsnEdgeType { SupportedBy, InContextOf };

std::string_view to_string(GsnKind);
std::string_view to_string(GsnEdgeType);

struct GsnElement {
    std::string id;
    GsnKind kind = GsnKind::Goal;
    std::string text;
    // Optional formal payload so a TDT survives a trip through GSN.
    CType ctype = CType::None;
    std::optional<std::string> expr;
    Relation relation = Relation::And;
    std::optional<Layout> layout;

    bool operator==(const GsnElement&) const = default;
};

/// `from` is the supported (or contextualised) element, `to` the supporter (or context).
struct GsnEdge {
    std::string from;
    std::string to;
    GsnEdgeType type = GsnEdgeType::SupportedBy;

    bool operator==(const GsnEdge&) const = default;
};

struct GsnDocument {
    std::vector<GsnElement> elements;
    std::vector<GsnEdge> edges;

    bool operator==(const GsnDocument&) const = default;
};

class ConversionError : public Error {
public:
    enum class Kind { MultipleRoots, CyclicSupport, InvalidStructure };

    ConversionError(Kind kind, const std::string& message);
    Kind reason() const noexcept { return reason_; }

private:
    Kind reason_;
};

/// Goals and solutions become nodes; strategies and contextual elements
/// become annotations on the node they belong to.
Project gsn_to_tdt(const GsnDocument& doc);

/// Inverse of gsn_to_tdt up to element ids.
GsnDocument tdt_to_gsn(const Project& p);

/// Order-insensitive structural fingerprint (kinds, texts, formal payload, adjacency).
std::string canonical_form(const GsnDocument& doc);

inline bool isomorphic(const GsnDocument& a, const GsnDocument& b)
{
    return canonical_form(a) == canonical_form(b);
}

nlohmann::json to_json(const GsnDocument& doc);
GsnDocument gsn_from_json(const nlohmann::json& j);

} // namespace tdt
