#pragma once

// Machine- and human-readable renderings of evaluation results.

#include "tdt/evaluator.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace tdt {

enum class ReportFormat { Json, Markdown };

/// "json", "markdown" or "md".
ReportFormat report_format_from_string(std::string_view s);

nlohmann::json verdict_to_json(const Verdict& v);
Verdict verdict_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const EvaluationReport& r);
/// Inverse of report_to_json; throws tdt::Error("ValidationFailed") on malformed input.
EvaluationReport report_from_json(const nlohmann::json& j);

std::string render_report(const EvaluationReport& r, ReportFormat format);

enum class NodeColour { Blue, Green, Yellow };

std::string_view to_string(NodeColour c);

/// Yellow: Unsound or tainted; green: carries an expression; blue: otherwise.
NodeColour colour_of(const TdtNode& node, const EvaluationReport* r);

std::string export_dot(const Project& p, const EvaluationReport* r = nullptr);

} // namespace tdt
