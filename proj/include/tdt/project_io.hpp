#pragma once

// Project file (JSON) serialization and persistence.

#include "tdt/error.hpp"
#include "tdt/model.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace tdt {

class ValidationFailed : public Error {
public:
    explicit ValidationFailed(std::vector<Violation> violations);

    const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
    std::vector<Violation> violations_;
};

nlohmann::json node_to_json(const TdtNode& n);
TdtNode node_from_json(const nlohmann::json& j);

nlohmann::json project_to_json(const Project& p);

/// Structural decoding only (no invariant check). Throws
/// Error("SchemaVersionMismatch") for a version other than 1 and
/// Error("ValidationFailed") for malformed fields.
Project project_from_json(const nlohmann::json& j);

/// Decodes and validates; throws ValidationFailed listing every error.
Project parse_project(const std::string& text);

/// Canonical text: two-space indented JSON, nodes sorted by id, trailing newline.
std::string serialize_project(const Project& p);

Project load_project(const std::filesystem::path& path);
/// Atomic: writes a sibling temporary file and renames it over `path`.
void save_project(const Project& p, const std::filesystem::path& path);

/// Writes `text` to `path` atomically.
void write_file_atomic(const std::filesystem::path& path, const std::string& text);
std::string read_file(const std::filesystem::path& path);

} // namespace tdt
