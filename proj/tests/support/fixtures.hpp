#pragma once

#include "tdt/project_io.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>

#include <unistd.h>

namespace fixtures {

inline std::filesystem::path path(const std::string& name)
{
    return std::filesystem::path(TDT_FIXTURE_DIR) / name;
}

inline tdt::Project project(const std::string& name)
{
    return tdt::load_project(path(name));
}

inline std::string text(const std::string& name)
{
    return tdt::read_file(path(name));
}

inline nlohmann::json json(const std::string& name)
{
    return nlohmann::json::parse(text(name));
}

/// A fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag)
{
    auto dir = std::filesystem::temp_directory_path() / ("tdt-test-" + tag + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace fixtures
