#pragma once

#include <stdexcept>
#include <string>

namespace tdt {

/// Base class for every error raised by the library. `kind()` is a stable
/// machine-readable tag (used by `--json` error output and HTTP bodies).
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

} // namespace tdt
