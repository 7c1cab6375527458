#pragma once

#include "interval.hpp"
#include "poly.hpp"

#include <chrono>

namespace tdt::arith {

struct IcpOptions {
    std::uint64_t max_boxes = 100000;
    Rational min_width = Rational(1, 1000000000);
    int max_rounds = 50;
    std::chrono::steady_clock::time_point deadline = std::chrono::steady_clock::time_point::max();
};

struct IcpResult {
    Outcome outcome = Outcome::Unknown;
    Assignment model;
    std::uint64_t boxes = 0;
    std::size_t max_depth = 0;
    std::string unknown_reason; // BudgetExceeded, UnboundedVariable, MinWidth, Timeout
    std::vector<std::string> unbounded;
};

/// Branch-and-prune over polynomial constraints. Unsat only when every box is
/// refuted by interval reasoning (or an exact check on a point box); Sat only
/// with an exactly checked rational point.
IcpResult solve_icp(const std::vector<Constraint>& constraints, const IcpOptions& opts);

} // namespace tdt::arith
