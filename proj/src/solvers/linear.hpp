#pragma once

#include "poly.hpp"

namespace tdt::arith {

struct LinearResult {
    Outcome outcome = Outcome::Unknown;
    Assignment model;
    std::size_t peak_constraints = 0;
    std::size_t eliminated = 0;
};

/// Exact Fourier–Motzkin over the rationals for degree-1 constraints, with
/// strict/non-strict tracking. Unknown only when the constraint set grows past
/// `limit` during elimination.
LinearResult solve_linear(const std::vector<Constraint>& constraints, std::size_t limit = 40000);

} // namespace tdt::arith
