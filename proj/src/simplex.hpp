#pragma once

#include <cstddef>
#include <vector>

namespace lorentz::detail {

// maximize c.x  subject to  A x <= b, x >= 0, with b >= 0 so the origin is
// feasible. Dense tableau, Bland's rule. Returns the optimal objective, or
// the best value reached when the iteration cap is hit (still a feasible
// value, hence a valid weak-duality bound). +inf when unbounded.
struct LpResult {
    double value = 0.0;
    std::vector<double> x;
    bool optimal = false;
};

LpResult maximize_packing(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                          const std::vector<double>& c, std::size_t max_pivots = 20000);

}  // namespace lorentz::detail
