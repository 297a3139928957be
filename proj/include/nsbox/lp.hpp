#pragma once

#include <vector>

#include "nsbox/rational.hpp"

namespace nsbox {

// Exact linear programming in standard form:
//   minimize c.x  subject to  A x = b, x >= 0.
// Two-phase simplex with Bland's rule over rationals; no tolerances anywhere.
// Redundant equality rows are fine (they surface as zero artificial rows).
struct LpResult {
    enum class Status { Optimal, Infeasible, Unbounded };
    Status status;
    Rat objective;           // valid iff Optimal
    std::vector<Rat> x;      // valid iff Optimal
};

LpResult solve_lp(const std::vector<std::vector<Rat>>& a,
                  const std::vector<Rat>& b,
                  const std::vector<Rat>& c);

}  // namespace nsbox
